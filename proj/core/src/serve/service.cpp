// Copyright 2026 The gensug Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gensug/serve/service.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <stdexcept>

#include "json.hpp"

namespace gensug::serve {

using json = nlohmann::json;

std::string event_to_jsonl(const FeedbackEvent& e) {
  return json{{"user", e.user_id},
              {"prefix", e.prefix},
              {"query", e.query},
              {"level", corpus::level_name(e.level)},
              {"ts", e.ts},
              {"server_ts", e.server_ts}}
      .dump();
}

FeedbackEvent event_from_jsonl(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
    FeedbackEvent e;
    e.user_id = j.at("user").get<std::string>();
    e.prefix = j.at("prefix").get<std::string>();
    e.query = j.at("query").get<std::string>();
    e.level = corpus::parse_level(j.at("level").get<std::string>());
    e.ts = j.at("ts").get<std::int64_t>();
    e.server_ts = j.value("server_ts", std::int64_t{0});
    return e;
  } catch (const json::exception& ex) {
    throw std::invalid_argument(std::string("malformed feedback line: ") + ex.what());
  }
}

FeedbackLog::FeedbackLog(std::string path) : path_(std::move(path)) {
  const auto parent = std::filesystem::path(path_).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  out_.open(path_, std::ios::app);
  if (!out_) throw std::runtime_error("cannot open feedback log " + path_);
}

FeedbackEvent FeedbackLog::append(FeedbackEvent event) {
  const std::lock_guard lock(mutex_);
  const auto now = std::chrono::duration_cast<std::chrono::microseconds>(
                       std::chrono::system_clock::now().time_since_epoch())
                       .count();
  last_server_ts_ = std::max<std::int64_t>(now, last_server_ts_ + 1);
  event.server_ts = last_server_ts_;
  const auto line = event_to_jsonl(event) + '\n';
  out_.write(line.data(), static_cast<std::streamsize>(line.size()));
  out_.flush();
  if (!out_) throw std::runtime_error("write failed for feedback log " + path_);
  return event;
}

ExportResult export_feedback_dataset(const std::string& feedback_log) {
  ExportResult result;
  std::ifstream in(feedback_log);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      const auto e = event_from_jsonl(line);
      result.records.push_back({e.user_id, e.prefix, e.query, e.level, e.ts});
    } catch (const std::invalid_argument&) {
      ++result.corrupt_lines;
    }
  }
  return result;
}

SuggestService::SuggestService(std::shared_ptr<const ModelSnapshot> snapshot,
                               const std::string& feedback_log,
                               std::span<const corpus::InteractionRecord> seed_records,
                               std::size_t history_len)
    : snapshot_(std::move(snapshot)), log_(feedback_log), history_len_(history_len) {
  if (!snapshot_) throw std::invalid_argument("SuggestService: null snapshot");
  for (const auto& r : seed_records) {
    if (corpus::is_positive(r.level)) remember(r.user_id, r.ts, r.query);
  }
  for (const auto& r : export_feedback_dataset(feedback_log).records) {
    if (corpus::is_positive(r.level)) remember(r.user_id, r.ts, r.query);
  }
}

void SuggestService::remember(const std::string& user_id, std::int64_t ts, const std::string& query) {
  const std::unique_lock lock(history_mutex_);
  auto& events = history_[user_id];
  const std::pair<std::int64_t, std::string> item{ts, query};
  events.insert(std::upper_bound(events.begin(), events.end(), item,
                                 [](const auto& a, const auto& b) { return a.first < b.first; }),
                item);
}

std::vector<std::string> SuggestService::history_of(const std::string& user_id) const {
  const std::shared_lock lock(history_mutex_);
  std::vector<std::string> out;
  auto it = history_.find(user_id);
  if (it == history_.end()) return out;
  for (auto r = it->second.rbegin(); r != it->second.rend() && out.size() < history_len_; ++r) {
    out.push_back(r->second);
  }
  return out;
}

std::shared_ptr<const ModelSnapshot> SuggestService::snapshot() const {
  const std::lock_guard lock(snapshot_mutex_);
  return snapshot_;
}

std::vector<model::Suggestion> SuggestService::suggest_on(const ModelSnapshot& snap,
                                                          const std::string& user_id,
                                                          const std::string& prefix,
                                                          std::size_t k) const {
  if (prefix.empty()) throw std::invalid_argument("prefix must be non-empty");
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  UserContext ctx;
  ctx.user_id = user_id;
  ctx.prefix = prefix;
  ctx.related = snap.related(prefix);
  ctx.history = history_of(user_id);
  ctx.profile = snap.profile_of(user_id);
  return snap.generate(ctx, k);
}

std::vector<model::Suggestion> SuggestService::suggest(const std::string& user_id,
                                                       const std::string& prefix,
                                                       std::size_t k) const {
  const auto snap = snapshot();
  return suggest_on(*snap, user_id, prefix, k);
}

FeedbackEvent SuggestService::record_feedback(const std::string& user_id, const std::string& prefix,
                                              const std::string& query, const std::string& level,
                                              std::int64_t ts) {
  FeedbackEvent e;
  e.user_id = user_id;
  e.prefix = prefix;
  e.query = query;
  e.level = corpus::parse_level(level);
  e.ts = ts;
  if (user_id.empty() || query.empty()) throw std::invalid_argument("user and query are required");
  e = log_.append(std::move(e));
  if (corpus::is_positive(e.level)) remember(e.user_id, e.ts, e.query);
  return e;
}

SwapResult SuggestService::snapshot_swap(std::shared_ptr<const ModelSnapshot> next,
                                         const std::string& expected_hash) {
  if (!next) return {false, "null snapshot"};
  if (!next->verified()) return {false, "component hashes do not match the snapshot config"};
  if (!expected_hash.empty() && next->config_hash() != expected_hash) {
    return {false, "snapshot hash " + next->config_hash() + " != expected " + expected_hash};
  }
  const std::lock_guard lock(snapshot_mutex_);
  snapshot_ = std::move(next);
  return {true, {}};
}

}  // namespace gensug::serve
