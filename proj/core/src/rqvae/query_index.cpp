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

#include "gensug/rqvae/query_index.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <stdexcept>

#include "gensug/align/encoder.hpp"
#include "util/json_io.hpp"

namespace gensug::rqvae {

namespace {
const std::vector<std::size_t> kNoEntries;
}  // namespace

QueryIndex::QueryIndex(std::vector<IndexEntry> entries, std::size_t levels)
    : entries_(std::move(entries)), levels_(levels) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& codes = entries_[i].id.codes;
    if (codes.size() != levels_) {
      throw std::invalid_argument("QueryIndex: entry '" + entries_[i].query + "' has " +
                                  std::to_string(codes.size()) + " codes, expected " +
                                  std::to_string(levels_));
    }
    for (std::size_t len = 0; len <= levels_; ++len) {
      buckets_[std::vector<int>(codes.begin(), codes.begin() + static_cast<std::ptrdiff_t>(len))]
          .push_back(i);
    }
  }
}

const std::vector<std::size_t>& QueryIndex::bucket(const SemanticID& id, std::size_t length) const {
  if (length > id.codes.size()) {
    throw std::invalid_argument("QueryIndex::bucket: prefix length exceeds id length");
  }
  auto it = buckets_.find(
      std::vector<int>(id.codes.begin(), id.codes.begin() + static_cast<std::ptrdiff_t>(length)));
  return it == buckets_.end() ? kNoEntries : it->second;
}

void QueryIndex::save(const std::string& path, const std::string& config_hash) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << detail::json{{"format", "gensug.query_index"},
                      {"version", 1},
                      {"levels", levels_},
                      {"config_hash", config_hash}}
             .dump()
      << '\n';
  for (const auto& e : entries_) {
    out << detail::json{{"query", e.query}, {"embedding", e.embedding}, {"codes", e.id.codes}}.dump()
        << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

QueryIndex QueryIndex::load(const std::string& path, std::string* config_hash) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty index file");
  std::size_t levels = 0;
  std::vector<IndexEntry> entries;
  try {
    const auto header = detail::json::parse(line);
    if (header.value("format", "") != "gensug.query_index") {
      throw std::runtime_error(path + ": not a query index");
    }
    levels = header.at("levels");
    if (config_hash) *config_hash = header.at("config_hash").get<std::string>();
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto j = detail::json::parse(line);
      entries.push_back({j.at("query"), j.at("embedding").get<std::vector<double>>(),
                         SemanticID{j.at("codes").get<std::vector<int>>()}});
    }
  } catch (const detail::json::exception& e) {
    throw std::runtime_error(path + ": malformed index line: " + e.what());
  }
  return QueryIndex(std::move(entries), levels);
}

std::vector<std::size_t> gather_candidates(const QueryIndex& index, const SemanticID& prefix_id,
                                           std::size_t min_candidates) {
  std::vector<std::size_t> out;
  std::set<std::size_t> seen;
  for (std::size_t len = index.levels() + 1; len-- > 0;) {
    for (auto i : index.bucket(prefix_id, len)) {
      if (seen.insert(i).second) out.push_back(i);
    }
    if (out.size() >= min_candidates) break;
  }
  return out;
}

std::vector<std::string> screen_candidates(std::span<const Candidate> candidates,
                                           std::span<const double> prefix_emb, std::size_t k,
                                           double lambda_div) {
  if (!(lambda_div > 0.0 && lambda_div < 1.0)) {
    throw std::invalid_argument("screen_candidates: lambda_div must lie in (0, 1)");
  }
  std::vector<const Candidate*> pool;
  std::set<std::string> strings;
  for (const auto& c : candidates) {
    if (strings.insert(c.query).second) pool.push_back(&c);
  }
  std::vector<double> relevance;
  for (const auto* c : pool) relevance.push_back(align::cosine(c->embedding, prefix_emb));

  std::vector<std::string> picked;
  std::vector<const Candidate*> chosen;
  std::vector<bool> used(pool.size(), false);
  std::vector<double> max_sim(pool.size(), 0.0);
  while (picked.size() < k && picked.size() < pool.size()) {
    std::size_t best = pool.size();
    double best_score = 0.0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (used[i]) continue;
      const double score = lambda_div * relevance[i] - (1.0 - lambda_div) * max_sim[i];
      if (best == pool.size() || score > best_score) {
        best = i;
        best_score = score;
      }
    }
    used[best] = true;
    picked.push_back(pool[best]->query);
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (used[i]) continue;
      const double s = align::cosine(pool[i]->embedding, pool[best]->embedding);
      max_sim[i] = chosen.empty() ? s : std::max(max_sim[i], s);
    }
    chosen.push_back(pool[best]);
  }
  return picked;
}

std::vector<std::string> related_query_search(const QueryIndex& index, const SemanticID& prefix_id,
                                              std::span<const double> prefix_emb, std::size_t k,
                                              double lambda_div) {
  if (k < 1) throw std::invalid_argument("related_query_search: k must be >= 1");
  std::vector<Candidate> candidates;
  for (auto i : gather_candidates(index, prefix_id, 4 * k)) {
    candidates.push_back({index.entries()[i].query, index.entries()[i].embedding});
  }
  return screen_candidates(candidates, prefix_emb, k, lambda_div);
}

}  // namespace gensug::rqvae
