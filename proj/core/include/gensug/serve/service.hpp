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

#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

#include "gensug/corpus/feedback.hpp"
#include "gensug/serve/snapshot.hpp"

namespace gensug::serve {

struct FeedbackEvent {
  std::string user_id;
  std::string prefix;
  std::string query;
  corpus::Level level = corpus::Level::kShow;
  std::int64_t ts = 0;         // client timestamp
  std::int64_t server_ts = 0;  // strictly increasing per log writer

  bool operator==(const FeedbackEvent&) const = default;
};

std::string event_to_jsonl(const FeedbackEvent& event);
/// Throws std::invalid_argument on malformed input or an unknown level.
FeedbackEvent event_from_jsonl(const std::string& line);

/// Single serialized appender: one JSONL line per event, flushed before the
/// call returns.
class FeedbackLog {
 public:
  explicit FeedbackLog(std::string path);
  /// Assigns server_ts and appends. Returns the stored event.
  FeedbackEvent append(FeedbackEvent event);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::mutex mutex_;
  std::ofstream out_;
  std::int64_t last_server_ts_ = 0;
};

struct ExportResult {
  std::vector<corpus::InteractionRecord> records;
  std::size_t corrupt_lines = 0;
};

/// Feedback log to interaction records; unparseable lines are counted and
/// skipped. A missing log reads as empty.
ExportResult export_feedback_dataset(const std::string& feedback_log);

struct SwapResult {
  bool ok = false;
  std::string reason;
};

class SuggestService {
 public:
  /// `seed_records` prime per-user history (positive levels only), as does
  /// any existing content of the feedback log.
  SuggestService(std::shared_ptr<const ModelSnapshot> snapshot, const std::string& feedback_log,
                 std::span<const corpus::InteractionRecord> seed_records = {},
                 std::size_t history_len = 10);

  /// Throws std::invalid_argument for an empty prefix or k < 1.
  std::vector<model::Suggestion> suggest(const std::string& user_id, const std::string& prefix,
                                         std::size_t k = 16) const;
  /// Same, pinned to the given snapshot.
  std::vector<model::Suggestion> suggest_on(const ModelSnapshot& snapshot,
                                            const std::string& user_id, const std::string& prefix,
                                            std::size_t k) const;

  /// Validates the level name, appends, and updates history for positive
  /// levels. Throws std::invalid_argument naming the valid levels.
  FeedbackEvent record_feedback(const std::string& user_id, const std::string& prefix,
                                const std::string& query, const std::string& level,
                                std::int64_t ts);

  /// Installs `next` when it verifies and, if given, carries
  /// `expected_hash`. A refused swap leaves the current snapshot serving.
  SwapResult snapshot_swap(std::shared_ptr<const ModelSnapshot> next,
                           const std::string& expected_hash = {});
  std::shared_ptr<const ModelSnapshot> snapshot() const;

  std::vector<std::string> history_of(const std::string& user_id) const;

 private:
  void remember(const std::string& user_id, std::int64_t ts, const std::string& query);

  mutable std::mutex snapshot_mutex_;
  std::shared_ptr<const ModelSnapshot> snapshot_;
  FeedbackLog log_;
  std::size_t history_len_;
  mutable std::shared_mutex history_mutex_;
  std::map<std::string, std::vector<std::pair<std::int64_t, std::string>>> history_;
};

}  // namespace gensug::serve
