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
#include <map>
#include <span>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "gensug/corpus/catalog.hpp"
#include "gensug/corpus/feedback.hpp"
#include "gensug/model/user_context.hpp"
#include "gensug/pref/reward.hpp"

namespace gensug::corpus {

/// count(prefix, level, query) / count(prefix, level) over all users.
class RatioTable {
 public:
  explicit RatioTable(std::span<const InteractionRecord> records);
  /// Throws std::out_of_range when no record exists at (prefix, level).
  double ratio(const std::string& prefix, Level level, const std::string& query) const;
  std::size_t count(const std::string& prefix, Level level) const;

 private:
  std::map<std::pair<std::string, Level>, std::size_t> slice_;
  std::map<std::tuple<std::string, Level, std::string>, std::size_t> cell_;
};

double compute_level_ratio(std::span<const InteractionRecord> records,
                           const std::string& prefix, Level level,
                           const std::string& query);

/// Positive-level queries per user, queried by time.
class HistoryIndex {
 public:
  explicit HistoryIndex(std::span<const InteractionRecord> records);
  /// Up to `limit` queries from records with timestamp strictly before `ts`,
  /// most recent first.
  std::vector<std::string> before(const std::string& user_id, std::int64_t ts,
                                  std::size_t limit) const;
  /// Most recent `limit` queries overall.
  std::vector<std::string> latest(const std::string& user_id, std::size_t limit) const;

 private:
  std::unordered_map<std::string, std::vector<std::pair<std::int64_t, std::string>>> by_user_;
};

struct SftExample {
  UserContext context;  // related and profile are filled in by later stages
  std::string target;
  std::int64_t ts = 0;
};

/// One example per positive-level record, in (ts, record order) order.
std::vector<SftExample> build_sft_dataset(std::span<const InteractionRecord> records,
                                          std::size_t history_len = 10);

struct LabeledQuery {
  std::string query;
  Level level = Level::kShow;
  double pi = 0.0;
  double reward = 0.0;
};

struct PreferenceGroup {
  UserContext context;
  LabeledQuery win;
  std::vector<LabeledQuery> loses;
  std::vector<double> rw;  // parallel to loses
  std::int64_t ts = 0;
};

struct PairPolicy {
  bool listwise = true;
  // Also allow any strictly stronger non-positive level as the win.
  bool adjacent_level_pairs = false;
  std::size_t rand_negatives = 1;
  std::uint64_t seed = 0;
  const Catalog* catalog = nullptr;  // required when rand_negatives > 0
  pref::RewardParams reward{};
  std::size_t history_len = 10;
};

/// Groups one page view (user, prefix, ts). Within a page view each query
/// keeps its strongest level. Pairs whose reward gap is not positive are
/// skipped; list-wise groups hold every valid lose of one win.
std::vector<PreferenceGroup> build_preference_groups(
    std::span<const InteractionRecord> records, const PairPolicy& policy);

/// Records ordered by (ts, user, prefix), stable.
std::vector<InteractionRecord> chronological(std::span<const InteractionRecord> records);

}  // namespace gensug::corpus
