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

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "gensug/corpus/catalog.hpp"
#include "gensug/corpus/feedback.hpp"

namespace gensug::corpus {

struct SimUser {
  std::string id;
  std::vector<std::string> affinity;  // preferred categories, strongest first
  std::string favorite_modifier;
  std::string profile;
};

/// Distribution of the intended query's level over {Order, ItemClick, Click,
/// Show, NotShow}, conditioned on (affinity match, head popularity).
struct LevelTable {
  // Row index: 2 * (affinity match ? 0 : 1) + (head ? 0 : 1).
  std::array<std::array<double, 5>, 4> rows = {{
      {0.10, 0.15, 0.50, 0.20, 0.05},
      {0.06, 0.12, 0.50, 0.25, 0.07},
      {0.03, 0.07, 0.40, 0.40, 0.10},
      {0.02, 0.05, 0.33, 0.45, 0.15},
  }};
  static std::size_t row(bool affinity_match, bool head) {
    return 2 * (affinity_match ? 0 : 1) + (head ? 0 : 1);
  }
};

struct SimConfig {
  std::size_t n_users = 60;
  std::size_t n_events = 1000;  // page views; each emits several records
  double affinity_prob = 0.85;
  double favorite_prob = 0.5;
  // Chance a page view re-issues one of the user's recent intended queries.
  double repeat_prob = 0.3;
  std::size_t recent_window = 8;
  std::size_t panel_size = 6;
  std::size_t show_negatives = 3;
  std::size_t not_show_negatives = 1;
  std::size_t max_gap_seconds = 30;
  LevelTable levels{};
};

/// One page view's worth of ground truth, kept for diagnostics and tests.
struct SimTrace {
  std::string user_id;
  std::string prefix;
  std::string intended;
  bool affinity_match = false;
  bool head = false;
  Level level = Level::kShow;
};

struct SimulatedLog {
  std::vector<InteractionRecord> records;
  std::vector<SimUser> users;
  std::vector<SimTrace> traces;
};

/// Deterministic given (catalog, config, seed). Records of one page view share
/// user, prefix, and timestamp; every record's query starts with its prefix.
SimulatedLog simulate_logs(const Catalog& catalog, const SimConfig& config,
                           std::uint64_t seed);

/// Whether the query ranks in the top third of its category by popularity.
bool is_head_query(const Catalog& catalog, std::size_t entry);

}  // namespace gensug::corpus
