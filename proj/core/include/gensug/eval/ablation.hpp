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

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "gensug/eval/metrics.hpp"

namespace gensug::eval {

using SuggestFn = std::function<std::vector<std::string>(const EvalCase&)>;

struct System {
  std::string name;
  SuggestFn suggest;
};

struct SliceMetrics {
  std::size_t cases = 0;
  double hit_rate = 0.0;
  double mrr = 0.0;
};

struct SystemRow {
  std::string name;
  SliceMetrics overall;
  std::map<Popularity, SliceMetrics> slices;
};

struct AssertionResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct EvalReport {
  std::size_t k = 16;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::vector<SystemRow> rows;
  std::vector<AssertionResult> assertions;

  const SystemRow& row(const std::string& name) const;
  bool all_passed() const;
  /// Machine-readable form.
  std::string to_json() const;
  /// Aligned plain-text table with one line per system and assertion.
  std::string table() const;
};

/// Runs every system on the same cases in order. Throws std::invalid_argument
/// when `systems` is empty or a case has no relevant query.
EvalReport run_ablation(std::span<const System> systems, std::span<const EvalCase> cases,
                        std::size_t k, const std::string& config_hash, std::uint64_t seed);

struct OrderingNames {
  std::string mpc = "mpc";
  std::string sft = "sft";
  std::string pair = "sft+pair";
  std::string list = "sft+list";
  std::string list_no_related = "sft+list-no-related";
};

/// Appends the comparative checks: list >= pair >= sft >= mpc on HR@k and
/// MRR, list - sft >= min_gain on HR@k, and full - no-related >= min_tail_gain
/// on long-tail HR@k.
void add_ordering_assertions(EvalReport& report, const OrderingNames& names = {},
                             double min_gain = 0.02, double min_tail_gain = 0.01);

}  // namespace gensug::eval
