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

#include "gensug/corpus/feedback.hpp"

namespace gensug::pref {

struct RewardParams {
  std::array<double, 6> lambda = corpus::kLevelLambda;
  double rw_max = 10.0;
  double delta = 0.1;
  double alpha = 0.5;
  double beta_dpo = 0.1;
  // Replaces the pair-wise hinge argument with -max(0, delta - margin).
  bool corrected_pair_hinge = false;

  /// Throws std::invalid_argument when lambda is not strictly decreasing over
  /// the first five levels, or delta < 0, or rw_max <= 0.
  void validate() const;
};

/// lambda(level) * e^pi. Throws std::domain_error unless pi is in [0, 1].
double reward(corpus::Level level, double pi, const RewardParams& params = {});

/// min(rw_max, 1 / (r_win - r_lose)). Throws std::domain_error when
/// r_win <= r_lose; such pairs must be skipped upstream.
double reward_weight(double r_win, double r_lose, const RewardParams& params = {});

}  // namespace gensug::pref
