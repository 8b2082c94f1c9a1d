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

#include "gensug/pref/reward.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gensug::pref {

void RewardParams::validate() const {
  for (std::size_t i = 0; i + 2 < lambda.size(); ++i) {
    if (!(lambda[i] > lambda[i + 1])) {
      throw std::invalid_argument("reward lambda must be strictly decreasing across levels");
    }
  }
  if (lambda.back() > lambda[lambda.size() - 2] || lambda.back() < 0.0) {
    throw std::invalid_argument("reward lambda for Rand must be in [0, lambda(NotShow)]");
  }
  if (delta < 0.0) throw std::invalid_argument("delta must be >= 0");
  if (!(rw_max > 0.0)) throw std::invalid_argument("rw_max must be > 0");
}

double reward(corpus::Level level, double pi, const RewardParams& params) {
  if (!(pi >= 0.0 && pi <= 1.0)) {
    throw std::domain_error("reward: pi must lie in [0, 1], got " + std::to_string(pi));
  }
  return params.lambda[corpus::level_index(level)] * std::exp(pi);
}

double reward_weight(double r_win, double r_lose, const RewardParams& params) {
  if (!(r_win > r_lose)) {
    throw std::domain_error("reward_weight: win reward " + std::to_string(r_win) +
                            " does not exceed lose reward " + std::to_string(r_lose));
  }
  return std::min(params.rw_max, 1.0 / (r_win - r_lose));
}

}  // namespace gensug::pref
