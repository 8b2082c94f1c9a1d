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
#include <vector>

#include "gensug/ndgrad/tensor.hpp"

namespace gensug::nd {

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t worst_param = 0;
  std::size_t worst_index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
};

/// Builds the scalar loss from the current parameter values. Called once under
/// a recording graph for the analytic gradient and 2 * numel more times,
/// without recording, for central differences.
using LossFn = std::function<Tensor()>;

/// Max over all coordinates of |analytic - numeric| / max(floor, |analytic| +
/// |numeric|), numeric being the central difference with step h. The floor
/// keeps rounding noise in the difference quotient (about 1e-16 * |loss| / h)
/// from dominating coordinates whose true gradient is zero. Parameter grads
/// are overwritten. Throws if any loss evaluation is non-finite.
GradCheckResult check_gradient(const LossFn& loss_fn, std::vector<Tensor> params,
                               double h = 1e-5, double floor = 1e-5);

}  // namespace gensug::nd
