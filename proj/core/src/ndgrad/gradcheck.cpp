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

#include "gensug/ndgrad/gradcheck.hpp"

#include <cmath>
#include <stdexcept>

#include "gensug/ndgrad/graph.hpp"

namespace gensug::nd {

namespace {

double finite_loss(const LossFn& fn) {
  NoGradGuard guard;
  const double v = fn().item();
  if (!std::isfinite(v)) throw std::domain_error("check_gradient: non-finite loss");
  return v;
}

}  // namespace

GradCheckResult check_gradient(const LossFn& loss_fn, std::vector<Tensor> params,
                               double h, double floor) {
  if (!(h > 0.0) || !(floor > 0.0)) {
    throw std::invalid_argument("check_gradient: h and floor must be positive");
  }
  for (auto& p : params) {
    p.set_requires_grad(true);
    p.zero_grad();
  }
  {
    Graph graph;
    GraphScope scope(graph);
    Tensor loss = loss_fn();
    if (!std::isfinite(loss.item())) {
      throw std::domain_error("check_gradient: non-finite loss");
    }
    graph.backward(loss);
  }
  GradCheckResult result;
  for (std::size_t pi = 0; pi < params.size(); ++pi) {
    auto values = params[pi].data();
    const std::vector<double> analytic(params[pi].grad().begin(), params[pi].grad().end());
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double orig = values[i];
      values[i] = orig + h;
      const double up = finite_loss(loss_fn);
      values[i] = orig - h;
      const double down = finite_loss(loss_fn);
      values[i] = orig;
      const double numeric = (up - down) / (2.0 * h);
      const double a = analytic[i];
      const double err =
          std::abs(a - numeric) / std::max(floor, std::abs(a) + std::abs(numeric));
      if (err > result.max_rel_error) {
        result = {err, pi, i, a, numeric};
      }
    }
  }
  return result;
}

}  // namespace gensug::nd
