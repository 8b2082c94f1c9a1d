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

#include <cstddef>
#include <span>
#include <vector>

#include "gensug/ndgrad/graph.hpp"
#include "gensug/ndgrad/tensor.hpp"

// Differentiable primitives. Every op records a node on the active Graph when
// a graph is active and at least one input requires grad. Row-wise ops
// (softmax, log_softmax, layer_norm, l2_normalize) act on the last dimension.
namespace gensug::nd {

// [n,k] x [k,m] -> [n,m]
Tensor matmul(const Tensor& a, const Tensor& b);
// [n,k] x [m,k]^T -> [n,m]
Tensor matmul_nt(const Tensor& a, const Tensor& b);
Tensor transpose(const Tensor& a);

Tensor add(const Tensor& a, const Tensor& b);
// a: [n,m], bias: [m] broadcast over rows.
Tensor add_bias(const Tensor& a, const Tensor& bias);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double s);
Tensor add_scalar(const Tensor& a, double s);
Tensor neg(const Tensor& a);

Tensor relu(const Tensor& a);
Tensor tanh(const Tensor& a);
Tensor exp(const Tensor& a);
Tensor log(const Tensor& a);
Tensor sigmoid(const Tensor& a);
Tensor log_sigmoid(const Tensor& a);
Tensor square(const Tensor& a);
// max(0, x) with subgradient 0 at exactly 0.
Tensor hinge(const Tensor& a);

Tensor softmax(const Tensor& a);
Tensor log_softmax(const Tensor& a);
Tensor layer_norm(const Tensor& x, const Tensor& gamma, const Tensor& beta,
                  double eps = 1e-5);
Tensor l2_normalize(const Tensor& a);

// Reductions to a [1] scalar.
Tensor mean(const Tensor& a);
Tensor sum(const Tensor& a);
Tensor logsumexp(const Tensor& a);
// [n,m] -> [n]
Tensor row_sum(const Tensor& a);

Tensor concat_rows(std::span<const Tensor> parts);
Tensor concat_cols(std::span<const Tensor> parts);
Tensor slice_rows(const Tensor& a, std::size_t start, std::size_t count);
Tensor slice_cols(const Tensor& a, std::size_t start, std::size_t count);
Tensor reshape(const Tensor& a, Shape shape);

// table: [V,d], ids -> [ids.size(), d]
Tensor embedding(const Tensor& table, std::span<const int> ids);
// a: [n,m] -> [n], out[i] = a[i, index[i]]
Tensor pick(const Tensor& a, std::span<const int> index);

// Shares storage with `a` but is never recorded: the stop-gradient sg[a].
Tensor detach(const Tensor& a);

}  // namespace gensug::nd
