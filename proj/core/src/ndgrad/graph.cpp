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

#include "gensug/ndgrad/graph.hpp"

#include <stdexcept>

namespace gensug::nd {

namespace {
thread_local Graph* g_active = nullptr;
}  // namespace

std::string_view op_name(OpKind kind) {
  switch (kind) {
    case OpKind::kMatMul: return "matmul";
    case OpKind::kMatMulNT: return "matmul_nt";
    case OpKind::kTranspose: return "transpose";
    case OpKind::kAdd: return "add";
    case OpKind::kAddBias: return "add_bias";
    case OpKind::kSub: return "sub";
    case OpKind::kScale: return "scale";
    case OpKind::kAddScalar: return "add_scalar";
    case OpKind::kMul: return "mul";
    case OpKind::kRelu: return "relu";
    case OpKind::kTanh: return "tanh";
    case OpKind::kExp: return "exp";
    case OpKind::kLog: return "log";
    case OpKind::kSoftmax: return "softmax";
    case OpKind::kLogSoftmax: return "log_softmax";
    case OpKind::kSigmoid: return "sigmoid";
    case OpKind::kLogSigmoid: return "log_sigmoid";
    case OpKind::kLayerNorm: return "layer_norm";
    case OpKind::kMean: return "mean";
    case OpKind::kSum: return "sum";
    case OpKind::kRowSum: return "row_sum";
    case OpKind::kConcatRows: return "concat_rows";
    case OpKind::kConcatCols: return "concat_cols";
    case OpKind::kSliceRows: return "slice_rows";
    case OpKind::kSliceCols: return "slice_cols";
    case OpKind::kEmbedding: return "embedding";
    case OpKind::kPick: return "pick";
    case OpKind::kHinge: return "hinge";
    case OpKind::kSquare: return "square";
    case OpKind::kL2Normalize: return "l2_normalize";
    case OpKind::kLogSumExp: return "logsumexp";
    case OpKind::kReshape: return "reshape";
  }
  return "unknown";
}

void Graph::record(NodeRecord node) { nodes_.push_back(std::move(node)); }

void Graph::backward(const Tensor& root) {
  if (!root.defined() || root.numel() != 1) {
    throw std::invalid_argument("backward: root must be a scalar tensor, got " +
                                (root.defined() ? shape_string(root.shape())
                                                : std::string("undefined")));
  }
  const auto& root_impl = root.impl();
  root_impl->ensure_grad();
  root_impl->grad[0] += 1.0;
  for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) {
    if (it->output->grad.empty()) continue;  // not on a path from root
    for (const auto& in : it->inputs) {
      if (in->requires_grad) in->ensure_grad();
    }
    it->backward(*it);
  }
}

GraphScope::GraphScope(Graph& graph) : previous_(g_active) { g_active = &graph; }
GraphScope::~GraphScope() { g_active = previous_; }

NoGradGuard::NoGradGuard() : previous_(g_active) { g_active = nullptr; }
NoGradGuard::~NoGradGuard() { g_active = previous_; }

Graph* active_graph() { return g_active; }

}  // namespace gensug::nd
