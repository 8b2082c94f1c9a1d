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
#include <memory>
#include <string_view>
#include <vector>

#include "gensug/ndgrad/tensor.hpp"

namespace gensug::nd {

enum class OpKind {
  kMatMul,
  kMatMulNT,
  kTranspose,
  kAdd,
  kAddBias,
  kSub,
  kScale,
  kAddScalar,
  kMul,
  kRelu,
  kTanh,
  kExp,
  kLog,
  kSoftmax,
  kLogSoftmax,
  kSigmoid,
  kLogSigmoid,
  kLayerNorm,
  kMean,
  kSum,
  kRowSum,
  kConcatRows,
  kConcatCols,
  kSliceRows,
  kSliceCols,
  kEmbedding,
  kPick,
  kHinge,
  kSquare,
  kL2Normalize,
  kLogSumExp,
  kReshape,
};

std::string_view op_name(OpKind kind);

struct NodeRecord {
  OpKind kind;
  std::vector<std::shared_ptr<TensorImpl>> inputs;
  std::shared_ptr<TensorImpl> output;
  // Reads output->grad and accumulates into the grads of inputs that
  // require them.
  std::function<void(const NodeRecord&)> backward;
};

/// Append-only tape. Nodes are recorded in execution order, which is a valid
/// topological order; backward walks them once in reverse.
class Graph {
 public:
  Graph() = default;
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  void record(NodeRecord node);
  const std::vector<NodeRecord>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  void clear() { nodes_.clear(); }

  /// Seeds d(root)/d(root) = 1 and propagates to every requires_grad tensor
  /// reachable from root. Gradients accumulate into existing buffers.
  void backward(const Tensor& root);

 private:
  std::vector<NodeRecord> nodes_;
};

/// Makes `graph` the active tape on this thread for the guard's lifetime.
class GraphScope {
 public:
  explicit GraphScope(Graph& graph);
  ~GraphScope();
  GraphScope(const GraphScope&) = delete;
  GraphScope& operator=(const GraphScope&) = delete;

 private:
  Graph* previous_;
};

/// Suspends recording on this thread.
class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  Graph* previous_;
};

Graph* active_graph();

}  // namespace gensug::nd
