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
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "gensug/ndgrad/tensor.hpp"

namespace gensug::nd {

/// Named, ordered parameter collection. Order is insertion order and is the
/// order used by optimizers, serialization, and gradient checks.
class ParamSet {
 public:
  Tensor& add(std::string name, Tensor tensor);
  const Tensor& get(const std::string& name) const;
  Tensor& get(const std::string& name);
  bool contains(const std::string& name) const;

  const std::vector<std::pair<std::string, Tensor>>& entries() const {
    return entries_;
  }
  std::vector<Tensor> tensors() const;
  std::size_t size() const { return entries_.size(); }
  std::size_t numel() const;

  /// Allocates zeroed grad buffers for every parameter.
  void zero_grad();
  /// Deep copy with independent storage.
  ParamSet clone() const;
  /// Copies values from `other`, which must have identical names and shapes.
  void assign(const ParamSet& other);
  bool bit_equal(const ParamSet& other) const;

 private:
  std::vector<std::pair<std::string, Tensor>> entries_;
};

/// Uniform(-bound, bound) with bound = sqrt(6 / (fan_in + fan_out)).
Tensor xavier(std::size_t fan_in, std::size_t fan_out, std::mt19937_64& rng);
Tensor normal(Shape shape, double stddev, std::mt19937_64& rng);

}  // namespace gensug::nd
