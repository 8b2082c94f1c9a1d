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
#include <span>
#include <string>
#include <vector>

#include "gensug/ndgrad/params.hpp"
#include "gensug/ndgrad/tensor.hpp"

namespace gensug::model {

struct GenConfig {
  std::size_t d_model = 64;
  std::size_t n_layers = 2;
  std::size_t n_heads = 2;
  std::size_t d_ff = 128;
  std::size_t max_enc_len = 160;
  std::size_t max_dec_len = 24;
};

/// Encoder output plus the per-layer cross-attention keys and values, so a
/// decode can reuse them across steps and beams.
struct Memory {
  nd::Tensor hidden;               // [n, d_model]
  std::vector<nd::Tensor> keys;    // per decoder layer, [n, d_model]
  std::vector<nd::Tensor> values;  // per decoder layer, [n, d_model]
};

/// Pre-LayerNorm encoder-decoder transformer with tied input/output token
/// embeddings and sinusoidal positions. Every method records on the active
/// graph when one is set.
class GenModel {
 public:
  GenModel() = default;
  GenModel(const GenConfig& config, std::size_t vocab_size, std::uint64_t seed);

  Memory encode(std::span<const int> input_ids) const;
  /// Logits [dec_in.size(), vocab] for teacher-forced decoder input.
  nd::Tensor decode(const Memory& memory, std::span<const int> dec_in) const;
  /// log-softmax over the vocabulary for the token after `dec_in`; no graph.
  std::vector<double> next_log_probs(const Memory& memory, std::span<const int> dec_in) const;

  const GenConfig& config() const { return config_; }
  std::size_t vocab_size() const { return vocab_size_; }
  nd::ParamSet& params() { return params_; }
  const nd::ParamSet& params() const { return params_; }

  void save(const std::string& path, const std::string& config_hash) const;
  static GenModel load(const std::string& path, std::string* config_hash = nullptr);

 private:
  nd::Tensor embed(std::span<const int> ids) const;
  nd::Tensor decode_hidden(const Memory& memory, std::span<const int> dec_in) const;

  GenConfig config_;
  std::size_t vocab_size_ = 0;
  nd::ParamSet params_;
};

/// Sinusoidal position table row `pos`, width d.
std::vector<double> positional_encoding(std::size_t pos, std::size_t d);

}  // namespace gensug::model
