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
#include <unordered_map>
#include <vector>

#include "gensug/ndgrad/params.hpp"
#include "gensug/ndgrad/tensor.hpp"

namespace gensug::align {

enum class EmbeddingSource { kPrefix, kQuery };

struct AlignedEmbedding {
  std::vector<double> vector;  // unit L2 norm
  EmbeddingSource source = EmbeddingSource::kQuery;
};

double cosine(std::span<const double> a, std::span<const double> b);

struct EncoderConfig {
  std::size_t d_emb = 32;
  std::size_t d_hidden = 64;
  std::size_t d_out = 32;
  double tau = 0.05;
};

/// Character-token text encoder. Tokens are single characters plus adjacent
/// character pairs; token embeddings are mean-pooled, passed through a tanh
/// feed-forward layer and a linear projection, then L2-normalized.
class TextEncoder {
 public:
  TextEncoder() = default;
  /// Vocabulary from every character and character pair in `texts`.
  TextEncoder(std::span<const std::string> texts, const EncoderConfig& config,
              std::uint64_t seed);

  std::vector<int> tokenize(const std::string& text) const;
  /// [texts.size(), d_out], rows unit-norm. Records on the active graph.
  nd::Tensor forward(std::span<const std::string> texts) const;
  AlignedEmbedding encode(const std::string& text,
                          EmbeddingSource source = EmbeddingSource::kQuery) const;

  const EncoderConfig& config() const { return config_; }
  nd::ParamSet& params() { return params_; }
  const nd::ParamSet& params() const { return params_; }
  std::size_t vocab_size() const { return tokens_.size(); }

  void save(const std::string& path, const std::string& config_hash) const;
  /// Returns the embedded config hash through `config_hash` when non-null.
  static TextEncoder load(const std::string& path, std::string* config_hash = nullptr);

 private:
  void init_params(std::uint64_t seed);
  void rebuild_lookup();

  EncoderConfig config_;
  std::vector<std::string> tokens_;  // id 0 is the unknown token
  std::unordered_map<std::string, int> lookup_;
  nd::ParamSet params_;
};

}  // namespace gensug::align
