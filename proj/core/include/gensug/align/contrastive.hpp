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

#include "gensug/align/encoder.hpp"
#include "gensug/corpus/feedback.hpp"
#include "gensug/ndgrad/tensor.hpp"

namespace gensug::align {

/// Symmetrized in-batch softmax cross-entropy over cosine / tau logits. Row i
/// of `trigger` is paired with row i of `target`; every other row is a
/// negative. Both inputs are [B, d] with unit-norm rows.
nd::Tensor batch_contrastive_loss(const nd::Tensor& trigger, const nd::Tensor& target,
                                  double tau);

struct TextPair {
  std::string trigger;
  std::string target;
  bool operator==(const TextPair&) const = default;
  auto operator<=>(const TextPair&) const = default;
};

/// Encodes both sides and evaluates batch_contrastive_loss. Throws on an
/// empty batch.
nd::Tensor pair_batch_loss(const TextEncoder& encoder, std::span<const TextPair> batch,
                           double tau);

struct MiningConfig {
  std::size_t min_cooccur = 2;
  double min_sim = 0.3;
  std::int64_t session_gap_seconds = 1800;
};

struct MinedPairs {
  std::vector<TextPair> prefix2query;
  std::vector<TextPair> query2query;
  std::vector<TextPair> all() const;
};

/// Prefix-query pairs co-occurring at positive levels at least min_cooccur
/// times, plus query-query pairs co-clicked by one user within a session at
/// least min_cooccur times. Pairs whose encoder cosine is below min_sim are
/// dropped. Output is sorted.
MinedPairs mine_pairs(std::span<const corpus::InteractionRecord> records,
                      const TextEncoder& encoder, const MiningConfig& config);

/// e* = (1 - w) e_p + w * mean(query_embs), renormalized. With no query
/// embeddings e_p is returned unchanged.
AlignedEmbedding augment_prefix(const AlignedEmbedding& prefix,
                                std::span<const AlignedEmbedding> query_embs, double w);
/// The mixing step alone, before normalization.
std::vector<double> augment_prefix_unnormalized(std::span<const double> prefix,
                                                std::span<const AlignedEmbedding> query_embs,
                                                double w);

struct AlignTrainConfig {
  std::size_t epochs = 10;
  std::size_t batch = 32;
  double lr = 3e-3;
  std::uint64_t seed = 0;
};

/// Adam over batch_contrastive_loss; returns per-epoch mean loss. Batches are
/// drawn from a seeded per-epoch shuffle; a trailing batch smaller than two
/// pairs is skipped.
std::vector<double> train_alignment(TextEncoder& encoder, std::span<const TextPair> pairs,
                                    const AlignTrainConfig& config);

}  // namespace gensug::align
