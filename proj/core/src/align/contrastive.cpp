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

#include "gensug/align/contrastive.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>

#include "gensug/ndgrad/adam.hpp"
#include "gensug/ndgrad/graph.hpp"
#include "gensug/ndgrad/ops.hpp"

namespace gensug::align {

nd::Tensor batch_contrastive_loss(const nd::Tensor& trigger, const nd::Tensor& target,
                                  double tau) {
  if (trigger.rank() != 2 || trigger.shape() != target.shape()) {
    throw nd::ShapeError("batch_contrastive_loss", {trigger.shape(), target.shape()});
  }
  if (!(tau > 0.0)) throw std::invalid_argument("batch_contrastive_loss: tau must be > 0");
  const std::size_t b = trigger.rows();
  std::vector<int> diag(b);
  std::iota(diag.begin(), diag.end(), 0);
  const nd::Tensor logits = nd::scale(nd::matmul_nt(trigger, target), 1.0 / tau);
  const nd::Tensor forward = nd::mean(nd::pick(nd::log_softmax(logits), diag));
  const nd::Tensor backward = nd::mean(nd::pick(nd::log_softmax(nd::transpose(logits)), diag));
  return nd::scale(nd::add(forward, backward), -0.5);
}

std::vector<TextPair> MinedPairs::all() const {
  std::vector<TextPair> out = prefix2query;
  out.insert(out.end(), query2query.begin(), query2query.end());
  return out;
}

nd::Tensor pair_batch_loss(const TextEncoder& encoder, std::span<const TextPair> batch,
                           double tau) {
  if (batch.empty()) throw std::invalid_argument("pair_batch_loss: empty batch");
  std::vector<std::string> triggers, targets;
  for (const auto& p : batch) {
    triggers.push_back(p.trigger);
    targets.push_back(p.target);
  }
  return batch_contrastive_loss(encoder.forward(triggers), encoder.forward(targets), tau);
}

MinedPairs mine_pairs(std::span<const corpus::InteractionRecord> records,
                      const TextEncoder& encoder, const MiningConfig& config) {
  std::map<TextPair, std::size_t> p2q;
  std::map<TextPair, std::size_t> q2q;
  std::map<std::string, std::vector<const corpus::InteractionRecord*>> by_user;
  for (const auto& r : records) {
    if (!corpus::is_positive(r.level)) continue;
    ++p2q[{r.prefix, r.query}];
    by_user[r.user_id].push_back(&r);
  }
  for (auto& [user, events] : by_user) {
    std::stable_sort(events.begin(), events.end(),
                     [](const auto* a, const auto* b) { return a->ts < b->ts; });
    std::size_t start = 0;
    for (std::size_t i = 0; i < events.size(); ++i) {
      if (i > 0 && events[i]->ts - events[i - 1]->ts > config.session_gap_seconds) start = i;
      for (std::size_t j = start; j < i; ++j) {
        const auto& a = events[j]->query;
        const auto& b = events[i]->query;
        if (a == b) continue;
        ++q2q[a < b ? TextPair{a, b} : TextPair{b, a}];
      }
    }
  }
  MinedPairs out;
  auto keep = [&](const TextPair& p) {
    const auto ea = encoder.encode(p.trigger);
    const auto eb = encoder.encode(p.target);
    return cosine(ea.vector, eb.vector) >= config.min_sim;
  };
  for (const auto& [p, n] : p2q) {
    if (n >= config.min_cooccur && keep(p)) out.prefix2query.push_back(p);
  }
  for (const auto& [p, n] : q2q) {
    if (n >= config.min_cooccur && keep(p)) out.query2query.push_back(p);
  }
  return out;
}

std::vector<double> augment_prefix_unnormalized(std::span<const double> prefix,
                                                std::span<const AlignedEmbedding> query_embs,
                                                double w) {
  std::vector<double> out(prefix.begin(), prefix.end());
  if (query_embs.empty()) return out;
  std::vector<double> mean(prefix.size(), 0.0);
  for (const auto& q : query_embs) {
    if (q.vector.size() != prefix.size()) {
      throw std::invalid_argument("augment_prefix: embedding dimension mismatch");
    }
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += q.vector[i];
  }
  const double inv = 1.0 / static_cast<double>(query_embs.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (1.0 - w) * prefix[i] + w * mean[i] * inv;
  return out;
}

AlignedEmbedding augment_prefix(const AlignedEmbedding& prefix,
                                std::span<const AlignedEmbedding> query_embs, double w) {
  if (query_embs.empty()) return prefix;
  auto v = augment_prefix_unnormalized(prefix.vector, query_embs, w);
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  if (norm == 0.0) return prefix;
  for (double& x : v) x /= norm;
  return {std::move(v), EmbeddingSource::kPrefix};
}

std::vector<double> train_alignment(TextEncoder& encoder, std::span<const TextPair> pairs,
                                    const AlignTrainConfig& config) {
  if (pairs.size() < config.batch) {
    throw std::invalid_argument("train_alignment: need at least `batch` pairs");
  }
  std::mt19937_64 rng(config.seed);
  nd::Adam adam(encoder.params().tensors(), {.lr = config.lr});
  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> curve;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double total = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start + 2 <= order.size(); start += config.batch) {
      const std::size_t end = std::min(order.size(), start + config.batch);
      std::vector<TextPair> batch;
      for (std::size_t i = start; i < end; ++i) batch.push_back(pairs[order[i]]);
      encoder.params().zero_grad();
      nd::Graph graph;
      nd::GraphScope scope(graph);
      const nd::Tensor loss = pair_batch_loss(encoder, batch, encoder.config().tau);
      graph.backward(loss);
      adam.step();
      total += loss.item();
      ++batches;
    }
    curve.push_back(batches ? total / static_cast<double>(batches) : 0.0);
  }
  return curve;
}

}  // namespace gensug::align
