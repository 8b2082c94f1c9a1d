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

#include "gensug/model/sft.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

#include "gensug/model/vocab.hpp"
#include "gensug/ndgrad/adam.hpp"
#include "gensug/ndgrad/graph.hpp"
#include "gensug/ndgrad/ops.hpp"

namespace gensug::model {

std::vector<int> decoder_input(std::span<const int> target) {
  std::vector<int> out{special::kBos};
  out.insert(out.end(), target.begin(), target.end());
  return out;
}

std::vector<int> decoder_target(std::span<const int> target) {
  std::vector<int> out(target.begin(), target.end());
  out.push_back(special::kEos);
  return out;
}

namespace {

std::pair<nd::Tensor, std::size_t> masked_sum(const nd::Tensor& logits,
                                              std::span<const int> targets) {
  if (logits.rows() != targets.size()) {
    throw nd::ShapeError("target_log_prob", {logits.shape(), nd::Shape{targets.size()}},
                         "one target per logits row");
  }
  std::vector<double> mask(targets.size());
  std::size_t kept = 0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    mask[i] = targets[i] == special::kPad ? 0.0 : 1.0;
    kept += targets[i] != special::kPad;
  }
  const auto picked = nd::pick(nd::log_softmax(logits), targets);
  return {nd::sum(nd::mul(picked, nd::Tensor::from({targets.size()}, std::move(mask)))), kept};
}

}  // namespace

nd::Tensor target_log_prob(const nd::Tensor& logits, std::span<const int> targets) {
  return masked_sum(logits, targets).first;
}

nd::Tensor sft_loss_from_logits(const nd::Tensor& logits, std::span<const int> targets) {
  auto [sum, kept] = masked_sum(logits, targets);
  if (kept == 0) throw std::invalid_argument("sft_loss: every target is [PAD]");
  return nd::scale(sum, -1.0 / static_cast<double>(kept));
}

nd::Tensor sft_loss(const GenModel& model, std::span<const SeqExample> batch) {
  if (batch.empty()) throw std::invalid_argument("sft_loss: empty batch");
  nd::Tensor total;
  std::size_t tokens = 0;
  for (const auto& ex : batch) {
    if (ex.target.empty()) throw std::invalid_argument("sft_loss: empty target");
    const auto mem = model.encode(ex.input);
    const auto tgt = decoder_target(ex.target);
    auto [sum, kept] = masked_sum(model.decode(mem, decoder_input(ex.target)), tgt);
    total = total.defined() ? nd::add(total, sum) : sum;
    tokens += kept;
  }
  return nd::scale(total, -1.0 / static_cast<double>(tokens));
}

nd::Tensor sequence_log_prob(const GenModel& model, const Memory& memory,
                             std::span<const int> seq) {
  if (seq.empty()) throw std::invalid_argument("sequence_log_prob: empty sequence");
  std::vector<int> dec_in{special::kBos};
  dec_in.insert(dec_in.end(), seq.begin(), seq.end() - 1);
  return target_log_prob(model.decode(memory, dec_in), seq);
}

double score_sequence(const GenModel& model, std::span<const int> input_ids,
                      std::span<const int> seq) {
  nd::NoGradGuard no_grad;
  return sequence_log_prob(model, model.encode(input_ids), seq).item();
}

SftReport train_sft(GenModel& model, std::span<const SeqExample> data,
                    const SftTrainConfig& config, const EpochHook& on_epoch) {
  if (data.empty()) throw std::invalid_argument("train_sft: empty dataset");
  if (config.batch == 0) throw std::invalid_argument("train_sft: batch must be >= 1");
  std::mt19937_64 rng(config.seed);
  nd::Adam adam(model.params().tensors(), {.lr = config.lr});
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  SftReport report;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double total = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch) {
      std::vector<SeqExample> batch;
      for (std::size_t i = start; i < std::min(order.size(), start + config.batch); ++i) {
        batch.push_back(data[order[i]]);
      }
      model.params().zero_grad();
      nd::Graph graph;
      nd::GraphScope scope(graph);
      const auto loss = sft_loss(model, batch);
      graph.backward(loss);
      adam.step();
      total += loss.item();
      ++batches;
    }
    report.loss_curve.push_back(total / static_cast<double>(batches));
    if (on_epoch) on_epoch(epoch, model);
  }
  return report;
}

}  // namespace gensug::model
