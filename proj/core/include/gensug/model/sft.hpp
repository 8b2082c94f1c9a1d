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
#include <functional>
#include <span>
#include <vector>

#include "gensug/model/transformer.hpp"

namespace gensug::model {

/// Tokenized training pair; `target` holds the query tokens without [BOS]
/// or [EOS].
struct SeqExample {
  std::vector<int> input;
  std::vector<int> target;
};

/// [BOS] + target
std::vector<int> decoder_input(std::span<const int> target);
/// target + [EOS]
std::vector<int> decoder_target(std::span<const int> target);

/// Sum of log-softmax(logits)[t, targets[t]] over positions whose target is
/// not [PAD]. Returns a [1] tensor.
nd::Tensor target_log_prob(const nd::Tensor& logits, std::span<const int> targets);
/// Mean token cross-entropy over non-[PAD] targets.
nd::Tensor sft_loss_from_logits(const nd::Tensor& logits, std::span<const int> targets);

/// Token-level mean cross-entropy over the whole batch.
nd::Tensor sft_loss(const GenModel& model, std::span<const SeqExample> batch);

/// Differentiable log pi(seq | input); `seq` is the full decoded sequence
/// (normally ending in [EOS]), scored teacher-forced after [BOS].
nd::Tensor sequence_log_prob(const GenModel& model, const Memory& memory, std::span<const int> seq);
double score_sequence(const GenModel& model, std::span<const int> input_ids,
                      std::span<const int> seq);

struct SftTrainConfig {
  std::size_t epochs = 5;
  std::size_t batch = 16;
  double lr = 1e-3;
  std::uint64_t seed = 0;
};

struct SftReport {
  std::vector<double> loss_curve;  // mean batch loss per epoch
};

using EpochHook = std::function<void(std::size_t epoch, const GenModel& model)>;

/// Adam on sft_loss over seeded shuffles of `data`. `on_epoch` runs after
/// every epoch, e.g. to write a checkpoint.
SftReport train_sft(GenModel& model, std::span<const SeqExample> data,
                    const SftTrainConfig& config, const EpochHook& on_epoch = {});

}  // namespace gensug::model
