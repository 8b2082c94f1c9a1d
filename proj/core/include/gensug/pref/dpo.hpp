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
#include <vector>

#include "gensug/model/transformer.hpp"
#include "gensug/pref/reward.hpp"

namespace gensug::pref {

/// A preference group in token form. Sequences are full decoder outputs
/// ending in [EOS].
struct DpoGroup {
  std::vector<int> input;
  std::vector<int> win;
  std::vector<std::vector<int>> loses;
  std::vector<double> rw;  // parallel to loses, each in (0, rw_max]
};

/// Reference-model log-probabilities of a group's sequences.
struct ReferenceScores {
  double win = 0.0;
  std::vector<double> loses;
};

ReferenceScores reference_scores(const model::GenModel& reference, const DpoGroup& group);

/// beta_dpo * (log pi_policy(seq) - log pi_reference(seq)).
double implicit_reward(const model::GenModel& policy, const model::GenModel& reference,
                       std::span<const int> input_ids, std::span<const int> seq,
                       double beta_dpo);

/// -log sigmoid(rw * max(0, r_w - r_l - delta)) + alpha * NLL(q_w), NLL
/// being the per-token mean. The group must hold exactly one lose.
nd::Tensor pairwise_loss(const model::GenModel& policy, const DpoGroup& group,
                         const ReferenceScores& ref, const RewardParams& params);
nd::Tensor pairwise_loss(const model::GenModel& policy, const model::GenModel& reference,
                         const DpoGroup& group, const RewardParams& params);

/// -log sigmoid(-log sum_l exp(rw_l * max(0, r_l - r_w - delta))) + alpha * NLL(q_w).
nd::Tensor listwise_loss(const model::GenModel& policy, const DpoGroup& group,
                         const ReferenceScores& ref, const RewardParams& params);
nd::Tensor listwise_loss(const model::GenModel& policy, const model::GenModel& reference,
                         const DpoGroup& group, const RewardParams& params);

enum class DpoMode { kPair, kList };

struct DpoTrainConfig {
  DpoMode mode = DpoMode::kList;
  std::size_t epochs = 3;
  std::size_t batch = 16;
  double lr = 5e-4;
  std::uint64_t seed = 0;
};

struct DpoReport {
  std::vector<double> loss_curve;          // mean batch loss per epoch
  std::vector<double> win_reward_curve;    // mean implicit win reward, before training then per epoch
};

/// Adam on the selected loss, averaged over each batch. `reference` is only
/// read. Pair mode requires single-lose groups.
DpoReport train_dpo(model::GenModel& policy, const model::GenModel& reference,
                    std::span<const DpoGroup> groups, const RewardParams& params,
                    const DpoTrainConfig& config);

}  // namespace gensug::pref
