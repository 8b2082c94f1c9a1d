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

#include "gensug/pref/dpo.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

#include "gensug/model/sft.hpp"
#include "gensug/ndgrad/adam.hpp"
#include "gensug/ndgrad/graph.hpp"
#include "gensug/ndgrad/ops.hpp"

namespace gensug::pref {

namespace {

void check_group(const DpoGroup& g) {
  if (g.win.empty()) throw std::invalid_argument("dpo: empty win sequence");
  if (g.loses.empty()) throw std::invalid_argument("dpo: group without loses");
  if (g.rw.size() != g.loses.size()) throw std::invalid_argument("dpo: rw not parallel to loses");
}

// beta * (log pi(seq) - ref)
nd::Tensor implicit(const nd::Tensor& logp, double ref, double beta) {
  return nd::scale(nd::add_scalar(logp, -ref), beta);
}

nd::Tensor nll_term(const nd::Tensor& win_logp, std::size_t len, double alpha) {
  return nd::scale(win_logp, -alpha / static_cast<double>(len));
}

}  // namespace

ReferenceScores reference_scores(const model::GenModel& reference, const DpoGroup& group) {
  nd::NoGradGuard no_grad;
  const auto mem = reference.encode(group.input);
  ReferenceScores out;
  out.win = model::sequence_log_prob(reference, mem, group.win).item();
  for (const auto& l : group.loses) out.loses.push_back(model::sequence_log_prob(reference, mem, l).item());
  return out;
}

double implicit_reward(const model::GenModel& policy, const model::GenModel& reference,
                       std::span<const int> input_ids, std::span<const int> seq,
                       double beta_dpo) {
  return beta_dpo * (model::score_sequence(policy, input_ids, seq) -
                     model::score_sequence(reference, input_ids, seq));
}

nd::Tensor pairwise_loss(const model::GenModel& policy, const DpoGroup& group,
                         const ReferenceScores& ref, const RewardParams& params) {
  check_group(group);
  if (group.loses.size() != 1) throw std::invalid_argument("pairwise_loss: need exactly one lose");
  const auto mem = policy.encode(group.input);
  const auto win_logp = model::sequence_log_prob(policy, mem, group.win);
  const auto lose_logp = model::sequence_log_prob(policy, mem, group.loses[0]);
  const auto margin = nd::sub(implicit(win_logp, ref.win, params.beta_dpo),
                              implicit(lose_logp, ref.loses[0], params.beta_dpo));
  const auto arg = params.corrected_pair_hinge
                       ? nd::neg(nd::hinge(nd::add_scalar(nd::neg(margin), params.delta)))
                       : nd::hinge(nd::add_scalar(margin, -params.delta));
  const auto pref = nd::neg(nd::log_sigmoid(nd::scale(arg, group.rw[0])));
  return nd::add(pref, nll_term(win_logp, group.win.size(), params.alpha));
}

nd::Tensor listwise_loss(const model::GenModel& policy, const DpoGroup& group,
                         const ReferenceScores& ref, const RewardParams& params) {
  check_group(group);
  const auto mem = policy.encode(group.input);
  const auto win_logp = model::sequence_log_prob(policy, mem, group.win);
  const auto r_win = implicit(win_logp, ref.win, params.beta_dpo);
  std::vector<nd::Tensor> terms;
  for (std::size_t i = 0; i < group.loses.size(); ++i) {
    const auto r_lose =
        implicit(model::sequence_log_prob(policy, mem, group.loses[i]), ref.loses[i], params.beta_dpo);
    terms.push_back(
        nd::scale(nd::hinge(nd::add_scalar(nd::sub(r_lose, r_win), -params.delta)), group.rw[i]));
  }
  const auto inner = nd::logsumexp(terms.size() == 1 ? terms[0] : nd::concat_rows(terms));
  const auto pref = nd::neg(nd::log_sigmoid(nd::neg(inner)));
  return nd::add(pref, nll_term(win_logp, group.win.size(), params.alpha));
}

nd::Tensor pairwise_loss(const model::GenModel& policy, const model::GenModel& reference,
                         const DpoGroup& group, const RewardParams& params) {
  return pairwise_loss(policy, group, reference_scores(reference, group), params);
}

nd::Tensor listwise_loss(const model::GenModel& policy, const model::GenModel& reference,
                         const DpoGroup& group, const RewardParams& params) {
  return listwise_loss(policy, group, reference_scores(reference, group), params);
}

namespace {

double mean_win_reward(const model::GenModel& policy, std::span<const DpoGroup> groups,
                       const std::vector<ReferenceScores>& refs, double beta) {
  nd::NoGradGuard no_grad;
  double total = 0.0;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const auto mem = policy.encode(groups[i].input);
    total += beta * (model::sequence_log_prob(policy, mem, groups[i].win).item() - refs[i].win);
  }
  return total / static_cast<double>(groups.size());
}

}  // namespace

DpoReport train_dpo(model::GenModel& policy, const model::GenModel& reference,
                    std::span<const DpoGroup> groups, const RewardParams& params,
                    const DpoTrainConfig& config) {
  if (groups.empty()) throw std::invalid_argument("train_dpo: no preference groups");
  if (config.batch == 0) throw std::invalid_argument("train_dpo: batch must be >= 1");
  params.validate();
  std::vector<ReferenceScores> refs;
  refs.reserve(groups.size());
  for (const auto& g : groups) {
    check_group(g);
    if (config.mode == DpoMode::kPair && g.loses.size() != 1) {
      throw std::invalid_argument("train_dpo: pair mode needs single-lose groups");
    }
    refs.push_back(reference_scores(reference, g));
  }

  std::mt19937_64 rng(config.seed);
  nd::Adam adam(policy.params().tensors(), {.lr = config.lr});
  std::vector<std::size_t> order(groups.size());
  std::iota(order.begin(), order.end(), 0);
  DpoReport report;
  report.win_reward_curve.push_back(mean_win_reward(policy, groups, refs, params.beta_dpo));
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double total = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch) {
      const std::size_t end = std::min(order.size(), start + config.batch);
      policy.params().zero_grad();
      nd::Graph graph;
      nd::GraphScope scope(graph);
      nd::Tensor sum;
      for (std::size_t i = start; i < end; ++i) {
        const auto& g = groups[order[i]];
        const auto& r = refs[order[i]];
        auto l = config.mode == DpoMode::kPair ? pairwise_loss(policy, g, r, params)
                                               : listwise_loss(policy, g, r, params);
        sum = sum.defined() ? nd::add(sum, l) : l;
      }
      const auto loss = nd::scale(sum, 1.0 / static_cast<double>(end - start));
      graph.backward(loss);
      adam.step();
      total += loss.item();
      ++batches;
    }
    report.loss_curve.push_back(total / static_cast<double>(batches));
    report.win_reward_curve.push_back(mean_win_reward(policy, groups, refs, params.beta_dpo));
  }
  return report;
}

}  // namespace gensug::pref
