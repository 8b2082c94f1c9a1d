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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gensug/model/sft.hpp"
#include "gensug/model/transformer.hpp"
#include "gensug/model/vocab.hpp"
#include "gensug/ndgrad/gradcheck.hpp"
#include "gensug/ndgrad/ops.hpp"
#include "test_util.hpp"

using namespace gensug;
using namespace gensug::model;
using gensug::testing::random_ids;
using gensug::testing::TempDir;

namespace {

const GenConfig kTiny{.d_model = 4, .n_layers = 1, .n_heads = 2, .d_ff = 6, .max_enc_len = 16,
                      .max_dec_len = 8};
const GenConfig kSmall{.d_model = 8, .n_layers = 2, .n_heads = 2, .d_ff = 12, .max_enc_len = 32,
                       .max_dec_len = 12};

}  // namespace

TEST(Transformer, DecoderIsCausal) {
  GenModel m(kSmall, 12, 3);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto input = random_ids(rng, 7, 6, 11);
    auto dec = random_ids(rng, 6, 6, 11);
    dec[0] = special::kBos;
    const auto mem = m.encode(input);
    const auto base = m.decode(mem, dec);
    for (std::size_t t = 1; t < dec.size(); ++t) {
      auto probe = dec;
      for (std::size_t j = t; j < probe.size(); ++j) probe[j] = probe[j] == 6 ? 7 : 6;
      const auto changed = m.decode(mem, probe);
      for (std::size_t r = 0; r < t; ++r) {
        for (std::size_t c = 0; c < 12; ++c) {
          ASSERT_EQ(base.at(r, c), changed.at(r, c)) << "row " << r << " changed at " << t;
        }
      }
      bool any = false;
      for (std::size_t c = 0; c < 12; ++c) any = any || base.at(t, c) != changed.at(t, c);
      EXPECT_TRUE(any) << "row " << t << " ignores its own token";
    }
  }
}

TEST(Transformer, EncoderSeesWholeInput) {
  GenModel m(kSmall, 12, 4);
  const std::vector<int> a = {6, 7, 8, 9}, b = {6, 7, 8, 10};
  const std::vector<int> dec = {special::kBos, 6};
  const auto la = m.decode(m.encode(a), dec);
  const auto lb = m.decode(m.encode(b), dec);
  EXPECT_NE(la.at(0, 0), lb.at(0, 0));
}

TEST(Transformer, NextLogProbsMatchesLastDecodeRow) {
  GenModel m(kSmall, 12, 6);
  const std::vector<int> input = {0, 7, 8, 1, 1, 1};
  const std::vector<int> dec = {special::kBos, 9, 10};
  const auto mem = m.encode(input);
  const auto logits = m.decode(mem, dec);
  const auto expected = nd::log_softmax(nd::slice_rows(logits, 2, 1));
  const auto got = m.next_log_probs(mem, dec);
  ASSERT_EQ(got.size(), 12u);
  double mass = 0;
  for (std::size_t i = 0; i < got.size(); ++i) {
    EXPECT_NEAR(got[i], expected.at(i), 1e-12);
    mass += std::exp(got[i]);
  }
  EXPECT_NEAR(mass, 1.0, 1e-12);
}

TEST(Transformer, RejectsOverlongInput) {
  GenModel m(kTiny, 8, 1);
  std::vector<int> input(17, 6);
  EXPECT_THROW((void)m.encode(input), std::invalid_argument);
  EXPECT_THROW((void)m.encode(std::vector<int>{}), std::invalid_argument);
}

TEST(Transformer, PositionalEncodingValues) {
  const auto p0 = positional_encoding(0, 4);
  EXPECT_EQ(p0, (std::vector<double>{0, 1, 0, 1}));
  const auto p3 = positional_encoding(3, 4);
  EXPECT_DOUBLE_EQ(p3[0], std::sin(3.0));
  EXPECT_DOUBLE_EQ(p3[1], std::cos(3.0));
  EXPECT_DOUBLE_EQ(p3[2], std::sin(3.0 / 100.0));
  EXPECT_DOUBLE_EQ(p3[3], std::cos(3.0 / 100.0));
}

TEST(Transformer, SaveLoadRoundTrip) {
  TempDir dir("gen");
  GenModel m(kTiny, 9, 2);
  m.save(dir.file("g.json"), "abc");
  std::string hash;
  auto loaded = GenModel::load(dir.file("g.json"), &hash);
  EXPECT_EQ(hash, "abc");
  EXPECT_TRUE(loaded.params().bit_equal(m.params()));
  EXPECT_EQ(loaded.vocab_size(), 9u);
}

TEST(Sft, DecoderInputAndTarget) {
  const std::vector<int> t = {7, 8};
  EXPECT_EQ(decoder_input(t), (std::vector<int>{special::kBos, 7, 8}));
  EXPECT_EQ(decoder_target(t), (std::vector<int>{7, 8, special::kEos}));
}

TEST(Sft, MaskedLogProbOnUniformLogits) {
  auto logits = nd::Tensor::zeros({3, 5});
  const std::vector<int> tgt = {1, special::kPad, 2};
  EXPECT_NEAR(target_log_prob(logits, tgt).item(), 2 * std::log(0.2), 1e-14);
  EXPECT_NEAR(sft_loss_from_logits(logits, tgt).item(), std::log(5.0), 1e-14);
  const std::vector<int> all_pad = {special::kPad, special::kPad, special::kPad};
  EXPECT_THROW((void)sft_loss_from_logits(logits, all_pad), std::invalid_argument);
  const std::vector<int> short_tgt = {1};
  EXPECT_THROW((void)target_log_prob(logits, short_tgt), nd::ShapeError);
}

TEST(Sft, LossIsTokenMeanOfSequenceLogProbs) {
  GenModel m(kSmall, 12, 9);
  const std::vector<SeqExample> batch = {{{0, 6, 1}, {7, 8}}, {{0, 9, 10, 1}, {11}}};
  double sum = 0;
  std::size_t tokens = 0;
  for (const auto& ex : batch) {
    sum += score_sequence(m, ex.input, decoder_target(ex.target));
    tokens += ex.target.size() + 1;
  }
  EXPECT_NEAR(sft_loss(m, batch).item(), -sum / static_cast<double>(tokens), 1e-12);
}

TEST(Sft, GradientMatchesCentralDifferences) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GenModel m(kTiny, 8, seed);
    std::mt19937_64 rng(seed + 50);
    std::vector<SeqExample> batch = {{random_ids(rng, 4, 0, 7), random_ids(rng, 2, 6, 7)},
                                     {random_ids(rng, 3, 0, 7), random_ids(rng, 3, 5, 7)}};
    auto r = nd::check_gradient([&] { return sft_loss(m, batch); }, m.params().tensors());
    EXPECT_LE(r.max_rel_error, 1e-4) << "seed " << seed << " param " << r.worst_param << "[" << r.worst_index
                                      << "] analytic " << r.analytic << " numeric " << r.numeric;
  }
}

TEST(Sft, TrainingReducesLossAndIsDeterministic) {
  std::vector<SeqExample> data;
  for (int i = 0; i < 8; ++i) data.push_back({{0, 6 + i % 4, 1}, {6 + (i % 4), 7}});
  GenModel a(kSmall, 12, 1), b(kSmall, 12, 1);
  const SftTrainConfig cfg{.epochs = 15, .batch = 4, .lr = 1e-2, .seed = 3};
  std::size_t hooks = 0;
  const auto report = train_sft(a, data, cfg, [&](std::size_t, const GenModel&) { ++hooks; });
  train_sft(b, data, cfg);
  EXPECT_EQ(hooks, 15u);
  EXPECT_LT(report.loss_curve.back(), 0.5 * report.loss_curve.front());
  EXPECT_TRUE(a.params().bit_equal(b.params()));
}
