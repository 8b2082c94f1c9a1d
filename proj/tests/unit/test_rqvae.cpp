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

#include <limits>
#include <random>

#include "gensug/ndgrad/gradcheck.hpp"
#include "gensug/rqvae/rqvae.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace gensug;
using namespace gensug::rqvae;
using gensug::testing::random_vector;
using gensug::testing::TempDir;
using gensug::oracle::brute_force_id;

namespace {

std::vector<std::vector<double>> clustered_points(std::mt19937_64& rng, std::size_t n,
                                                  std::size_t d, std::size_t clusters) {
  std::vector<std::vector<double>> centers;
  for (std::size_t c = 0; c < clusters; ++c) centers.push_back(random_vector(rng, d, -2, 2));
  std::normal_distribution<double> noise(0.0, 0.1);
  std::vector<std::vector<double>> pts;
  for (std::size_t i = 0; i < n; ++i) {
    auto p = centers[i % clusters];
    for (double& x : p) x += noise(rng);
    pts.push_back(std::move(p));
  }
  return pts;
}

}  // namespace

TEST(Quantize, TiesGoToLowestIndex) {
  auto table = nd::Tensor::from({3, 2}, {1, 0, 0, 1, -1, 0});
  const std::vector<double> origin = {0, 0};
  EXPECT_EQ(quantize_level(origin, table).index, 0);
  const std::vector<double> diag = {0.5, 0.5};
  EXPECT_EQ(quantize_level(diag, table).index, 0);
  const std::vector<double> left = {-0.9, 0.1};
  auto q = quantize_level(left, table);
  EXPECT_EQ(q.index, 2);
  EXPECT_EQ(q.codeword, (std::vector<double>{-1, 0}));
}

TEST(SemanticId, MatchesBruteForceOnThousandInputs) {
  RqvaeModel model({.d_in = 6, .d_hidden = 5, .d_latent = 4, .blocks = 2, .levels = 3,
                    .codebook = 16},
                   17);
  std::mt19937_64 rng(99);
  for (int i = 0; i < 1000; ++i) {
    const auto x = random_vector(rng, 6);
    const auto id = assign_semantic_id(model, x);
    ASSERT_EQ(id, brute_force_id(model, model.encode_one(x))) << "input " << i;
    ASSERT_EQ(id.codes.size(), 3u);
  }
}

TEST(SemanticId, StringForm) {
  EXPECT_EQ((SemanticID{{3, 0, 12}}).str(), "3-0-12");
}

TEST(RqvaeLoss, HandComputedWithIdentityAutoencoder) {
  RqvaeModel model({.d_in = 2, .d_latent = 2, .levels = 2, .codebook = 2, .beta = 0.25,
                    .identity_autoencoder = true},
                   1);
  model.codebook(0).values() = {1, 0, 0, 1};
  model.codebook(1).values() = {0, 0.5, 3, 3};
  auto x = nd::Tensor::from({1, 2}, {1, 1});
  auto loss = rqvae_loss(model, x);
  EXPECT_EQ(loss.codes[0], (SemanticID{{0, 0}}));
  EXPECT_DOUBLE_EQ(loss.commit.item(), 1.25 * 1.25 / 2.0);
  EXPECT_DOUBLE_EQ(loss.recon.item(), 0.25);
  EXPECT_DOUBLE_EQ(loss.total.item(), 0.25 + 0.78125);
}

TEST(RqvaeLoss, IdentityRequiresMatchingWidths) {
  EXPECT_THROW(RqvaeModel({.d_in = 3, .d_latent = 2, .identity_autoencoder = true}, 1),
               std::invalid_argument);
}

TEST(RqvaeLoss, FixedCodesGradientMatchesCentralDifferences) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RqvaeModel model({.d_in = 4, .d_hidden = 3, .d_latent = 3, .blocks = 2, .levels = 2,
                      .codebook = 4},
                     seed);
    std::mt19937_64 rng(seed + 1000);
    auto x = nd::Tensor::from({3, 4}, random_vector(rng, 12));
    std::vector<SemanticID> codes;
    for (std::size_t r = 0; r < 3; ++r) codes.push_back(model.assign(random_vector(rng, 4)));
    const auto offset = rqvae_loss(model, x, &codes).detached;
    auto r = nd::check_gradient([&] { return rqvae_loss(model, x, &codes, &offset).total; },
                                model.params().tensors());
    EXPECT_LE(r.max_rel_error, 1e-4) << "seed " << seed << " param " << r.worst_param << "[" << r.worst_index
                                      << "] analytic " << r.analytic << " numeric " << r.numeric;
  }
}

TEST(RqvaeTrain, ReducesReconstructionAndUsesCodebook) {
  std::mt19937_64 rng(5);
  const auto pts = clustered_points(rng, 300, 8, 12);
  RqvaeModel model({.d_in = 8, .d_hidden = 8, .d_latent = 4, .blocks = 2, .levels = 3,
                    .codebook = 8},
                   5);
  const auto report = train_rqvae(model, pts, {.epochs = 20, .batch = 32, .lr = 3e-3, .seed = 5});
  EXPECT_LE(report.final_recon, 0.5 * report.initial_recon);
  EXPECT_GT(report.mean_utilization(), 0.5);
  EXPECT_EQ(report.recon_curve.size(), 20u);
  EXPECT_DOUBLE_EQ(report.final_recon, reconstruction_loss(model, pts));
}

TEST(RqvaeTrain, DeterministicForSeed) {
  std::mt19937_64 rng(6);
  const auto pts = clustered_points(rng, 80, 4, 5);
  const RqvaeConfig cfg{.d_in = 4, .d_hidden = 4, .d_latent = 3, .blocks = 2, .levels = 2,
                        .codebook = 4};
  RqvaeModel a(cfg, 2), b(cfg, 2);
  const RqvaeTrainConfig tc{.epochs = 3, .batch = 16, .seed = 8};
  train_rqvae(a, pts, tc);
  train_rqvae(b, pts, tc);
  EXPECT_TRUE(a.params().bit_equal(b.params()));
}

TEST(RqvaeTrain, TooFewPointsForCodebookThrows) {
  RqvaeModel model({.d_in = 2, .d_hidden = 2, .d_latent = 2, .levels = 1, .codebook = 8}, 1);
  std::vector<std::vector<double>> pts(4, std::vector<double>{0.1, 0.2});
  EXPECT_THROW(train_rqvae(model, pts, {}), std::invalid_argument);
}

TEST(RqvaeModel, SaveLoadRoundTrip) {
  TempDir dir("rqvae");
  RqvaeModel model({.d_in = 5, .d_hidden = 4, .d_latent = 3, .levels = 2, .codebook = 6}, 4);
  model.save(dir.file("m.json"), "h1");
  std::string hash;
  auto loaded = RqvaeModel::load(dir.file("m.json"), &hash);
  EXPECT_EQ(hash, "h1");
  EXPECT_TRUE(loaded.params().bit_equal(model.params()));
  std::mt19937_64 rng(1);
  for (int i = 0; i < 20; ++i) {
    const auto x = random_vector(rng, 5);
    EXPECT_EQ(loaded.assign(x), model.assign(x));
  }
}
