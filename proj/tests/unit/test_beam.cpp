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

#include <algorithm>
#include <cmath>
#include <random>

#include "gensug/model/beam.hpp"
#include "gensug/model/context.hpp"
#include "gensug/model/vocab.hpp"
#include "gensug/util/hash.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace gensug;
using namespace gensug::model;
using namespace gensug::oracle;

TEST(Beam, EqualsExhaustiveEnumerationWhenBeamCoversAllPaths) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    BeamOptions opt{.beam_size = 64, .max_len = 3, .eos = kBeamEnd};
    const auto got = beam_search([&](std::span<const int> p) { return table_log_probs(p, seed); },
                                 opt);
    const auto want = exhaustive(3, seed);
    ASSERT_EQ(want.size(), 40u);
    ASSERT_EQ(got.size(), want.size()) << "seed " << seed;
    for (std::size_t i = 0; i < want.size(); ++i) {
      EXPECT_EQ(got[i].tokens, want[i].tokens) << "seed " << seed << " rank " << i;
      EXPECT_NEAR(got[i].score, want[i].score, 1e-12);
      EXPECT_EQ(got[i].finished, want[i].finished);
    }
  }
}

TEST(Beam, BannedTokensNeverAppear) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    BeamOptions opt{.beam_size = 64, .max_len = 3, .eos = kBeamEnd, .banned = {1}};
    const auto got = beam_search([&](std::span<const int> p) { return table_log_probs(p, seed); },
                                 opt);
    const auto want = exhaustive(3, seed, {1});
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < want.size(); ++i) EXPECT_EQ(got[i].tokens, want[i].tokens);
  }
}

TEST(Beam, NarrowBeamNeverBeatsExhaustiveAndIsSorted) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    for (std::size_t beam : {1u, 2u, 3u, 5u}) {
      BeamOptions opt{.beam_size = beam, .max_len = 4, .eos = kBeamEnd};
      const auto got = beam_search(
          [&](std::span<const int> p) { return table_log_probs(p, seed); }, opt);
      const auto want = exhaustive(4, seed);
      ASSERT_FALSE(got.empty());
      EXPECT_LE(got.size(), beam);
      EXPECT_LE(got.front().score, want.front().score + 1e-12);
      for (std::size_t i = 1; i < got.size(); ++i) EXPECT_GE(got[i - 1].score, got[i].score);
      for (const auto& h : got) {
        EXPECT_LE(h.tokens.size(), 4u);
        EXPECT_EQ(h.finished, h.tokens.back() == kBeamEnd);
      }
    }
  }
}

TEST(Beam, RejectsDegenerateOptions) {
  auto next = [](std::span<const int> p) { return table_log_probs(p, 0); };
  EXPECT_THROW((void)beam_search(next, {.beam_size = 0}), std::invalid_argument);
  EXPECT_THROW((void)beam_search(next, {.beam_size = 2, .max_len = 0}), std::invalid_argument);
}

TEST(Beam, GeneratorSuggestionsAreDistinctFinishedAndBounded) {
  const std::vector<std::string> texts = {"phone case", "phone", "cable"};
  const Vocab vocab = Vocab::build(texts);
  GenModel m({.d_model = 8, .n_layers = 1, .n_heads = 2, .d_ff = 8, .max_enc_len = 32,
              .max_dec_len = 5},
             vocab.size(), 7);
  const auto input = assemble_input({"u", "ph", {}, {}, ""}, vocab);
  const auto hyps = beam_search(m, input, 16, 10);
  for (const auto& h : hyps) {
    EXPECT_LE(h.tokens.size(), 5u);
    for (int t : h.tokens) EXPECT_TRUE(!Vocab::is_special(t) || t == special::kEos);
  }
  const auto sugg = generate_suggestions(m, vocab, input, 16, 4);
  EXPECT_LE(sugg.size(), 4u);
  std::set<std::string> seen;
  for (std::size_t i = 0; i < sugg.size(); ++i) {
    EXPECT_FALSE(sugg[i].query.empty());
    EXPECT_TRUE(seen.insert(sugg[i].query).second);
    if (i > 0) {
      EXPECT_GE(sugg[i - 1].score, sugg[i].score);
    }
  }
  // Same model, same input: identical output.
  const auto again = generate_suggestions(m, vocab, input, 16, 4);
  ASSERT_EQ(again.size(), sugg.size());
  for (std::size_t i = 0; i < sugg.size(); ++i) {
    EXPECT_EQ(again[i].query, sugg[i].query);
    EXPECT_EQ(again[i].score, sugg[i].score);
  }
}
