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
#include <limits>
#include <random>
#include <set>

#include "gensug/align/encoder.hpp"
#include "gensug/rqvae/query_index.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace gensug;
using namespace gensug::rqvae;
using gensug::testing::TempDir;
using namespace gensug::oracle;

TEST(QueryIndex, BucketsMatchPrefixes) {
  std::mt19937_64 rng(1);
  auto index = random_index(rng, 50, 3, 3, 4, 50);
  const SemanticID probe{{1, 2, 0}};
  for (std::size_t len = 0; len <= 3; ++len) {
    std::vector<std::size_t> expected;
    for (std::size_t i = 0; i < index.size(); ++i) {
      if (std::equal(probe.codes.begin(), probe.codes.begin() + len,
                     index.entries()[i].id.codes.begin())) {
        expected.push_back(i);
      }
    }
    EXPECT_EQ(index.bucket(probe, len), expected) << "length " << len;
  }
  EXPECT_EQ(index.bucket(probe, 0).size(), 50u);
}

TEST(QueryIndex, RejectsWrongCodeLength) {
  std::vector<IndexEntry> entries = {{"a", {1.0}, {{0, 1}}}};
  EXPECT_THROW(QueryIndex(entries, 3), std::invalid_argument);
}

TEST(RelatedSearch, MatchesStagedExhaustiveScanOn200Entries) {
  std::mt19937_64 rng(42);
  auto index = random_index(rng, 200, 3, 4, 6, 150);
  std::uniform_int_distribution<int> code(0, 3);
  std::uniform_int_distribution<std::size_t> kdist(1, 60);
  std::uniform_real_distribution<double> lam(0.05, 0.95);
  std::normal_distribution<double> g(0, 1);
  for (int trial = 0; trial < 200; ++trial) {
    SemanticID id{{code(rng), code(rng), code(rng)}};
    std::vector<double> p(6);
    for (double& x : p) x = g(rng);
    p = unit(p);
    const std::size_t k = kdist(rng);
    const double lambda = lam(rng);

    const auto positions = staged_scan(index, id, 4 * k);
    ASSERT_EQ(gather_candidates(index, id, 4 * k), positions) << "trial " << trial;
    std::vector<Candidate> cands;
    for (auto i : positions) cands.push_back({index.entries()[i].query, index.entries()[i].embedding});
    ASSERT_EQ(related_query_search(index, id, p, k, lambda), mmr_oracle(cands, p, k, lambda))
        << "trial " << trial << " k " << k << " lambda " << lambda;
  }
}

TEST(RelatedSearch, KBeyondIndexReturnsEveryDistinctQuery) {
  std::mt19937_64 rng(3);
  auto index = random_index(rng, 30, 2, 2, 3, 20);
  std::set<std::string> distinct;
  for (const auto& e : index.entries()) distinct.insert(e.query);
  const std::vector<double> p = unit({1, 1, 1});
  auto out = related_query_search(index, SemanticID{{0, 0}}, p, 100);
  EXPECT_EQ(out.size(), distinct.size());
  EXPECT_EQ(std::set<std::string>(out.begin(), out.end()), distinct);
}

TEST(Mmr, HandTrace) {
  const std::vector<double> p = {1, 0};
  const double s = std::sqrt(1 - 0.99 * 0.99);
  const std::vector<Candidate> cands = {
      {"a", {1, 0}},          {"d", {0.99, s}}, {"b", {0.8, 0.6}},
      {"a", {0, 1}},          {"c", {0.6, -0.8}},
  };
  // lambda 0.3, first pick a (0.3). Second: d -0.396, b -0.32, c -0.24 -> c.
  // Third: d 0.297 - 0.7 * 0.99 = -0.396, b 0.24 - 0.7 * 0.8 = -0.32 -> b.
  EXPECT_EQ(screen_candidates(cands, p, 4, 0.3), (std::vector<std::string>{"a", "c", "b", "d"}));
  // With relevance dominant the near-duplicate d comes second.
  EXPECT_EQ(screen_candidates(cands, p, 2, 0.9), (std::vector<std::string>{"a", "d"}));
  EXPECT_THROW((void)screen_candidates(cands, p, 2, 0.0), std::invalid_argument);
  EXPECT_THROW((void)screen_candidates(cands, p, 2, 1.0), std::invalid_argument);
}

TEST(Mmr, TiesGoToEarlierCandidate) {
  const std::vector<double> p = {1, 0};
  const std::vector<Candidate> cands = {{"x", {0, 1}}, {"y", {0, -1}}, {"z", {0, 1}}};
  EXPECT_EQ(screen_candidates(cands, p, 1, 0.5), (std::vector<std::string>{"x"}));
}

TEST(QueryIndex, SaveLoadRoundTrip) {
  TempDir dir("index");
  std::mt19937_64 rng(8);
  auto index = random_index(rng, 25, 3, 4, 5, 25);
  index.save(dir.file("i.jsonl"), "cfg");
  std::string hash;
  auto loaded = QueryIndex::load(dir.file("i.jsonl"), &hash);
  EXPECT_EQ(hash, "cfg");
  ASSERT_EQ(loaded.size(), index.size());
  for (std::size_t i = 0; i < index.size(); ++i) {
    EXPECT_EQ(loaded.entries()[i].query, index.entries()[i].query);
    EXPECT_EQ(loaded.entries()[i].embedding, index.entries()[i].embedding);
    EXPECT_EQ(loaded.entries()[i].id, index.entries()[i].id);
  }
}
