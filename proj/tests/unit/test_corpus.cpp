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
#include <map>
#include <random>
#include <set>

#include "gensug/corpus/catalog.hpp"
#include "gensug/corpus/datasets.hpp"
#include "gensug/corpus/jsonl.hpp"
#include "gensug/corpus/mpc.hpp"
#include "gensug/corpus/simulate.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace gensug::corpus;
using gensug::testing::TempDir;

TEST(Levels, NamesRoundTripAndUnknownListsValidNames) {
  for (Level l : kAllLevels) EXPECT_EQ(parse_level(level_name(l)), l);
  try {
    (void)parse_level("Purchase");
    FAIL();
  } catch (const std::invalid_argument& e) {
    const std::string what = e.what();
    for (Level l : kAllLevels) EXPECT_NE(what.find(level_name(l)), std::string::npos) << what;
  }
  Level out{};
  EXPECT_FALSE(try_parse_level("click", out));
  EXPECT_TRUE(stronger(Level::kOrder, Level::kClick));
  EXPECT_FALSE(stronger(Level::kShow, Level::kShow));
  EXPECT_TRUE(is_positive(Level::kItemClick));
  EXPECT_FALSE(is_positive(Level::kShow));
}

TEST(Jsonl, RecordRoundTripAndRejectsMalformed) {
  InteractionRecord r{"u1", "ph", "phone case", Level::kItemClick, 1700000123};
  EXPECT_EQ(record_from_jsonl(record_to_jsonl(r)), r);
  EXPECT_THROW((void)record_from_jsonl("{not json"), std::invalid_argument);
  EXPECT_THROW((void)record_from_jsonl(
                   R"({"user_id":"u","prefix":"p","query":"q","level":"Bogus","ts":1})"),
               std::invalid_argument);
}

TEST(Jsonl, FilesRoundTrip) {
  TempDir dir("jsonl");
  const Catalog cat = generate_catalog(5, {.n_categories = 3, .n_queries = 30});
  write_catalog(dir.file("c.jsonl"), cat);
  EXPECT_EQ(read_catalog(dir.file("c.jsonl")), cat);
  const auto log = simulate_logs(cat, {.n_users = 4, .n_events = 20}, 9);
  write_records(dir.file("r.jsonl"), log.records);
  EXPECT_EQ(read_records(dir.file("r.jsonl")), log.records);
}

TEST(Catalog, DeterministicAndNormalizedPerCategory) {
  const CatalogConfig cfg{.n_categories = 4, .n_queries = 40, .power_law_exponent = 1.0};
  const Catalog a = generate_catalog(3, cfg);
  EXPECT_EQ(a, generate_catalog(3, cfg));
  EXPECT_EQ(a.size(), 40u);
  EXPECT_EQ(a.categories.size(), 4u);
  std::map<std::string, double> mass;
  std::set<std::string> seen;
  for (const auto& e : a.entries) {
    mass[e.category] += e.weight;
    EXPECT_TRUE(e.query.starts_with(e.category + " ")) << e.query;
    EXPECT_TRUE(seen.insert(e.query).second) << "duplicate " << e.query;
    EXPECT_GE(a.find(e.query), 0);
  }
  for (const auto& [cat, m] : mass) EXPECT_NEAR(m, 1.0, 1e-12) << cat;
  EXPECT_EQ(a.find("no such query"), -1);
}

TEST(Simulator, InvariantsHoldAcrossSeeds) {
  const Catalog cat = generate_catalog(1, {.n_categories = 5, .n_queries = 60});
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SimConfig cfg{.n_users = 8, .n_events = 80};
    const auto log = simulate_logs(cat, cfg, seed);
    EXPECT_EQ(log.traces.size(), cfg.n_events);
    std::int64_t last = 0;
    for (const auto& r : log.records) {
      EXPECT_TRUE(r.query.starts_with(r.prefix)) << r.prefix << " / " << r.query;
      EXPECT_FALSE(r.prefix.empty());
      EXPECT_GE(cat.find(r.query), 0);
      EXPECT_GE(r.ts, last);
      last = r.ts;
      EXPECT_NE(r.level, Level::kRand);
    }
    const auto again = simulate_logs(cat, cfg, seed);
    EXPECT_EQ(again.records, log.records);
  }
}

TEST(Simulator, RepeatProbabilityOneReissuesRecentQueries) {
  const Catalog cat = generate_catalog(2, {.n_categories = 4, .n_queries = 40});
  const auto log =
      simulate_logs(cat, {.n_users = 1, .n_events = 30, .repeat_prob = 1.0, .recent_window = 8}, 4);
  for (std::size_t i = 1; i < log.traces.size(); ++i) {
    EXPECT_EQ(log.traces[i].intended, log.traces[0].intended);
  }
}

TEST(RatioTable, CountsPerPrefixAndLevel) {
  const std::vector<InteractionRecord> recs = {
      {"u", "ab", "abc", Level::kClick, 1}, {"u", "ab", "abd", Level::kClick, 2},
      {"v", "ab", "abc", Level::kClick, 3}, {"v", "ab", "abc", Level::kShow, 3},
      {"v", "a", "abc", Level::kClick, 4},
  };
  RatioTable t(recs);
  EXPECT_DOUBLE_EQ(t.ratio("ab", Level::kClick, "abc"), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(t.ratio("ab", Level::kClick, "abz"), 0.0);
  EXPECT_DOUBLE_EQ(t.ratio("ab", Level::kShow, "abc"), 1.0);
  EXPECT_THROW((void)t.ratio("ab", Level::kOrder, "abc"), std::out_of_range);
  EXPECT_DOUBLE_EQ(compute_level_ratio(recs, "a", Level::kClick, "abc"), 1.0);
}

TEST(History, StrictlyBeforeMostRecentFirstPositiveOnly) {
  const std::vector<InteractionRecord> recs = {
      {"u", "a", "a1", Level::kClick, 1}, {"u", "a", "a2", Level::kShow, 2},
      {"u", "a", "a3", Level::kOrder, 3}, {"u", "a", "a4", Level::kItemClick, 5},
      {"w", "a", "w1", Level::kClick, 2},
  };
  HistoryIndex h(recs);
  EXPECT_EQ(h.before("u", 5, 10), (std::vector<std::string>{"a3", "a1"}));
  EXPECT_EQ(h.before("u", 6, 2), (std::vector<std::string>{"a4", "a3"}));
  EXPECT_TRUE(h.before("u", 1, 10).empty());
  EXPECT_TRUE(h.before("nobody", 9, 10).empty());
  EXPECT_EQ(h.latest("u", 1), (std::vector<std::string>{"a4"}));

  const auto sft = build_sft_dataset(recs, 10);
  ASSERT_EQ(sft.size(), 4u);
  EXPECT_EQ(sft[2].target, "a3");
  EXPECT_EQ(sft[2].context.history, (std::vector<std::string>{"a1"}));
}

TEST(PreferenceGroups, HandBuiltPageView) {
  const std::vector<InteractionRecord> recs = {
      {"u", "ab", "abc", Level::kShow, 10},  {"u", "ab", "abc", Level::kClick, 10},
      {"u", "ab", "abd", Level::kShow, 10},  {"u", "ab", "abe", Level::kNotShow, 10},
      {"u", "ab", "abf", Level::kShow, 20},
  };
  const double e = std::exp(1.0);
  PairPolicy list{.listwise = true, .rand_negatives = 0};
  auto groups = build_preference_groups(recs, list);
  ASSERT_EQ(groups.size(), 1u);
  const auto& g = groups[0];
  EXPECT_EQ(g.win.query, "abc");
  EXPECT_EQ(g.win.level, Level::kClick);
  EXPECT_DOUBLE_EQ(g.win.reward, 1.0 * e);
  ASSERT_EQ(g.loses.size(), 2u);
  EXPECT_EQ(g.loses[0].query, "abd");
  // Show at (ab, ts 10..20) has three records: abc, abd, abf.
  EXPECT_DOUBLE_EQ(g.loses[0].pi, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(g.loses[0].reward, 0.5 * std::exp(1.0 / 3.0));
  EXPECT_DOUBLE_EQ(g.rw[0], std::min(10.0, 1.0 / (e - 0.5 * std::exp(1.0 / 3.0))));
  EXPECT_EQ(g.loses[1].query, "abe");
  EXPECT_DOUBLE_EQ(g.rw[1], 1.0 / (e - 0.2 * e));

  PairPolicy pair = list;
  pair.listwise = false;
  auto pairs = build_preference_groups(recs, pair);
  ASSERT_EQ(pairs.size(), 2u);
  for (const auto& p : pairs) EXPECT_EQ(p.loses.size(), 1u);
}

TEST(PreferenceGroups, RandNegativesAreUnseenAndZeroReward) {
  const Catalog cat = generate_catalog(1, {.n_categories = 2, .n_queries = 20});
  const std::string q = cat.entries[0].query;
  const std::vector<InteractionRecord> recs = {{"u", q.substr(0, 2), q, Level::kClick, 1}};
  PairPolicy pol{.listwise = true, .rand_negatives = 3, .seed = 5, .catalog = &cat};
  auto groups = build_preference_groups(recs, pol);
  ASSERT_EQ(groups.size(), 1u);
  ASSERT_EQ(groups[0].loses.size(), 3u);
  for (const auto& l : groups[0].loses) {
    EXPECT_EQ(l.level, Level::kRand);
    EXPECT_EQ(l.reward, 0.0);
    EXPECT_NE(l.query, q);
  }
  EXPECT_EQ(build_preference_groups(recs, pol)[0].loses[0].query, groups[0].loses[0].query);
  pol.catalog = nullptr;
  EXPECT_THROW((void)build_preference_groups(recs, pol), std::invalid_argument);
}

TEST(Mpc, MatchesScanAndSortOracle) {
  std::mt19937_64 rng(21);
  const std::string alphabet = "abc ";
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<InteractionRecord> recs;
    std::uniform_int_distribution<int> len(1, 5), ch(0, 3), lvl(0, 4);
    for (int i = 0; i < 60; ++i) {
      std::string q;
      const int n = len(rng);
      for (int j = 0; j < n; ++j) q.push_back(alphabet[ch(rng)]);
      recs.push_back({"u", q.substr(0, 1), q, kAllLevels[lvl(rng)], i});
    }
    const auto trie = mpc_build(recs);
    for (const std::string prefix : {"", "a", "ab", "b ", "c", "zz"}) {
      for (std::size_t k : {1u, 3u, 16u, 100u}) {
        const auto expected = gensug::oracle::mpc_scan(recs, prefix, k);
        EXPECT_EQ(mpc_suggest(trie, prefix, k), expected) << "prefix '" << prefix << "' k " << k;
      }
    }
  }
}

TEST(Mpc, RejectsZeroK) {
  MpcTrie t;
  t.insert("abc", 2);
  EXPECT_THROW((void)t.suggest("a", 0), std::invalid_argument);
  EXPECT_EQ(t.frequency("abc"), 2u);
  EXPECT_EQ(t.frequency("ab"), 0u);
}
