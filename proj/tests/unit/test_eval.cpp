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

#include "json.hpp"

#include "gensug/eval/ablation.hpp"
#include "gensug/eval/metrics.hpp"

using namespace gensug;
using namespace gensug::eval;

TEST(Metrics, HitRateAndMrr) {
  const std::vector<std::string> ranked = {"a", "b", "c", "d"};
  EXPECT_EQ(hit_rate_at_k(ranked, {"c"}, 3), 1);
  EXPECT_EQ(hit_rate_at_k(ranked, {"d"}, 3), 0);
  EXPECT_EQ(hit_rate_at_k(ranked, {"d"}, 16), 1);
  EXPECT_EQ(hit_rate_at_k({}, {"d"}, 16), 0);
  EXPECT_THROW((void)hit_rate_at_k(ranked, {"a"}, 0), std::invalid_argument);
  EXPECT_DOUBLE_EQ(mrr(ranked, {"c"}), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(mrr(ranked, {"d", "b"}), 0.5);
  EXPECT_DOUBLE_EQ(mrr(ranked, {"z"}), 0.0);
}

TEST(Metrics, PopularitySlices) {
  const SliceThresholds t{.top = 50, .mid = 10};
  EXPECT_EQ(classify_popularity(51, t), Popularity::kTop);
  EXPECT_EQ(classify_popularity(50, t), Popularity::kMiddle);
  EXPECT_EQ(classify_popularity(10, t), Popularity::kMiddle);
  EXPECT_EQ(classify_popularity(9, t), Popularity::kLongTail);
  EXPECT_EQ(classify_popularity(0, t), Popularity::kLongTail);
  EXPECT_THROW((void)classify_popularity(5, {.top = 10, .mid = 10}), std::invalid_argument);
  EXPECT_THROW((void)classify_popularity(5, {.top = 10, .mid = 0}), std::invalid_argument);

  std::vector<EvalCase> cases(3);
  cases[0].context.prefix = "a";
  cases[1].context.prefix = "b";
  cases[2].context.prefix = "zz";
  slice_by_popularity(cases, {{"a", 100}, {"b", 20}}, t);
  EXPECT_EQ(cases[0].popularity, Popularity::kTop);
  EXPECT_EQ(cases[1].popularity, Popularity::kMiddle);
  EXPECT_EQ(cases[2].popularity, Popularity::kLongTail);
  EXPECT_EQ(popularity_name(Popularity::kLongTail), "long-tail");
}

namespace {

System fixed(const std::string& name, std::map<std::string, std::vector<std::string>> answers) {
  return {name, [answers](const EvalCase& c) { return answers.at(c.context.prefix); }};
}

std::vector<EvalCase> two_cases() {
  std::vector<EvalCase> cases(2);
  cases[0].context.prefix = "p";
  cases[0].relevant = {"p1"};
  cases[0].popularity = Popularity::kTop;
  cases[1].context.prefix = "q";
  cases[1].relevant = {"q1"};
  cases[1].popularity = Popularity::kLongTail;
  return cases;
}

}  // namespace

TEST(Ablation, AggregatesPerSystemAndSlice) {
  const auto cases = two_cases();
  std::vector<System> systems = {
      fixed("a", {{"p", {"p1"}}, {"q", {"x", "q1"}}}),
      fixed("b", {{"p", {"x"}}, {"q", {"y"}}}),
  };
  const auto report = run_ablation(systems, cases, 16, "cfg", 7);
  const auto& a = report.row("a");
  EXPECT_EQ(a.overall.cases, 2u);
  EXPECT_DOUBLE_EQ(a.overall.hit_rate, 1.0);
  EXPECT_DOUBLE_EQ(a.overall.mrr, 0.75);
  EXPECT_DOUBLE_EQ(a.slices.at(Popularity::kLongTail).mrr, 0.5);
  EXPECT_EQ(a.slices.at(Popularity::kMiddle).cases, 0u);
  EXPECT_DOUBLE_EQ(report.row("b").overall.hit_rate, 0.0);
  EXPECT_THROW((void)report.row("c"), std::out_of_range);

  const auto j = nlohmann::json::parse(report.to_json());
  EXPECT_EQ(j["config_hash"], "cfg");
  EXPECT_EQ(j["systems"].size(), 2u);
  EXPECT_EQ(j["systems"][0]["system"], "a");
  EXPECT_NE(report.table().find("a"), std::string::npos);
  EXPECT_THROW((void)run_ablation(std::vector<System>{}, cases, 16, "", 0), std::invalid_argument);
}

TEST(Ablation, OrderingAssertionsPassAndFail) {
  const auto cases = two_cases();
  auto make = [&](bool list_good, bool ablation_hurts) {
    std::vector<System> systems = {
        fixed("mpc", {{"p", {"x"}}, {"q", {"x"}}}),
        fixed("sft", {{"p", {"x", "p1"}}, {"q", {"x"}}}),
        fixed("sft+pair", {{"p", {"p1"}}, {"q", {"x"}}}),
        fixed("sft+list", {{"p", {"p1"}}, {"q", {list_good ? "q1" : "x"}}}),
        fixed("sft+list-no-related", {{"p", {"p1"}}, {"q", {ablation_hurts ? "x" : "q1"}}}),
    };
    auto report = run_ablation(systems, cases, 16, "cfg", 7);
    add_ordering_assertions(report);
    return report;
  };
  const auto good = make(true, true);
  ASSERT_EQ(good.assertions.size(), 4u);
  EXPECT_TRUE(good.all_passed()) << good.table();

  const auto bad = make(false, false);
  EXPECT_FALSE(bad.all_passed());
  EXPECT_TRUE(bad.assertions[0].passed);   // HR chain ties hold
  EXPECT_FALSE(bad.assertions[2].passed);  // no gain over sft
  EXPECT_NE(bad.table().find("FAIL"), std::string::npos);
}
