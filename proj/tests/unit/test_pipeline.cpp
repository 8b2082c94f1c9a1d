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

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <sys/wait.h>

#include "json.hpp"

#include "gensug/pipeline/config.hpp"
#include "gensug/pipeline/stages.hpp"
#include "gensug/util/hash.hpp"
#include "test_util.hpp"

using namespace gensug;
using namespace gensug::pipeline;
using gensug::testing::TempDir;

namespace {

std::string tiny_path() { return std::string(GENSUG_CONFIG_DIR) + "/tiny.json"; }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Hash, Fnv1aKnownVectors) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ULL);
}

TEST(Config, DefaultsParseAndShippedConfigsLoad) {
  const auto def = parse_config("{}");
  EXPECT_EQ(def.seed, 7u);
  EXPECT_EQ(def.eval.k, 16u);
  for (const char* name : {"tiny.json", "desk.json", "large.json"}) {
    EXPECT_NO_THROW((void)load_config(std::string(GENSUG_CONFIG_DIR) + "/" + name)) << name;
  }
}

TEST(Config, RejectsUnknownKeysBadValuesAndMalformedJson) {
  EXPECT_THROW((void)parse_config(R"({"sed": 1})"), ConfigError);
  EXPECT_THROW((void)parse_config(R"({"corpus": {"n_querys": 10}})"), ConfigError);
  EXPECT_THROW((void)parse_config(R"({"corpus": {"n_queries": "many"}})"), ConfigError);
  EXPECT_THROW((void)parse_config(R"({"corpus": {"repeat_prob": 1.5}})"), ConfigError);
  EXPECT_THROW((void)parse_config(R"({"eval": {"k": 40, "beam": 32}})"), ConfigError);
  EXPECT_THROW((void)parse_config(R"({"rqvae": {"codebook": 0}})"), ConfigError);
  EXPECT_THROW((void)parse_config(R"({"seed": 1,)"), ConfigError);
  EXPECT_THROW((void)parse_config("[1, 2]"), ConfigError);
  EXPECT_THROW((void)load_config("/nonexistent/gensug.json"), ConfigError);
  try {
    (void)parse_config(R"({"align": {"tua": 0.1}})");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("align.tua"), std::string::npos) << e.what();
  }
}

TEST(Config, CanonicalJsonRoundTrips) {
  const auto a = load_config(tiny_path());
  const auto b = parse_config(canonical_json(a));
  EXPECT_EQ(canonical_json(a), canonical_json(b));
  EXPECT_EQ(config_hash(a), config_hash(b));
}

TEST(Config, HashIgnoresWorkDirAndServeSettings) {
  auto a = load_config(tiny_path());
  auto b = a;
  b.work_dir = "/elsewhere";
  b.serve.port = 9999;
  b.serve.feedback_log = "other.jsonl";
  EXPECT_EQ(config_hash(a), config_hash(b));
  for (Stage s : all_stages()) EXPECT_EQ(stage_hash(a, s), stage_hash(b, s));
  b.seed += 1;
  EXPECT_NE(config_hash(a), config_hash(b));
}

TEST(StageHash, ChangesOnlyFromTheEditedStageOnward) {
  const auto base = load_config(tiny_path());
  auto edited = base;
  edited.generator.sft.epochs += 1;  // a train-sft section
  for (Stage s : all_stages()) {
    const bool downstream = s >= Stage::kTrainSft;
    EXPECT_EQ(stage_hash(base, s) != stage_hash(edited, s), downstream) << stage_name(s);
  }
  auto seeded = base;
  seeded.seed += 1;
  for (Stage s : all_stages()) EXPECT_NE(stage_hash(base, s), stage_hash(seeded, s));
  std::set<std::string> distinct;
  for (Stage s : all_stages()) distinct.insert(stage_hash(base, s));
  EXPECT_EQ(distinct.size(), all_stages().size());
}

TEST(Seeds, DerivedPerPurposeAndStable) {
  EXPECT_EQ(derive_seed(7, "catalog"), fnv1a64("7:catalog"));
  EXPECT_NE(derive_seed(7, "catalog"), derive_seed(7, "simulate"));
  EXPECT_NE(derive_seed(7, "catalog"), derive_seed(8, "catalog"));
  EXPECT_EQ(derive_seed(7, "sft"), derive_seed(7, "sft"));
}

TEST(Upstream, MissingManifestNamesEarliestStage) {
  TempDir dir("upstream");
  auto config = load_config(tiny_path());
  config.work_dir = dir.str();
  EXPECT_NO_THROW(require_upstream(config, Stage::kGenCorpus));
  try {
    require_upstream(config, Stage::kTrainDpo);
    FAIL() << "expected MissingArtifact";
  } catch (const MissingArtifact& e) {
    EXPECT_EQ(e.stage(), Stage::kGenCorpus);
  }
  std::ostringstream log;
  run_stage(Stage::kGenCorpus, config, log);
  try {
    require_upstream(config, Stage::kTrainRqvae);
    FAIL() << "expected MissingArtifact";
  } catch (const MissingArtifact& e) {
    EXPECT_EQ(e.stage(), Stage::kTrainAlign);
  }
  // Artifacts from another configuration do not count.
  auto other = config;
  other.corpus.sim.n_events += 1;
  try {
    require_upstream(other, Stage::kTrainAlign);
    FAIL() << "expected MissingArtifact";
  } catch (const MissingArtifact& e) {
    EXPECT_EQ(e.stage(), Stage::kGenCorpus);
    EXPECT_NE(std::string(e.what()).find("hash"), std::string::npos);
  }
}

TEST(Corpus, StageIsDeterministicAndSplitsAtCutoff) {
  TempDir a("corpus_a"), b("corpus_b");
  auto config = load_config(tiny_path());
  std::ostringstream log;
  config.work_dir = a.str();
  run_stage(Stage::kGenCorpus, config, log);
  config.work_dir = b.str();
  run_stage(Stage::kGenCorpus, config, log);
  for (const char* f : {"catalog.jsonl", "interactions.jsonl", "profiles.jsonl", "split.json"}) {
    EXPECT_EQ(slurp(a.file(f)), slurp(b.file(f))) << f;
  }
  const auto data = load_corpus(Paths(a.str()));
  ASSERT_FALSE(data.train.empty());
  ASSERT_FALSE(data.test.empty());
  EXPECT_EQ(data.train.size() + data.test.size(), data.records.size());
  for (const auto& r : data.train) EXPECT_LT(r.ts, data.cutoff_ts);
  for (const auto& r : data.test) EXPECT_GE(r.ts, data.cutoff_ts);
}

#ifdef GENSUG_CLI_PATH

namespace {

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult run_cli(const TempDir& dir, const std::string& args) {
  const auto out = dir.file("stdout.txt"), err = dir.file("stderr.txt");
  const std::string cmd = std::string("\"") + GENSUG_CLI_PATH + "\" " + args + " >\"" + out +
                          "\" 2>\"" + err + "\"";
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

nlohmann::json last_json_line(const std::string& text) {
  std::istringstream in(text);
  std::string line, last;
  while (std::getline(in, line)) {
    if (!line.empty()) last = line;
  }
  return nlohmann::json::parse(last);
}

}  // namespace

TEST(Cli, MissingUpstreamExitsThreeNamingTheStage) {
  TempDir dir("cli_missing");
  const std::string common = "-c \"" + tiny_path() + "\" -w \"" + dir.file("run") + "\" ";
  ASSERT_EQ(run_cli(dir, common + "gen-corpus").code, 0);
  const auto r = run_cli(dir, common + "train-rqvae");
  EXPECT_EQ(r.code, 3);
  const auto j = last_json_line(r.err);
  EXPECT_EQ(j["code"], 3);
  EXPECT_EQ(j["stage"], "train-align");
  EXPECT_NE(j["error"].get<std::string>().find("train-align"), std::string::npos);
}

TEST(Cli, ConfigErrorsExitTwo) {
  TempDir dir("cli_config");
  std::ofstream(dir.file("bad.json")) << R"({"corpus": {"bogus": 1}})";
  const auto r = run_cli(dir, "-c \"" + dir.file("bad.json") + "\" gen-corpus");
  EXPECT_EQ(r.code, 2);
  const auto j = last_json_line(r.err);
  EXPECT_EQ(j["code"], 2);
  EXPECT_NE(j["error"].get<std::string>().find("corpus.bogus"), std::string::npos);
  EXPECT_EQ(run_cli(dir, "-c \"" + dir.file("missing.json") + "\" eval").code, 2);
}

#endif
