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
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gensug/align/encoder.hpp"
#include "gensug/corpus/catalog.hpp"
#include "gensug/corpus/feedback.hpp"
#include "gensug/eval/ablation.hpp"
#include "gensug/pipeline/config.hpp"
#include "gensug/rqvae/query_index.hpp"
#include "gensug/rqvae/rqvae.hpp"

namespace gensug::pipeline {

enum class Stage { kGenCorpus, kTrainAlign, kTrainRqvae, kBuildIndex, kTrainSft, kTrainDpo, kEval };

std::string_view stage_name(Stage stage);
/// Pipeline order.
const std::vector<Stage>& all_stages();

/// An upstream stage has not produced its artifacts for this configuration
/// (CLI exit code 3).
class MissingArtifact : public std::runtime_error {
 public:
  MissingArtifact(Stage stage, const std::string& reason);
  Stage stage() const { return stage_; }

 private:
  Stage stage_;
};

/// Chained hash: a stage's hash covers its own config sections and the hash
/// of the stage before it.
std::string stage_hash(const RunConfig& config, Stage stage);

/// Seed for one consumer, derived from the run seed.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view purpose);

/// Artifact locations under the work directory.
struct Paths {
  explicit Paths(std::string work_dir) : dir(std::move(work_dir)) {}
  std::string file(const std::string& name) const { return dir + "/" + name; }
  std::string manifest(Stage stage) const;
  std::string dir;
};

/// Throws MissingArtifact naming the earliest stage before `stage` whose
/// manifest is absent or was produced under a different hash.
void require_upstream(const RunConfig& config, Stage stage);

struct CorpusData {
  corpus::Catalog catalog;
  std::vector<corpus::InteractionRecord> records;  // chronological
  std::vector<corpus::InteractionRecord> train;
  std::vector<corpus::InteractionRecord> test;
  std::map<std::string, std::string> profiles;
  std::int64_t cutoff_ts = 0;  // first held-out timestamp
};

CorpusData load_corpus(const Paths& paths);

/// prefix -> co-occurring queries, from mined prefix-query pairs.
using CooccurMap = std::map<std::string, std::vector<std::string>>;
CooccurMap load_cooccur(const std::string& path);

/// Builds the related-query list of a prefix: augmented prefix
/// embedding, semantic ID, fine-to-coarse search, diversity screening.
class RelatedQueries {
 public:
  RelatedQueries(const align::TextEncoder& encoder, const rqvae::RqvaeModel& rqvae,
                 const rqvae::QueryIndex& index, const CooccurMap& cooccur,
                 double augment_weight, double lambda_div, std::size_t m);

  std::vector<std::string> operator()(const std::string& prefix) const;

 private:
  const align::TextEncoder& encoder_;
  const rqvae::RqvaeModel& rqvae_;
  const rqvae::QueryIndex& index_;
  const CooccurMap& cooccur_;
  double augment_weight_;
  double lambda_div_;
  std::size_t m_;
};

void gen_corpus(const RunConfig& config, std::ostream& log);
void train_align(const RunConfig& config, std::ostream& log);
void train_rqvae(const RunConfig& config, std::ostream& log);
void build_index(const RunConfig& config, std::ostream& log);
void train_sft(const RunConfig& config, std::ostream& log);
void train_dpo(const RunConfig& config, std::ostream& log);
/// Writes eval_report.json and eval_report.txt and returns the report.
eval::EvalReport run_eval(const RunConfig& config, std::ostream& log);

void run_stage(Stage stage, const RunConfig& config, std::ostream& log);

}  // namespace gensug::pipeline
