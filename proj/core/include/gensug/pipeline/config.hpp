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
#include <stdexcept>
#include <string>
#include <string_view>

#include "gensug/align/contrastive.hpp"
#include "gensug/align/encoder.hpp"
#include "gensug/corpus/catalog.hpp"
#include "gensug/corpus/simulate.hpp"
#include "gensug/eval/metrics.hpp"
#include "gensug/model/context.hpp"
#include "gensug/model/sft.hpp"
#include "gensug/model/transformer.hpp"
#include "gensug/pref/dpo.hpp"
#include "gensug/pref/reward.hpp"
#include "gensug/rqvae/rqvae.hpp"

namespace gensug::pipeline {

/// Invalid or unparseable run configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CorpusParams {
  corpus::CatalogConfig catalog;
  corpus::SimConfig sim;
  double test_fraction = 0.15;  // latest page views held out for eval
  std::size_t history_len = 10;
};

struct AlignParams {
  align::EncoderConfig encoder;
  align::MiningConfig mining;
  align::AlignTrainConfig train;  // seed comes from RunConfig
  double augment_weight = 0.5;
};

struct RqvaeParams {
  rqvae::RqvaeConfig model;  // d_in is taken from the encoder output width
  rqvae::RqvaeTrainConfig train;
  std::size_t min_positive = 1;  // index admission threshold
};

struct ContextParams {
  model::AssemblyConfig assembly;
  double lambda_div = 0.7;
  bool word_tokens = true;
};

struct GeneratorParams {
  model::GenConfig model;
  model::SftTrainConfig sft;
};

struct DpoParams {
  pref::RewardParams reward;
  pref::DpoTrainConfig train;  // mode is ignored: every mode is trained
  std::size_t rand_negatives = 1;
  bool adjacent_level_pairs = false;
};

struct EvalParams {
  std::size_t k = 16;
  std::size_t beam = 32;
  eval::SliceThresholds slices;
  double min_gain = 0.02;
  double min_tail_gain = 0.01;
  std::size_t max_cases = 0;  // 0 keeps every held-out case
};

struct ServeParams {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string feedback_log = "feedback.jsonl";
  std::size_t max_k = 16;
};

struct RunConfig {
  std::uint64_t seed = 7;
  std::string work_dir = "runs/default";
  CorpusParams corpus;
  AlignParams align;
  RqvaeParams rqvae;
  ContextParams context;
  GeneratorParams generator;
  DpoParams dpo;
  EvalParams eval;
  ServeParams serve;
};

/// Parses and validates; unknown keys are rejected. Throws ConfigError.
RunConfig parse_config(std::string_view json_text);
RunConfig load_config(const std::string& path);

/// Sorted-key JSON of the fully defaulted configuration.
std::string canonical_json(const RunConfig& config);
/// Canonical JSON of one top-level section ("seed" included as a section).
std::string section_json(const RunConfig& config, std::string_view section);
/// Hash of the whole canonical configuration, excluding work_dir and serve.
std::string config_hash(const RunConfig& config);

}  // namespace gensug::pipeline
