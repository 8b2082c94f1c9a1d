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

#include <chrono>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "gensug/align/encoder.hpp"
#include "gensug/model/beam.hpp"
#include "gensug/model/context.hpp"
#include "gensug/model/transformer.hpp"
#include "gensug/model/vocab.hpp"
#include "gensug/pipeline/config.hpp"
#include "gensug/pipeline/stages.hpp"
#include "gensug/rqvae/query_index.hpp"
#include "gensug/rqvae/rqvae.hpp"

namespace gensug::serve {

struct SnapshotSettings {
  model::AssemblyConfig assembly;
  double augment_weight = 0.5;
  double lambda_div = 0.7;
  std::size_t beam = 32;
  std::size_t max_k = 16;
};

/// Everything one snapshot serves from. `component_hashes` holds the hash
/// each checkpoint was written with; `expected_hashes` what the run
/// configuration says it should be.
struct SnapshotParts {
  model::Vocab vocab;
  align::TextEncoder encoder;
  rqvae::RqvaeModel rqvae;
  rqvae::QueryIndex index;
  pipeline::CooccurMap cooccur;
  model::GenModel generator;
  std::map<std::string, std::string> profiles;
  SnapshotSettings settings;
  std::string config_hash;
  std::map<std::string, std::string> component_hashes;
  std::map<std::string, std::string> expected_hashes;
};

/// Immutable deployed model. Safe for concurrent readers.
class ModelSnapshot {
 public:
  explicit ModelSnapshot(SnapshotParts parts);

  /// Loads the trained artifacts of a run; `generator_file` picks which
  /// generator checkpoint to deploy.
  static std::shared_ptr<const ModelSnapshot> load(const pipeline::RunConfig& config,
                                                   const std::string& generator_file = "dpo_list.json");

  /// Every component hash present and equal to its expected value.
  bool verified() const;
  const std::string& config_hash() const { return parts_.config_hash; }
  std::chrono::system_clock::time_point created_at() const { return created_at_; }
  const SnapshotSettings& settings() const { return parts_.settings; }
  const SnapshotParts& parts() const { return parts_; }

  std::vector<std::string> related(const std::string& prefix) const;
  std::string profile_of(const std::string& user_id) const;
  /// Beam search over the assembled context; at most min(k, max_k) results.
  std::vector<model::Suggestion> generate(const UserContext& ctx, std::size_t k) const;

 private:
  SnapshotParts parts_;
  std::unique_ptr<pipeline::RelatedQueries> related_;
  std::chrono::system_clock::time_point created_at_;
};

}  // namespace gensug::serve
