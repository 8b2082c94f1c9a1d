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

#include "gensug/serve/snapshot.hpp"

#include "gensug/corpus/jsonl.hpp"
#include "util/json_io.hpp"

namespace gensug::serve {

ModelSnapshot::ModelSnapshot(SnapshotParts parts)
    : parts_(std::move(parts)), created_at_(std::chrono::system_clock::now()) {
  related_ = std::make_unique<pipeline::RelatedQueries>(
      parts_.encoder, parts_.rqvae, parts_.index, parts_.cooccur, parts_.settings.augment_weight,
      parts_.settings.lambda_div, parts_.settings.assembly.max_related);
}

std::shared_ptr<const ModelSnapshot> ModelSnapshot::load(const pipeline::RunConfig& config,
                                                         const std::string& generator_file) {
  using pipeline::Stage;
  pipeline::require_upstream(config, Stage::kEval);
  const pipeline::Paths paths(config.work_dir);
  SnapshotParts p;
  std::string h;
  p.vocab = model::Vocab::load(paths.file("tokenizer.json"), &h);
  p.component_hashes["tokenizer"] = h;
  p.encoder = align::TextEncoder::load(paths.file("encoder.json"), &h);
  p.component_hashes["encoder"] = h;
  p.rqvae = rqvae::RqvaeModel::load(paths.file("rqvae.json"), &h);
  p.component_hashes["rqvae"] = h;
  p.index = rqvae::QueryIndex::load(paths.file("index.jsonl"), &h);
  p.component_hashes["index"] = h;
  const auto cooccur = detail::read_json_file(paths.file("cooccur.json"));
  p.cooccur = cooccur.at("prefix2query").get<pipeline::CooccurMap>();
  p.component_hashes["cooccur"] = cooccur.at("hash").get<std::string>();
  p.generator = model::GenModel::load(paths.file(generator_file), &h);
  p.component_hashes["generator"] = h;
  for (auto& [user, profile] : corpus::read_profiles(paths.file("profiles.jsonl"))) {
    p.profiles[user] = profile;
  }

  p.expected_hashes = {{"tokenizer", pipeline::stage_hash(config, Stage::kTrainSft)},
                       {"encoder", pipeline::stage_hash(config, Stage::kTrainAlign)},
                       {"cooccur", pipeline::stage_hash(config, Stage::kTrainAlign)},
                       {"rqvae", pipeline::stage_hash(config, Stage::kTrainRqvae)},
                       {"index", pipeline::stage_hash(config, Stage::kBuildIndex)},
                       {"generator", pipeline::stage_hash(config, generator_file.starts_with("sft")
                                                                     ? Stage::kTrainSft
                                                                     : Stage::kTrainDpo)}};
  p.config_hash = pipeline::stage_hash(config, Stage::kTrainDpo);
  p.settings.assembly = config.context.assembly;
  p.settings.augment_weight = config.align.augment_weight;
  p.settings.lambda_div = config.context.lambda_div;
  p.settings.beam = config.eval.beam;
  p.settings.max_k = config.serve.max_k;
  return std::make_shared<const ModelSnapshot>(std::move(p));
}

bool ModelSnapshot::verified() const {
  if (parts_.expected_hashes.empty()) return false;
  for (const auto& [name, expected] : parts_.expected_hashes) {
    auto it = parts_.component_hashes.find(name);
    if (it == parts_.component_hashes.end() || it->second != expected) return false;
  }
  return true;
}

std::vector<std::string> ModelSnapshot::related(const std::string& prefix) const {
  return (*related_)(prefix);
}

std::string ModelSnapshot::profile_of(const std::string& user_id) const {
  auto it = parts_.profiles.find(user_id);
  return it == parts_.profiles.end() ? std::string() : it->second;
}

std::vector<model::Suggestion> ModelSnapshot::generate(const UserContext& ctx, std::size_t k) const {
  const auto input = model::assemble_input(ctx, parts_.vocab, parts_.settings.assembly);
  return model::generate_suggestions(parts_.generator, parts_.vocab, input, parts_.settings.beam,
                                     std::min(k, parts_.settings.max_k));
}

}  // namespace gensug::serve
