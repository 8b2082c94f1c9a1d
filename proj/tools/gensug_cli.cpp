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

// gensug: pipeline driver and suggestion server.

#include <csignal>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>

#include "CLI11.hpp"
#include "gensug/pipeline/config.hpp"
#include "gensug/pipeline/stages.hpp"
#include "gensug/serve/http.hpp"
#include "gensug/serve/service.hpp"
#include "gensug/serve/snapshot.hpp"
#include "json.hpp"

namespace {

using namespace gensug;

constexpr int kConfigError = 2;
constexpr int kMissingArtifact = 3;
constexpr int kRuntimeError = 4;

int fail(int code, const std::string& message, const std::string& stage = {}) {
  nlohmann::json j{{"error", message}, {"code", code}};
  if (!stage.empty()) j["stage"] = stage;
  std::cerr << j.dump() << '\n';
  return code;
}

serve::HttpServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

std::string feedback_path(const pipeline::RunConfig& config) {
  const std::filesystem::path p(config.serve.feedback_log);
  return p.is_absolute() ? p.string() : (std::filesystem::path(config.work_dir) / p).string();
}

std::unique_ptr<serve::SuggestService> make_service(const pipeline::RunConfig& config) {
  auto snapshot = serve::ModelSnapshot::load(config);
  if (!snapshot->verified()) {
    throw std::runtime_error("snapshot components were built under different configurations");
  }
  const auto data = pipeline::load_corpus(pipeline::Paths(config.work_dir));
  return std::make_unique<serve::SuggestService>(snapshot, feedback_path(config), data.records,
                                                 config.corpus.history_len);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gensug: generative query suggestion pipeline"};
  app.require_subcommand(1);
  std::string config_path;
  std::string work_dir;
  app.add_option("-c,--config", config_path, "Run configuration (JSON)")->required();
  app.add_option("-w,--work-dir", work_dir, "Override the configured artifact directory");

  std::vector<std::pair<CLI::App*, pipeline::Stage>> stage_cmds;
  const std::map<pipeline::Stage, std::string> help = {
      {pipeline::Stage::kGenCorpus, "Generate the synthetic catalog and interaction log"},
      {pipeline::Stage::kTrainAlign, "Mine pairs and train the contrastive text encoder"},
      {pipeline::Stage::kTrainRqvae, "Train the residual-quantized autoencoder"},
      {pipeline::Stage::kBuildIndex, "Assign semantic IDs and write the related-query index"},
      {pipeline::Stage::kTrainSft, "Train the generator with next-token cross-entropy"},
      {pipeline::Stage::kTrainDpo, "Preference-align the generator (pair-wise and list-wise)"},
      {pipeline::Stage::kEval, "Evaluate baselines and ablations, check orderings"},
  };
  for (auto stage : pipeline::all_stages()) {
    stage_cmds.emplace_back(app.add_subcommand(std::string(pipeline::stage_name(stage)), help.at(stage)),
                            stage);
  }
  auto* all = app.add_subcommand("all", "Run every stage in order");

  auto* serve_cmd = app.add_subcommand("serve", "Serve /suggest, /feedback and /healthz over HTTP");
  std::optional<int> port;
  std::string static_dir;
  serve_cmd->add_option("-p,--port", port, "Override serve.port (0 picks a free port)");
  serve_cmd->add_option("--static-dir", static_dir, "Directory served at /ui");

  auto* suggest_cmd = app.add_subcommand("suggest", "Print suggestions for one prefix as query<TAB>score");
  std::string prefix, user;
  std::size_t k = 16;
  suggest_cmd->add_option("prefix", prefix, "Typed prefix")->required();
  suggest_cmd->add_option("-u,--user", user, "User id (unknown users get no history)");
  suggest_cmd->add_option("-k", k, "Number of suggestions")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  pipeline::RunConfig config;
  try {
    config = pipeline::load_config(config_path);
    if (!work_dir.empty()) config.work_dir = work_dir;
  } catch (const pipeline::ConfigError& e) {
    return fail(kConfigError, e.what());
  }

  std::string current;
  try {
    for (auto& [cmd, stage] : stage_cmds) {
      if (cmd->parsed()) {
        current = pipeline::stage_name(stage);
        pipeline::run_stage(stage, config, std::cout);
        return 0;
      }
    }
    if (all->parsed()) {
      for (auto stage : pipeline::all_stages()) {
        current = pipeline::stage_name(stage);
        pipeline::run_stage(stage, config, std::cout);
      }
      return 0;
    }
    if (suggest_cmd->parsed()) {
      current = "suggest";
      const auto service = make_service(config);
      for (const auto& s : service->suggest(user, prefix, k)) {
        std::cout << s.query << '\t' << s.score << '\n';
      }
      return 0;
    }
    if (serve_cmd->parsed()) {
      current = "serve";
      const auto service = make_service(config);
      serve::HttpServer server(*service, static_dir);
      const int bound = server.bind(config.serve.host, port.value_or(config.serve.port));
      if (bound < 0) return fail(kRuntimeError, "cannot bind " + config.serve.host, current);
      std::cout << "serving on http://" << config.serve.host << ':' << bound << " snapshot "
                << service->snapshot()->config_hash() << std::endl;
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      server.listen();
      g_server = nullptr;
      return 0;
    }
  } catch (const pipeline::MissingArtifact& e) {
    return fail(kMissingArtifact, e.what(), std::string(pipeline::stage_name(e.stage())));
  } catch (const pipeline::ConfigError& e) {
    return fail(kConfigError, e.what(), current);
  } catch (const std::exception& e) {
    return fail(kRuntimeError, e.what(), current);
  }
  return 0;
}
