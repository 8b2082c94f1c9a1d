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

#include "gensug/pipeline/stages.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>

#include "gensug/align/contrastive.hpp"
#include "gensug/corpus/datasets.hpp"
#include "gensug/corpus/jsonl.hpp"
#include "gensug/corpus/mpc.hpp"
#include "gensug/corpus/simulate.hpp"
#include "gensug/model/beam.hpp"
#include "gensug/model/context.hpp"
#include "gensug/model/sft.hpp"
#include "gensug/model/vocab.hpp"
#include "gensug/pref/dpo.hpp"
#include "gensug/util/hash.hpp"
#include "util/json_io.hpp"

namespace gensug::pipeline {

namespace fs = std::filesystem;
using detail::json;

std::string_view stage_name(Stage stage) {
  switch (stage) {
    case Stage::kGenCorpus: return "gen-corpus";
    case Stage::kTrainAlign: return "train-align";
    case Stage::kTrainRqvae: return "train-rqvae";
    case Stage::kBuildIndex: return "build-index";
    case Stage::kTrainSft: return "train-sft";
    case Stage::kTrainDpo: return "train-dpo";
    case Stage::kEval: return "eval";
  }
  return "unknown";
}

const std::vector<Stage>& all_stages() {
  static const std::vector<Stage> stages = {Stage::kGenCorpus, Stage::kTrainAlign,
                                            Stage::kTrainRqvae, Stage::kBuildIndex,
                                            Stage::kTrainSft,   Stage::kTrainDpo,
                                            Stage::kEval};
  return stages;
}

MissingArtifact::MissingArtifact(Stage stage, const std::string& reason)
    : std::runtime_error("run '" + std::string(stage_name(stage)) + "' first: " + reason),
      stage_(stage) {}

namespace {

std::vector<std::string> stage_sections(Stage stage) {
  switch (stage) {
    case Stage::kGenCorpus: return {"seed", "corpus"};
    case Stage::kTrainAlign: return {"align"};
    case Stage::kTrainRqvae: return {"rqvae"};
    case Stage::kBuildIndex: return {};
    case Stage::kTrainSft: return {"context", "generator"};
    case Stage::kTrainDpo: return {"dpo"};
    case Stage::kEval: return {"eval"};
  }
  return {};
}

}  // namespace

std::string stage_hash(const RunConfig& config, Stage stage) {
  std::string chain;
  for (Stage s : all_stages()) {
    std::string material = chain + '|' + std::string(stage_name(s));
    for (const auto& section : stage_sections(s)) material += '|' + section_json(config, section);
    chain = hash_hex(material);
    if (s == stage) break;
  }
  return chain;
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view purpose) {
  return fnv1a64(std::to_string(seed) + ':' + std::string(purpose));
}

std::string Paths::manifest(Stage stage) const {
  return file(std::string(stage_name(stage)) + ".manifest.json");
}

namespace {

void write_manifest(const RunConfig& config, Stage stage, const std::vector<std::string>& artifacts) {
  const Paths paths(config.work_dir);
  detail::write_json_file(paths.manifest(stage), {{"stage", stage_name(stage)},
                                                  {"hash", stage_hash(config, stage)},
                                                  {"artifacts", artifacts}});
}

void prepare(const RunConfig& config, Stage stage, std::ostream& log) {
  require_upstream(config, stage);
  fs::create_directories(config.work_dir);
  fs::remove(Paths(config.work_dir).manifest(stage));
  log << "[" << stage_name(stage) << "] hash " << stage_hash(config, stage) << '\n';
}

}  // namespace

void require_upstream(const RunConfig& config, Stage stage) {
  const Paths paths(config.work_dir);
  for (Stage s : all_stages()) {
    if (s == stage) return;
    const auto path = paths.manifest(s);
    if (!fs::exists(path)) throw MissingArtifact(s, "no " + path);
    std::string recorded;
    try {
      recorded = detail::read_json_file(path).at("hash").get<std::string>();
    } catch (const std::exception& e) {
      throw MissingArtifact(s, "unreadable manifest " + path);
    }
    const auto expected = stage_hash(config, s);
    if (recorded != expected) {
      throw MissingArtifact(s, "artifacts in " + config.work_dir + " were built with hash " +
                                   recorded + ", config expects " + expected);
    }
  }
}

CorpusData load_corpus(const Paths& paths) {
  CorpusData data;
  data.catalog = corpus::read_catalog(paths.file("catalog.jsonl"));
  data.records = corpus::chronological(corpus::read_records(paths.file("interactions.jsonl")));
  for (auto& [user, profile] : corpus::read_profiles(paths.file("profiles.jsonl"))) {
    data.profiles[user] = profile;
  }
  data.cutoff_ts = detail::read_json_file(paths.file("split.json")).at("cutoff_ts").get<std::int64_t>();
  for (const auto& r : data.records) (r.ts < data.cutoff_ts ? data.train : data.test).push_back(r);
  return data;
}

CooccurMap load_cooccur(const std::string& path) {
  return detail::read_json_file(path).at("prefix2query").get<CooccurMap>();
}

RelatedQueries::RelatedQueries(const align::TextEncoder& encoder, const rqvae::RqvaeModel& rqvae,
                               const rqvae::QueryIndex& index, const CooccurMap& cooccur,
                               double augment_weight, double lambda_div, std::size_t m)
    : encoder_(encoder),
      rqvae_(rqvae),
      index_(index),
      cooccur_(cooccur),
      augment_weight_(augment_weight),
      lambda_div_(lambda_div),
      m_(m) {}

std::vector<std::string> RelatedQueries::operator()(const std::string& prefix) const {
  if (m_ == 0 || index_.empty()) return {};
  const auto e_p = encoder_.encode(prefix, align::EmbeddingSource::kPrefix);
  std::vector<align::AlignedEmbedding> co;
  if (auto it = cooccur_.find(prefix); it != cooccur_.end()) {
    for (const auto& q : it->second) co.push_back(encoder_.encode(q));
  }
  const auto e_star = align::augment_prefix(e_p, co, augment_weight_);
  return rqvae::related_query_search(index_, rqvae_.assign(e_star.vector), e_star.vector, m_,
                                     lambda_div_);
}

namespace {

// Everything a generator stage needs to turn a (user, prefix) into tokens.
struct ContextKit {
  CorpusData data;
  align::TextEncoder encoder;
  rqvae::RqvaeModel rqvae;
  rqvae::QueryIndex index;
  CooccurMap cooccur;
  std::unique_ptr<RelatedQueries> related;
  std::map<std::string, std::vector<std::string>> related_cache;

  explicit ContextKit(const RunConfig& config) : data(load_corpus(Paths(config.work_dir))) {
    const Paths paths(config.work_dir);
    encoder = align::TextEncoder::load(paths.file("encoder.json"));
    rqvae = rqvae::RqvaeModel::load(paths.file("rqvae.json"));
    index = rqvae::QueryIndex::load(paths.file("index.jsonl"));
    cooccur = load_cooccur(paths.file("cooccur.json"));
    related = std::make_unique<RelatedQueries>(encoder, rqvae, index, cooccur,
                                               config.align.augment_weight,
                                               config.context.lambda_div,
                                               config.context.assembly.max_related);
  }

  const std::vector<std::string>& related_for(const std::string& prefix) {
    auto it = related_cache.find(prefix);
    if (it == related_cache.end()) it = related_cache.emplace(prefix, (*related)(prefix)).first;
    return it->second;
  }

  std::string profile_of(const std::string& user) const {
    auto it = data.profiles.find(user);
    return it == data.profiles.end() ? std::string() : it->second;
  }

  void complete(UserContext& ctx, bool with_related) {
    ctx.related = with_related ? related_for(ctx.prefix) : std::vector<std::string>{};
    ctx.profile = profile_of(ctx.user_id);
  }
};

std::vector<int> sequence_of(const model::Vocab& vocab, const std::string& query) {
  return model::decoder_target(vocab.encode(query));
}

json curve_json(const std::vector<double>& curve) { return json(curve); }

}  // namespace

void gen_corpus(const RunConfig& config, std::ostream& log) {
  prepare(config, Stage::kGenCorpus, log);
  const Paths paths(config.work_dir);
  const auto catalog =
      corpus::generate_catalog(derive_seed(config.seed, "catalog"), config.corpus.catalog);
  const auto sim =
      corpus::simulate_logs(catalog, config.corpus.sim, derive_seed(config.seed, "simulate"));
  const auto records = corpus::chronological(sim.records);

  std::vector<std::int64_t> views;
  for (const auto& r : records) {
    if (views.empty() || views.back() != r.ts) views.push_back(r.ts);
  }
  std::sort(views.begin(), views.end());
  views.erase(std::unique(views.begin(), views.end()), views.end());
  const auto train_views = static_cast<std::size_t>(
      static_cast<double>(views.size()) * (1.0 - config.corpus.test_fraction));
  const std::int64_t cutoff = train_views < views.size() ? views[train_views] : views.back() + 1;

  corpus::write_catalog(paths.file("catalog.jsonl"), catalog);
  corpus::write_records(paths.file("interactions.jsonl"), records);
  corpus::write_profiles(paths.file("profiles.jsonl"), sim.users);
  detail::write_json_file(paths.file("split.json"),
                          {{"cutoff_ts", cutoff}, {"hash", stage_hash(config, Stage::kGenCorpus)}});
  log << "  " << catalog.entries.size() << " catalog queries, " << records.size()
      << " interactions over " << views.size() << " page views, " << views.size() - train_views
      << " held out\n";
  write_manifest(config, Stage::kGenCorpus,
                 {"catalog.jsonl", "interactions.jsonl", "profiles.jsonl", "split.json"});
}

void train_align(const RunConfig& config, std::ostream& log) {
  prepare(config, Stage::kTrainAlign, log);
  const Paths paths(config.work_dir);
  const auto data = load_corpus(paths);
  std::set<std::string> text_set;
  for (const auto& e : data.catalog.entries) text_set.insert(e.query);
  for (const auto& r : data.train) text_set.insert(r.prefix);
  const std::vector<std::string> texts(text_set.begin(), text_set.end());

  align::TextEncoder encoder(texts, config.align.encoder, derive_seed(config.seed, "encoder"));
  const auto mined = align::mine_pairs(data.train, encoder, config.align.mining);
  const auto pairs = mined.all();
  if (pairs.size() < config.align.train.batch) {
    throw std::runtime_error("train-align: mined " + std::to_string(pairs.size()) +
                             " pairs, fewer than one batch of " +
                             std::to_string(config.align.train.batch) +
                             "; lower align.min_cooccur or align.min_sim");
  }
  auto train_cfg = config.align.train;
  train_cfg.seed = derive_seed(config.seed, "align");
  const auto curve = align::train_alignment(encoder, pairs, train_cfg);

  CooccurMap cooccur;
  for (const auto& p : mined.prefix2query) cooccur[p.trigger].push_back(p.target);
  const auto hash = stage_hash(config, Stage::kTrainAlign);
  encoder.save(paths.file("encoder.json"), hash);
  detail::write_json_file(paths.file("cooccur.json"), {{"hash", hash}, {"prefix2query", cooccur}});
  detail::write_json_file(paths.file("align_report.json"),
                          {{"hash", hash},
                           {"prefix2query_pairs", mined.prefix2query.size()},
                           {"query2query_pairs", mined.query2query.size()},
                           {"loss_curve", curve_json(curve)}});
  log << "  " << mined.prefix2query.size() << " prefix2query and " << mined.query2query.size()
      << " query2query pairs; loss " << curve.front() << " -> " << curve.back() << '\n';
  write_manifest(config, Stage::kTrainAlign, {"encoder.json", "cooccur.json", "align_report.json"});
}

void train_rqvae(const RunConfig& config, std::ostream& log) {
  prepare(config, Stage::kTrainRqvae, log);
  const Paths paths(config.work_dir);
  const auto data = load_corpus(paths);
  const auto encoder = align::TextEncoder::load(paths.file("encoder.json"));
  std::vector<std::vector<double>> embeddings;
  for (const auto& e : data.catalog.entries) embeddings.push_back(encoder.encode(e.query).vector);

  rqvae::RqvaeModel model(config.rqvae.model, derive_seed(config.seed, "rqvae-init"));
  auto train_cfg = config.rqvae.train;
  train_cfg.seed = derive_seed(config.seed, "rqvae");
  const auto report = rqvae::train_rqvae(model, embeddings, train_cfg);

  const auto hash = stage_hash(config, Stage::kTrainRqvae);
  model.save(paths.file("rqvae.json"), hash);
  detail::write_json_file(paths.file("rqvae_report.json"),
                          {{"hash", hash},
                           {"initial_recon", report.initial_recon},
                           {"final_recon", report.final_recon},
                           {"utilization", report.utilization},
                           {"mean_utilization", report.mean_utilization()},
                           {"reseeded", report.reseeded},
                           {"total_curve", curve_json(report.total_curve)},
                           {"recon_curve", curve_json(report.recon_curve)}});
  log << "  recon " << report.initial_recon << " -> " << report.final_recon
      << ", mean codebook utilization " << report.mean_utilization() << '\n';
  write_manifest(config, Stage::kTrainRqvae, {"rqvae.json", "rqvae_report.json"});
}

void build_index(const RunConfig& config, std::ostream& log) {
  prepare(config, Stage::kBuildIndex, log);
  const Paths paths(config.work_dir);
  const auto data = load_corpus(paths);
  const auto encoder = align::TextEncoder::load(paths.file("encoder.json"));
  const auto model = rqvae::RqvaeModel::load(paths.file("rqvae.json"));
  std::map<std::string, std::size_t> positives;
  for (const auto& r : data.train) {
    if (corpus::is_positive(r.level)) ++positives[r.query];
  }
  std::vector<rqvae::IndexEntry> entries;
  for (const auto& [query, count] : positives) {
    if (count < config.rqvae.min_positive) continue;
    auto emb = encoder.encode(query).vector;
    auto id = model.assign(emb);
    entries.push_back({query, std::move(emb), std::move(id)});
  }
  const rqvae::QueryIndex index(std::move(entries), config.rqvae.model.levels);
  index.save(paths.file("index.jsonl"), stage_hash(config, Stage::kBuildIndex));
  log << "  indexed " << index.size() << " queries\n";
  write_manifest(config, Stage::kBuildIndex, {"index.jsonl"});
}

void train_sft(const RunConfig& config, std::ostream& log) {
  prepare(config, Stage::kTrainSft, log);
  const Paths paths(config.work_dir);
  ContextKit kit(config);
  const auto hash = stage_hash(config, Stage::kTrainSft);

  std::set<std::string> text_set;
  for (const auto& e : kit.data.catalog.entries) text_set.insert(e.query);
  for (const auto& [user, profile] : kit.data.profiles) text_set.insert(profile);
  const std::vector<std::string> texts(text_set.begin(), text_set.end());
  const auto vocab = model::Vocab::build(texts, config.context.word_tokens);
  vocab.save(paths.file("tokenizer.json"), hash);

  const auto dataset = corpus::build_sft_dataset(kit.data.train, config.corpus.history_len);
  if (dataset.empty()) throw std::runtime_error("train-sft: no positive interactions to train on");
  std::vector<model::SeqExample> full, bare;
  for (const auto& ex : dataset) {
    auto ctx = ex.context;
    const auto target = vocab.encode(ex.target);
    if (target.size() + 1 > config.generator.model.max_dec_len) {
      throw std::runtime_error("train-sft: query '" + ex.target + "' exceeds generator.max_dec_len");
    }
    kit.complete(ctx, true);
    full.push_back({model::assemble_input(ctx, vocab, config.context.assembly), target});
    kit.complete(ctx, false);
    bare.push_back({model::assemble_input(ctx, vocab, config.context.assembly), target});
  }

  auto sft_cfg = config.generator.sft;
  sft_cfg.seed = derive_seed(config.seed, "sft");
  const auto init_seed = derive_seed(config.seed, "generator-init");
  json report = {{"hash", hash}, {"examples", full.size()}, {"vocab_size", vocab.size()}};
  for (const auto& [name, data] : {std::pair{"sft", &full}, std::pair{"sft_no_related", &bare}}) {
    model::GenModel gen(config.generator.model, vocab.size(), init_seed);
    const std::string ckpt = paths.file(std::string(name) + ".ckpt.json");
    const auto result = model::train_sft(gen, *data, sft_cfg, [&](std::size_t epoch, const model::GenModel& m) {
      m.save(ckpt, hash);
      log << "  " << name << " epoch " << epoch + 1 << " done\n" << std::flush;
    });
    gen.save(paths.file(std::string(name) + ".json"), hash);
    fs::remove(ckpt);
    report[std::string(name) + "_loss_curve"] = curve_json(result.loss_curve);
    log << "  " << name << " loss " << result.loss_curve.front() << " -> "
        << result.loss_curve.back() << '\n';
  }
  detail::write_json_file(paths.file("sft_report.json"), report);
  write_manifest(config, Stage::kTrainSft,
                 {"tokenizer.json", "sft.json", "sft_no_related.json", "sft_report.json"});
}

namespace {

std::vector<pref::DpoGroup> to_dpo_groups(const std::vector<corpus::PreferenceGroup>& groups,
                                          ContextKit& kit, const model::Vocab& vocab,
                                          const RunConfig& config, bool with_related) {
  std::vector<pref::DpoGroup> out;
  for (const auto& g : groups) {
    auto ctx = g.context;
    kit.complete(ctx, with_related);
    pref::DpoGroup d;
    d.input = model::assemble_input(ctx, vocab, config.context.assembly);
    d.win = sequence_of(vocab, g.win.query);
    for (const auto& l : g.loses) d.loses.push_back(sequence_of(vocab, l.query));
    d.rw = g.rw;
    const auto too_long = [&](const std::vector<int>& s) {
      return s.size() > config.generator.model.max_dec_len;
    };
    if (too_long(d.win) || std::any_of(d.loses.begin(), d.loses.end(), too_long)) continue;
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace

void train_dpo(const RunConfig& config, std::ostream& log) {
  prepare(config, Stage::kTrainDpo, log);
  const Paths paths(config.work_dir);
  ContextKit kit(config);
  const auto vocab = model::Vocab::load(paths.file("tokenizer.json"));
  const auto hash = stage_hash(config, Stage::kTrainDpo);

  corpus::PairPolicy policy;
  policy.adjacent_level_pairs = config.dpo.adjacent_level_pairs;
  policy.rand_negatives = config.dpo.rand_negatives;
  policy.seed = derive_seed(config.seed, "rand-negatives");
  policy.catalog = &kit.data.catalog;
  policy.reward = config.dpo.reward;
  policy.history_len = config.corpus.history_len;
  policy.listwise = true;
  const auto list_groups = corpus::build_preference_groups(kit.data.train, policy);
  policy.listwise = false;
  const auto pair_groups = corpus::build_preference_groups(kit.data.train, policy);

  struct Run {
    const char* name;
    const char* reference;
    pref::DpoMode mode;
    const std::vector<corpus::PreferenceGroup>* groups;
    bool with_related;
  };
  const Run runs[] = {
      {"dpo_pair", "sft.json", pref::DpoMode::kPair, &pair_groups, true},
      {"dpo_list", "sft.json", pref::DpoMode::kList, &list_groups, true},
      {"dpo_list_no_related", "sft_no_related.json", pref::DpoMode::kList, &list_groups, false},
  };
  json report = {{"hash", hash}, {"list_groups", list_groups.size()}, {"pair_groups", pair_groups.size()}};
  for (const auto& run : runs) {
    const auto groups = to_dpo_groups(*run.groups, kit, vocab, config, run.with_related);
    if (groups.empty()) throw std::runtime_error("train-dpo: no preference groups");
    const auto reference = model::GenModel::load(paths.file(run.reference));
    auto policy_model = reference;
    policy_model.params() = reference.params().clone();
    auto train_cfg = config.dpo.train;
    train_cfg.mode = run.mode;
    train_cfg.seed = derive_seed(config.seed, run.name);
    const auto result = pref::train_dpo(policy_model, reference, groups, config.dpo.reward, train_cfg);
    policy_model.save(paths.file(std::string(run.name) + ".json"), hash);
    report[std::string(run.name)] = {{"groups", groups.size()},
                                     {"loss_curve", curve_json(result.loss_curve)},
                                     {"win_reward_curve", curve_json(result.win_reward_curve)}};
    log << "  " << run.name << ": " << groups.size() << " groups, loss "
        << (result.loss_curve.empty() ? 0.0 : result.loss_curve.front()) << " -> "
        << (result.loss_curve.empty() ? 0.0 : result.loss_curve.back()) << ", win reward "
        << result.win_reward_curve.front() << " -> " << result.win_reward_curve.back() << '\n'
        << std::flush;
  }
  detail::write_json_file(paths.file("dpo_report.json"), report);
  write_manifest(config, Stage::kTrainDpo,
                 {"dpo_pair.json", "dpo_list.json", "dpo_list_no_related.json", "dpo_report.json"});
}

eval::EvalReport run_eval(const RunConfig& config, std::ostream& log) {
  prepare(config, Stage::kEval, log);
  const Paths paths(config.work_dir);
  ContextKit kit(config);
  const auto vocab = model::Vocab::load(paths.file("tokenizer.json"));
  const auto& ev = config.eval;

  const corpus::HistoryIndex history(kit.data.records);
  std::map<std::string, std::size_t> prefix_counts;
  for (const auto& r : kit.data.train) ++prefix_counts[r.prefix];

  std::vector<eval::EvalCase> cases;
  std::map<std::tuple<std::int64_t, std::string, std::string>, std::size_t> by_view;
  for (const auto& r : kit.data.test) {
    const auto key = std::make_tuple(r.ts, r.user_id, r.prefix);
    auto [it, fresh] = by_view.try_emplace(key, cases.size());
    if (fresh) {
      eval::EvalCase c;
      c.context.user_id = r.user_id;
      c.context.prefix = r.prefix;
      c.context.history = history.before(r.user_id, r.ts, config.corpus.history_len);
      c.ts = r.ts;
      cases.push_back(std::move(c));
    }
    if (corpus::is_positive(r.level)) cases[it->second].relevant.insert(r.query);
  }
  std::erase_if(cases, [](const eval::EvalCase& c) { return c.relevant.empty(); });
  if (ev.max_cases > 0 && cases.size() > ev.max_cases) cases.resize(ev.max_cases);
  if (cases.empty()) throw std::runtime_error("eval: no held-out page view has a positive query");
  eval::slice_by_popularity(cases, prefix_counts, ev.slices);

  const auto mpc = corpus::mpc_build(kit.data.train);
  std::vector<std::pair<std::string, model::GenModel>> models;
  for (const auto& [name, file] :
       {std::pair{"sft", "sft.json"}, std::pair{"sft+pair", "dpo_pair.json"},
        std::pair{"sft+list", "dpo_list.json"}, std::pair{"sft+list-no-related", "dpo_list_no_related.json"}}) {
    models.emplace_back(name, model::GenModel::load(paths.file(file)));
  }
  std::vector<eval::System> systems;
  systems.push_back({"mpc", [&](const eval::EvalCase& c) { return corpus::mpc_suggest(mpc, c.context.prefix, ev.k); }});
  for (const auto& [name, gen] : models) {
    const bool with_related = name != "sft+list-no-related";
    const auto* model_ptr = &gen;
    systems.push_back({name, [&, with_related, model_ptr](const eval::EvalCase& c) {
                         auto ctx = c.context;
                         kit.complete(ctx, with_related);
                         const auto input = model::assemble_input(ctx, vocab, config.context.assembly);
                         std::vector<std::string> ranked;
                         for (auto& s : model::generate_suggestions(*model_ptr, vocab, input, ev.beam, ev.k)) {
                           ranked.push_back(std::move(s.query));
                         }
                         return ranked;
                       }});
  }
  auto report = eval::run_ablation(systems, cases, ev.k, config_hash(config), config.seed);
  eval::add_ordering_assertions(report, {}, ev.min_gain, ev.min_tail_gain);
  std::ofstream(paths.file("eval_report.json"), std::ios::trunc) << report.to_json() << '\n';
  const auto table = report.table();
  std::ofstream(paths.file("eval_report.txt"), std::ios::trunc) << table;
  log << table;
  write_manifest(config, Stage::kEval, {"eval_report.json", "eval_report.txt"});
  return report;
}

void run_stage(Stage stage, const RunConfig& config, std::ostream& log) {
  switch (stage) {
    case Stage::kGenCorpus: return gen_corpus(config, log);
    case Stage::kTrainAlign: return train_align(config, log);
    case Stage::kTrainRqvae: return train_rqvae(config, log);
    case Stage::kBuildIndex: return build_index(config, log);
    case Stage::kTrainSft: return train_sft(config, log);
    case Stage::kTrainDpo: return train_dpo(config, log);
    case Stage::kEval: run_eval(config, log); return;
  }
}

}  // namespace gensug::pipeline
