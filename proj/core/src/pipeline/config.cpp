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

#include "gensug/pipeline/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "gensug/util/hash.hpp"
#include "json.hpp"

namespace gensug::pipeline {

namespace {

using json = nlohmann::json;

// Reads keys of one JSON object into fields and reports keys it never read.
class Section {
 public:
  Section(const json& parent, const std::string& name) : name_(name) {
    if (!parent.contains(name)) return;
    obj_ = &parent.at(name);
    if (!obj_->is_object()) throw ConfigError("config: '" + name + "' must be an object");
  }
  explicit Section(const json& root) : name_("<root>"), obj_(&root) {}

  template <typename T>
  void read(const char* key, T& field) {
    known_.insert(key);
    if (!obj_ || !obj_->contains(key)) return;
    try {
      field = obj_->at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError("config: " + name_ + "." + key + ": " + e.what());
    }
  }
  void allow(const char* key) { known_.insert(key); }
  const json* object() const { return obj_; }

  void finish() const {
    if (!obj_) return;
    for (const auto& [key, _] : obj_->items()) {
      if (!known_.contains(key)) throw ConfigError("config: unknown key " + name_ + "." + key);
    }
  }

 private:
  std::string name_;
  const json* obj_ = nullptr;
  std::set<std::string> known_;
};

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError("config: " + message);
}

json to_json(const RunConfig& c) {
  const auto& s = c.corpus.sim;
  json j;
  j["seed"] = c.seed;
  j["work_dir"] = c.work_dir;
  j["corpus"] = {{"n_categories", c.corpus.catalog.n_categories},
                 {"n_queries", c.corpus.catalog.n_queries},
                 {"power_law_exponent", c.corpus.catalog.power_law_exponent},
                 {"n_users", s.n_users},
                 {"n_events", s.n_events},
                 {"affinity_prob", s.affinity_prob},
                 {"favorite_prob", s.favorite_prob},
                 {"repeat_prob", s.repeat_prob},
                 {"recent_window", s.recent_window},
                 {"panel_size", s.panel_size},
                 {"show_negatives", s.show_negatives},
                 {"not_show_negatives", s.not_show_negatives},
                 {"max_gap_seconds", s.max_gap_seconds},
                 {"level_table", s.levels.rows},
                 {"test_fraction", c.corpus.test_fraction},
                 {"history_len", c.corpus.history_len}};
  const auto& a = c.align;
  j["align"] = {{"d_emb", a.encoder.d_emb},
                {"d_hidden", a.encoder.d_hidden},
                {"d_out", a.encoder.d_out},
                {"tau", a.encoder.tau},
                {"min_cooccur", a.mining.min_cooccur},
                {"min_sim", a.mining.min_sim},
                {"session_gap_seconds", a.mining.session_gap_seconds},
                {"epochs", a.train.epochs},
                {"batch", a.train.batch},
                {"lr", a.train.lr},
                {"augment_weight", a.augment_weight}};
  const auto& r = c.rqvae;
  j["rqvae"] = {{"levels", r.model.levels},       {"codebook", r.model.codebook},
                {"blocks", r.model.blocks},       {"d_hidden", r.model.d_hidden},
                {"d_latent", r.model.d_latent},   {"beta", r.model.beta},
                {"epochs", r.train.epochs},       {"batch", r.train.batch},
                {"lr", r.train.lr},               {"kmeans_iters", r.train.kmeans_iters},
                {"min_positive", r.min_positive}};
  j["context"] = {{"max_related", c.context.assembly.max_related},
                  {"max_history", c.context.assembly.max_history},
                  {"max_len", c.context.assembly.max_len},
                  {"lambda_div", c.context.lambda_div},
                  {"word_tokens", c.context.word_tokens}};
  const auto& g = c.generator;
  j["generator"] = {{"d_model", g.model.d_model},     {"n_layers", g.model.n_layers},
                    {"n_heads", g.model.n_heads},     {"d_ff", g.model.d_ff},
                    {"max_dec_len", g.model.max_dec_len}, {"epochs", g.sft.epochs},
                    {"batch", g.sft.batch},           {"lr", g.sft.lr}};
  const auto& d = c.dpo;
  j["dpo"] = {{"lambda", d.reward.lambda},
              {"rw_max", d.reward.rw_max},
              {"delta", d.reward.delta},
              {"alpha", d.reward.alpha},
              {"beta_dpo", d.reward.beta_dpo},
              {"corrected_pair_hinge", d.reward.corrected_pair_hinge},
              {"epochs", d.train.epochs},
              {"batch", d.train.batch},
              {"lr", d.train.lr},
              {"rand_negatives", d.rand_negatives},
              {"adjacent_level_pairs", d.adjacent_level_pairs}};
  j["eval"] = {{"k", c.eval.k},
               {"beam", c.eval.beam},
               {"t_top", c.eval.slices.top},
               {"t_mid", c.eval.slices.mid},
               {"min_gain", c.eval.min_gain},
               {"min_tail_gain", c.eval.min_tail_gain},
               {"max_cases", c.eval.max_cases}};
  j["serve"] = {{"host", c.serve.host},
                {"port", c.serve.port},
                {"feedback_log", c.serve.feedback_log},
                {"max_k", c.serve.max_k}};
  return j;
}

void validate(const RunConfig& c) {
  require(c.corpus.catalog.n_categories >= 1, "corpus.n_categories must be >= 1");
  require(c.corpus.catalog.n_queries >= c.corpus.catalog.n_categories,
          "corpus.n_queries must be >= n_categories");
  require(c.corpus.sim.n_users >= 1 && c.corpus.sim.n_events >= 1,
          "corpus.n_users and corpus.n_events must be >= 1");
  for (double prob : {c.corpus.sim.affinity_prob, c.corpus.sim.favorite_prob,
                      c.corpus.sim.repeat_prob}) {
    require(prob >= 0.0 && prob <= 1.0,
            "corpus.affinity_prob, favorite_prob and repeat_prob must lie in [0, 1]");
  }
  require(c.corpus.sim.recent_window >= 1, "corpus.recent_window must be >= 1");
  require(c.corpus.test_fraction > 0.0 && c.corpus.test_fraction < 1.0,
          "corpus.test_fraction must lie in (0, 1)");
  require(c.align.encoder.tau > 0.0, "align.tau must be > 0");
  require(c.align.train.batch >= 2, "align.batch must be >= 2");
  require(c.align.augment_weight >= 0.0 && c.align.augment_weight <= 1.0,
          "align.augment_weight must lie in [0, 1]");
  require(c.rqvae.model.levels >= 1 && c.rqvae.model.codebook >= 1 && c.rqvae.model.blocks >= 1,
          "rqvae.levels, rqvae.codebook and rqvae.blocks must be >= 1");
  require(c.rqvae.model.beta >= 0.0, "rqvae.beta must be >= 0");
  require(c.context.lambda_div > 0.0 && c.context.lambda_div < 1.0,
          "context.lambda_div must lie in (0, 1)");
  require(c.generator.model.n_heads >= 1 && c.generator.model.d_model % c.generator.model.n_heads == 0,
          "generator.d_model must be divisible by generator.n_heads");
  require(c.generator.sft.batch >= 1 && c.dpo.train.batch >= 1, "batch sizes must be >= 1");
  require(c.eval.k >= 1 && c.eval.beam >= c.eval.k, "eval needs 1 <= k <= beam");
  require(c.eval.slices.top > c.eval.slices.mid && c.eval.slices.mid > 0,
          "eval needs t_top > t_mid > 0");
  require(c.serve.max_k >= 1, "serve.max_k must be >= 1");
  try {
    c.dpo.reward.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: dpo: ") + e.what());
  }
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: malformed JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config: top level must be an object");
  RunConfig c;
  Section top(root);
  top.read("seed", c.seed);
  top.read("work_dir", c.work_dir);
  for (const char* s : {"corpus", "align", "rqvae", "context", "generator", "dpo", "eval", "serve"}) {
    top.allow(s);
  }
  top.finish();

  Section corpus(root, "corpus");
  corpus.read("n_categories", c.corpus.catalog.n_categories);
  corpus.read("n_queries", c.corpus.catalog.n_queries);
  corpus.read("power_law_exponent", c.corpus.catalog.power_law_exponent);
  corpus.read("n_users", c.corpus.sim.n_users);
  corpus.read("n_events", c.corpus.sim.n_events);
  corpus.read("affinity_prob", c.corpus.sim.affinity_prob);
  corpus.read("favorite_prob", c.corpus.sim.favorite_prob);
  corpus.read("repeat_prob", c.corpus.sim.repeat_prob);
  corpus.read("recent_window", c.corpus.sim.recent_window);
  corpus.read("panel_size", c.corpus.sim.panel_size);
  corpus.read("show_negatives", c.corpus.sim.show_negatives);
  corpus.read("not_show_negatives", c.corpus.sim.not_show_negatives);
  corpus.read("max_gap_seconds", c.corpus.sim.max_gap_seconds);
  corpus.read("level_table", c.corpus.sim.levels.rows);
  corpus.read("test_fraction", c.corpus.test_fraction);
  corpus.read("history_len", c.corpus.history_len);
  corpus.finish();

  Section align(root, "align");
  align.read("d_emb", c.align.encoder.d_emb);
  align.read("d_hidden", c.align.encoder.d_hidden);
  align.read("d_out", c.align.encoder.d_out);
  align.read("tau", c.align.encoder.tau);
  align.read("min_cooccur", c.align.mining.min_cooccur);
  align.read("min_sim", c.align.mining.min_sim);
  align.read("session_gap_seconds", c.align.mining.session_gap_seconds);
  align.read("epochs", c.align.train.epochs);
  align.read("batch", c.align.train.batch);
  align.read("lr", c.align.train.lr);
  align.read("augment_weight", c.align.augment_weight);
  align.finish();

  Section rq(root, "rqvae");
  rq.read("levels", c.rqvae.model.levels);
  rq.read("codebook", c.rqvae.model.codebook);
  rq.read("blocks", c.rqvae.model.blocks);
  rq.read("d_hidden", c.rqvae.model.d_hidden);
  rq.read("d_latent", c.rqvae.model.d_latent);
  rq.read("beta", c.rqvae.model.beta);
  rq.read("epochs", c.rqvae.train.epochs);
  rq.read("batch", c.rqvae.train.batch);
  rq.read("lr", c.rqvae.train.lr);
  rq.read("kmeans_iters", c.rqvae.train.kmeans_iters);
  rq.read("min_positive", c.rqvae.min_positive);
  rq.finish();

  Section ctx(root, "context");
  ctx.read("max_related", c.context.assembly.max_related);
  ctx.read("max_history", c.context.assembly.max_history);
  ctx.read("max_len", c.context.assembly.max_len);
  ctx.read("lambda_div", c.context.lambda_div);
  ctx.read("word_tokens", c.context.word_tokens);
  ctx.finish();

  Section gen(root, "generator");
  gen.read("d_model", c.generator.model.d_model);
  gen.read("n_layers", c.generator.model.n_layers);
  gen.read("n_heads", c.generator.model.n_heads);
  gen.read("d_ff", c.generator.model.d_ff);
  gen.read("max_dec_len", c.generator.model.max_dec_len);
  gen.read("epochs", c.generator.sft.epochs);
  gen.read("batch", c.generator.sft.batch);
  gen.read("lr", c.generator.sft.lr);
  gen.finish();

  Section dpo(root, "dpo");
  dpo.read("lambda", c.dpo.reward.lambda);
  dpo.read("rw_max", c.dpo.reward.rw_max);
  dpo.read("delta", c.dpo.reward.delta);
  dpo.read("alpha", c.dpo.reward.alpha);
  dpo.read("beta_dpo", c.dpo.reward.beta_dpo);
  dpo.read("corrected_pair_hinge", c.dpo.reward.corrected_pair_hinge);
  dpo.read("epochs", c.dpo.train.epochs);
  dpo.read("batch", c.dpo.train.batch);
  dpo.read("lr", c.dpo.train.lr);
  dpo.read("rand_negatives", c.dpo.rand_negatives);
  dpo.read("adjacent_level_pairs", c.dpo.adjacent_level_pairs);
  dpo.finish();

  Section ev(root, "eval");
  ev.read("k", c.eval.k);
  ev.read("beam", c.eval.beam);
  ev.read("t_top", c.eval.slices.top);
  ev.read("t_mid", c.eval.slices.mid);
  ev.read("min_gain", c.eval.min_gain);
  ev.read("min_tail_gain", c.eval.min_tail_gain);
  ev.read("max_cases", c.eval.max_cases);
  ev.finish();

  Section serve(root, "serve");
  serve.read("host", c.serve.host);
  serve.read("port", c.serve.port);
  serve.read("feedback_log", c.serve.feedback_log);
  serve.read("max_k", c.serve.max_k);
  serve.finish();

  c.rqvae.model.d_in = c.align.encoder.d_out;
  c.generator.model.max_enc_len = c.context.assembly.max_len;
  validate(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string canonical_json(const RunConfig& config) { return to_json(config).dump(); }

std::string section_json(const RunConfig& config, std::string_view section) {
  const auto j = to_json(config);
  const std::string key(section);
  if (!j.contains(key)) throw std::invalid_argument("no config section '" + key + "'");
  return j.at(key).dump();
}

std::string config_hash(const RunConfig& config) {
  auto j = to_json(config);
  // Where artifacts live and how they are served do not change them.
  j.erase("work_dir");
  j.erase("serve");
  return hash_hex(j.dump());
}

}  // namespace gensug::pipeline
