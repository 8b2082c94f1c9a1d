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

#include "gensug/align/encoder.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include "gensug/ndgrad/graph.hpp"
#include "gensug/ndgrad/ops.hpp"
#include "util/json_io.hpp"

namespace gensug::align {

namespace {
constexpr const char* kUnk = "<unk>";
}  // namespace

double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("cosine: dimension mismatch");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / std::sqrt(na * nb);
}

TextEncoder::TextEncoder(std::span<const std::string> texts, const EncoderConfig& config,
                         std::uint64_t seed)
    : config_(config) {
  std::set<std::string> vocab;
  for (const auto& t : texts) {
    for (std::size_t i = 0; i < t.size(); ++i) {
      vocab.insert(t.substr(i, 1));
      if (i + 1 < t.size()) vocab.insert(t.substr(i, 2));
    }
  }
  tokens_.push_back(kUnk);
  tokens_.insert(tokens_.end(), vocab.begin(), vocab.end());
  rebuild_lookup();
  init_params(seed);
}

void TextEncoder::rebuild_lookup() {
  lookup_.clear();
  for (std::size_t i = 0; i < tokens_.size(); ++i) lookup_.emplace(tokens_[i], static_cast<int>(i));
}

void TextEncoder::init_params(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  params_ = nd::ParamSet{};
  params_.add("tok_emb", nd::normal({tokens_.size(), config_.d_emb}, 1.0, rng));
  params_.add("w1", nd::xavier(config_.d_emb, config_.d_hidden, rng));
  params_.add("b1", nd::Tensor::zeros({config_.d_hidden}));
  params_.add("w2", nd::xavier(config_.d_hidden, config_.d_out, rng));
  params_.add("b2", nd::Tensor::zeros({config_.d_out}));
}

std::vector<int> TextEncoder::tokenize(const std::string& text) const {
  std::vector<int> ids;
  for (std::size_t i = 0; i < text.size(); ++i) {
    auto it = lookup_.find(text.substr(i, 1));
    ids.push_back(it == lookup_.end() ? 0 : it->second);
    if (i + 1 < text.size()) {
      auto jt = lookup_.find(text.substr(i, 2));
      ids.push_back(jt == lookup_.end() ? 0 : jt->second);
    }
  }
  if (ids.empty()) ids.push_back(0);
  return ids;
}

nd::Tensor TextEncoder::forward(std::span<const std::string> texts) const {
  if (texts.empty()) throw std::invalid_argument("TextEncoder::forward: empty batch");
  const auto& table = params_.get("tok_emb");
  std::vector<nd::Tensor> pooled;
  pooled.reserve(texts.size());
  for (const auto& text : texts) {
    const auto ids = tokenize(text);
    const nd::Tensor avg = nd::Tensor::full({1, ids.size()}, 1.0 / static_cast<double>(ids.size()));
    pooled.push_back(nd::matmul(avg, nd::embedding(table, ids)));
  }
  nd::Tensor x = nd::concat_rows(pooled);
  nd::Tensor h = nd::tanh(nd::add_bias(nd::matmul(x, params_.get("w1")), params_.get("b1")));
  nd::Tensor y = nd::add_bias(nd::matmul(h, params_.get("w2")), params_.get("b2"));
  return nd::l2_normalize(y);
}

AlignedEmbedding TextEncoder::encode(const std::string& text, EmbeddingSource source) const {
  nd::NoGradGuard no_grad;
  const std::string batch[1] = {text};
  const nd::Tensor y = forward(batch);
  return {y.values(), source};
}

void TextEncoder::save(const std::string& path, const std::string& config_hash) const {
  detail::json j;
  j["format"] = "gensug.text_encoder";
  j["version"] = 1;
  j["config_hash"] = config_hash;
  j["config"] = {{"d_emb", config_.d_emb}, {"d_hidden", config_.d_hidden},
                 {"d_out", config_.d_out}, {"tau", config_.tau}};
  j["tokens"] = tokens_;
  j["params"] = detail::params_to_json(params_);
  detail::write_json_file(path, j);
}

TextEncoder TextEncoder::load(const std::string& path, std::string* config_hash) {
  const auto j = detail::read_json_file(path);
  if (j.value("format", "") != "gensug.text_encoder" || j.value("version", 0) != 1) {
    throw std::runtime_error(path + ": not a version-1 text encoder checkpoint");
  }
  TextEncoder enc;
  const auto& c = j.at("config");
  enc.config_ = {c.at("d_emb").get<std::size_t>(), c.at("d_hidden").get<std::size_t>(),
                 c.at("d_out").get<std::size_t>(), c.at("tau").get<double>()};
  enc.tokens_ = j.at("tokens").get<std::vector<std::string>>();
  enc.rebuild_lookup();
  enc.init_params(0);
  detail::params_from_json(j.at("params"), enc.params_);
  if (config_hash) *config_hash = j.at("config_hash").get<std::string>();
  return enc;
}

}  // namespace gensug::align
