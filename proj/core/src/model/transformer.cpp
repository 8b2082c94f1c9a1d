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

#include "gensug/model/transformer.hpp"

#include <cmath>
#include <stdexcept>

#include "gensug/ndgrad/ops.hpp"
#include "util/json_io.hpp"

namespace gensug::model {

namespace {

constexpr double kMasked = -1e9;

std::string key(const std::string& block, std::size_t layer, const std::string& name) {
  return block + std::to_string(layer) + "." + name;
}

nd::Tensor linear(const nd::ParamSet& p, const std::string& prefix, const nd::Tensor& x) {
  return nd::add_bias(nd::matmul(x, p.get(prefix + "_w")), p.get(prefix + "_b"));
}

nd::Tensor norm(const nd::ParamSet& p, const std::string& prefix, const nd::Tensor& x) {
  return nd::layer_norm(x, p.get(prefix + "_g"), p.get(prefix + "_b"));
}

nd::Tensor causal_mask(std::size_t n) {
  auto m = nd::Tensor::zeros({n, n});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) m.data()[i * n + j] = kMasked;
  return m;
}

// Multi-head attention over already projected q [nq,d], k and v [nk,d].
nd::Tensor attend(const nd::Tensor& q, const nd::Tensor& k, const nd::Tensor& v,
                  std::size_t heads, const nd::Tensor* mask) {
  const std::size_t d = q.cols(), dh = d / heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
  std::vector<nd::Tensor> outs;
  for (std::size_t h = 0; h < heads; ++h) {
    const auto qh = nd::slice_cols(q, h * dh, dh);
    const auto kh = nd::slice_cols(k, h * dh, dh);
    const auto vh = nd::slice_cols(v, h * dh, dh);
    auto scores = nd::scale(nd::matmul_nt(qh, kh), scale);
    if (mask) scores = nd::add(scores, *mask);
    outs.push_back(nd::matmul(nd::softmax(scores), vh));
  }
  return heads == 1 ? outs[0] : nd::concat_cols(outs);
}

}  // namespace

std::vector<double> positional_encoding(std::size_t pos, std::size_t d) {
  std::vector<double> row(d);
  for (std::size_t i = 0; i < d; ++i) {
    const double rate =
        std::pow(10000.0, -static_cast<double>(i - i % 2) / static_cast<double>(d));
    row[i] = i % 2 == 0 ? std::sin(static_cast<double>(pos) * rate)
                        : std::cos(static_cast<double>(pos) * rate);
  }
  return row;
}

GenModel::GenModel(const GenConfig& config, std::size_t vocab_size, std::uint64_t seed)
    : config_(config), vocab_size_(vocab_size) {
  if (config.n_heads == 0 || config.d_model % config.n_heads != 0) {
    throw std::invalid_argument("GenModel: d_model must be divisible by n_heads");
  }
  if (vocab_size == 0) throw std::invalid_argument("GenModel: empty vocabulary");
  std::mt19937_64 rng(seed);
  const std::size_t d = config.d_model;
  auto add_linear = [&](const std::string& name, std::size_t in, std::size_t out) {
    params_.add(name + "_w", nd::xavier(in, out, rng));
    params_.add(name + "_b", nd::Tensor::zeros({out}));
  };
  auto add_norm = [&](const std::string& name) {
    params_.add(name + "_g", nd::Tensor::full({d}, 1.0));
    params_.add(name + "_b", nd::Tensor::zeros({d}));
  };
  params_.add("tok_emb", nd::normal({vocab_size, d}, 1.0 / std::sqrt(static_cast<double>(d)), rng));
  for (std::size_t l = 0; l < config.n_layers; ++l) {
    add_norm(key("enc", l, "ln1"));
    for (const char* n : {"q", "k", "v", "o"}) add_linear(key("enc", l, n), d, d);
    add_norm(key("enc", l, "ln2"));
    add_linear(key("enc", l, "ff1"), d, config.d_ff);
    add_linear(key("enc", l, "ff2"), config.d_ff, d);
  }
  add_norm("enc_final");
  for (std::size_t l = 0; l < config.n_layers; ++l) {
    add_norm(key("dec", l, "ln1"));
    for (const char* n : {"q", "k", "v", "o"}) add_linear(key("dec", l, n), d, d);
    add_norm(key("dec", l, "ln2"));
    for (const char* n : {"xq", "xk", "xv", "xo"}) add_linear(key("dec", l, n), d, d);
    add_norm(key("dec", l, "ln3"));
    add_linear(key("dec", l, "ff1"), d, config.d_ff);
    add_linear(key("dec", l, "ff2"), config.d_ff, d);
  }
  add_norm("dec_final");
}

nd::Tensor GenModel::embed(std::span<const int> ids) const {
  const std::size_t d = config_.d_model;
  std::vector<double> pos;
  pos.reserve(ids.size() * d);
  for (std::size_t t = 0; t < ids.size(); ++t) {
    const auto row = positional_encoding(t, d);
    pos.insert(pos.end(), row.begin(), row.end());
  }
  for (int id : ids) {
    if (id < 0 || static_cast<std::size_t>(id) >= vocab_size_) {
      throw std::out_of_range("GenModel: token id " + std::to_string(id) + " outside vocabulary");
    }
  }
  const auto tokens = nd::scale(nd::embedding(params_.get("tok_emb"), ids),
                                std::sqrt(static_cast<double>(d)));
  return nd::add(tokens, nd::Tensor::from({ids.size(), d}, std::move(pos)));
}

Memory GenModel::encode(std::span<const int> input_ids) const {
  if (input_ids.empty()) throw std::invalid_argument("GenModel::encode: empty input");
  if (input_ids.size() > config_.max_enc_len) {
    throw std::invalid_argument("GenModel::encode: input of " + std::to_string(input_ids.size()) +
                                " tokens exceeds max_enc_len");
  }
  const auto& p = params_;
  nd::Tensor h = embed(input_ids);
  for (std::size_t l = 0; l < config_.n_layers; ++l) {
    const auto x = norm(p, key("enc", l, "ln1"), h);
    const auto a = attend(linear(p, key("enc", l, "q"), x), linear(p, key("enc", l, "k"), x),
                          linear(p, key("enc", l, "v"), x), config_.n_heads, nullptr);
    h = nd::add(h, linear(p, key("enc", l, "o"), a));
    const auto y = norm(p, key("enc", l, "ln2"), h);
    h = nd::add(h, linear(p, key("enc", l, "ff2"), nd::relu(linear(p, key("enc", l, "ff1"), y))));
  }
  Memory mem;
  mem.hidden = norm(p, "enc_final", h);
  for (std::size_t l = 0; l < config_.n_layers; ++l) {
    mem.keys.push_back(linear(p, key("dec", l, "xk"), mem.hidden));
    mem.values.push_back(linear(p, key("dec", l, "xv"), mem.hidden));
  }
  return mem;
}

nd::Tensor GenModel::decode_hidden(const Memory& memory, std::span<const int> dec_in) const {
  if (dec_in.empty()) throw std::invalid_argument("GenModel::decode: empty decoder input");
  if (dec_in.size() > config_.max_dec_len + 1) {
    throw std::invalid_argument("GenModel::decode: decoder input exceeds max_dec_len");
  }
  const auto& p = params_;
  const auto mask = causal_mask(dec_in.size());
  nd::Tensor h = embed(dec_in);
  for (std::size_t l = 0; l < config_.n_layers; ++l) {
    const auto x = norm(p, key("dec", l, "ln1"), h);
    const auto a = attend(linear(p, key("dec", l, "q"), x), linear(p, key("dec", l, "k"), x),
                          linear(p, key("dec", l, "v"), x), config_.n_heads, &mask);
    h = nd::add(h, linear(p, key("dec", l, "o"), a));
    const auto y = norm(p, key("dec", l, "ln2"), h);
    const auto c = attend(linear(p, key("dec", l, "xq"), y), memory.keys[l], memory.values[l],
                          config_.n_heads, nullptr);
    h = nd::add(h, linear(p, key("dec", l, "xo"), c));
    const auto z = norm(p, key("dec", l, "ln3"), h);
    h = nd::add(h, linear(p, key("dec", l, "ff2"), nd::relu(linear(p, key("dec", l, "ff1"), z))));
  }
  return norm(p, "dec_final", h);
}

nd::Tensor GenModel::decode(const Memory& memory, std::span<const int> dec_in) const {
  return nd::matmul_nt(decode_hidden(memory, dec_in), params_.get("tok_emb"));
}

std::vector<double> GenModel::next_log_probs(const Memory& memory,
                                             std::span<const int> dec_in) const {
  nd::NoGradGuard no_grad;
  const auto h = decode_hidden(memory, dec_in);
  const auto last = nd::slice_rows(h, h.rows() - 1, 1);
  return nd::log_softmax(nd::matmul_nt(last, params_.get("tok_emb"))).values();
}

void GenModel::save(const std::string& path, const std::string& config_hash) const {
  detail::json j;
  j["format"] = "gensug.generator";
  j["version"] = 1;
  j["config_hash"] = config_hash;
  j["vocab_size"] = vocab_size_;
  j["config"] = {{"d_model", config_.d_model},         {"n_layers", config_.n_layers},
                 {"n_heads", config_.n_heads},         {"d_ff", config_.d_ff},
                 {"max_enc_len", config_.max_enc_len}, {"max_dec_len", config_.max_dec_len}};
  j["params"] = detail::params_to_json(params_);
  detail::write_json_file(path, j);
}

GenModel GenModel::load(const std::string& path, std::string* config_hash) {
  const auto j = detail::read_json_file(path);
  if (j.value("format", "") != "gensug.generator" || j.value("version", 0) != 1) {
    throw std::runtime_error(path + ": not a version-1 generator checkpoint");
  }
  const auto& c = j.at("config");
  GenConfig cfg;
  cfg.d_model = c.at("d_model");
  cfg.n_layers = c.at("n_layers");
  cfg.n_heads = c.at("n_heads");
  cfg.d_ff = c.at("d_ff");
  cfg.max_enc_len = c.at("max_enc_len");
  cfg.max_dec_len = c.at("max_dec_len");
  GenModel model(cfg, j.at("vocab_size").get<std::size_t>(), 0);
  detail::params_from_json(j.at("params"), model.params_);
  if (config_hash) *config_hash = j.at("config_hash").get<std::string>();
  return model;
}

}  // namespace gensug::model
