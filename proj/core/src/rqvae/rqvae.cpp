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

#include "gensug/rqvae/rqvae.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

#include "gensug/ndgrad/adam.hpp"
#include "gensug/ndgrad/graph.hpp"
#include "gensug/ndgrad/ops.hpp"
#include "util/json_io.hpp"

namespace gensug::rqvae {

std::string SemanticID::str() const {
  std::string s;
  for (std::size_t i = 0; i < codes.size(); ++i) {
    if (i) s += '-';
    s += std::to_string(codes[i]);
  }
  return s;
}

QuantizeResult quantize_level(std::span<const double> residual, const nd::Tensor& table) {
  const std::size_t w = table.rows(), d = table.cols();
  if (residual.size() != d) {
    throw nd::ShapeError("quantize_level", {nd::Shape{residual.size()}, table.shape()});
  }
  const auto t = table.data();
  int best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < w; ++k) {
    double dist = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double diff = residual[j] - t[k * d + j];
      dist += diff * diff;
    }
    if (dist < best_dist) {
      best_dist = dist;
      best = static_cast<int>(k);
    }
  }
  const auto row = t.subspan(static_cast<std::size_t>(best) * d, d);
  return {best, std::vector<double>(row.begin(), row.end())};
}

RqvaeModel::RqvaeModel(const RqvaeConfig& config, std::uint64_t seed) : config_(config) {
  if (config.levels < 1 || config.codebook < 1 || config.blocks < 1) {
    throw std::invalid_argument("RqvaeModel: levels, codebook, and blocks must be >= 1");
  }
  std::mt19937_64 rng(seed);
  if (config.identity_autoencoder) {
    if (config.d_in != config.d_latent) {
      throw std::invalid_argument("identity autoencoder requires d_in == d_latent");
    }
  } else {
    auto dims = [&](bool enc) {
      std::vector<std::size_t> d{enc ? config.d_in : config.d_latent};
      for (std::size_t i = 1; i < config.blocks; ++i) d.push_back(config.d_hidden);
      d.push_back(enc ? config.d_latent : config.d_in);
      return d;
    };
    for (const bool enc : {true, false}) {
      const auto d = dims(enc);
      const std::string tag = enc ? "enc" : "dec";
      for (std::size_t i = 0; i + 1 < d.size(); ++i) {
        params_.add(tag + "_w" + std::to_string(i), nd::xavier(d[i], d[i + 1], rng));
        params_.add(tag + "_b" + std::to_string(i), nd::Tensor::zeros({d[i + 1]}));
      }
    }
  }
  for (std::size_t l = 0; l < config.levels; ++l) {
    params_.add("codebook_" + std::to_string(l),
                nd::normal({config.codebook, config.d_latent}, 0.1, rng));
  }
}

nd::Tensor& RqvaeModel::codebook(std::size_t level) {
  return params_.get("codebook_" + std::to_string(level));
}

const nd::Tensor& RqvaeModel::codebook(std::size_t level) const {
  return params_.get("codebook_" + std::to_string(level));
}

namespace {

nd::Tensor mlp(const nd::ParamSet& params, const std::string& tag, std::size_t blocks,
               nd::Tensor x) {
  for (std::size_t i = 0; i < blocks; ++i) {
    x = nd::add_bias(nd::matmul(x, params.get(tag + "_w" + std::to_string(i))),
                     params.get(tag + "_b" + std::to_string(i)));
    if (i + 1 < blocks) x = nd::tanh(x);
  }
  return x;
}

nd::Tensor rows_to_tensor(const std::vector<std::vector<double>>& rows,
                          std::span<const std::size_t> pick) {
  const std::size_t d = rows.at(pick[0]).size();
  std::vector<double> flat;
  flat.reserve(pick.size() * d);
  for (auto i : pick) flat.insert(flat.end(), rows[i].begin(), rows[i].end());
  return nd::Tensor::from({pick.size(), d}, std::move(flat));
}

}  // namespace

nd::Tensor RqvaeModel::encode(const nd::Tensor& x) const {
  if (config_.identity_autoencoder) return x;
  return mlp(params_, "enc", config_.blocks, x);
}

nd::Tensor RqvaeModel::decode(const nd::Tensor& z) const {
  if (config_.identity_autoencoder) return z;
  return mlp(params_, "dec", config_.blocks, z);
}

std::vector<double> RqvaeModel::encode_one(std::span<const double> embedding) const {
  nd::NoGradGuard no_grad;
  const nd::Tensor x = nd::Tensor::from({1, embedding.size()},
                                        std::vector<double>(embedding.begin(), embedding.end()));
  return encode(x).values();
}

SemanticID RqvaeModel::quantize_latent(std::span<const double> latent) const {
  std::vector<double> residual(latent.begin(), latent.end());
  SemanticID id;
  for (std::size_t l = 0; l < config_.levels; ++l) {
    const auto q = quantize_level(residual, codebook(l));
    id.codes.push_back(q.index);
    for (std::size_t j = 0; j < residual.size(); ++j) residual[j] -= q.codeword[j];
  }
  return id;
}

SemanticID RqvaeModel::assign(std::span<const double> embedding) const {
  return quantize_latent(encode_one(embedding));
}

SemanticID assign_semantic_id(const RqvaeModel& model, std::span<const double> embedding) {
  return model.assign(embedding);
}

RqvaeLoss rqvae_loss(const RqvaeModel& model, const nd::Tensor& batch,
                     const std::vector<SemanticID>* fixed_codes, const RqvaeDetached* frozen) {
  const auto& cfg = model.config();
  const std::size_t b = batch.rows();
  if (fixed_codes && fixed_codes->size() != b) {
    throw std::invalid_argument("rqvae_loss: one fixed code per batch row required");
  }
  const nd::Tensor z = model.encode(batch);
  if (frozen && (frozen->residual.size() != cfg.levels || frozen->code.size() != cfg.levels ||
                 frozen->st_offset.size() != z.numel())) {
    throw std::invalid_argument("rqvae_loss: frozen operands do not match the batch");
  }
  RqvaeLoss out;
  out.codes.resize(b);
  const double inv_b = 1.0 / static_cast<double>(b);
  // Captures the value of a stop-gradient operand, or substitutes the frozen one.
  auto stop = [&](const nd::Tensor& t, const std::vector<std::vector<double>>* pinned,
                  std::size_t l, std::vector<std::vector<double>>& record) {
    record.emplace_back(t.data().begin(), t.data().end());
    if (!pinned) return nd::detach(t);
    if ((*pinned)[l].size() != t.numel()) {
      throw std::invalid_argument("rqvae_loss: frozen operands do not match the batch");
    }
    return nd::Tensor::from(t.shape(), (*pinned)[l]);
  };

  nd::Tensor residual = z;
  nd::Tensor commit;
  std::vector<double> quantized(z.numel(), 0.0);
  for (std::size_t l = 0; l < cfg.levels; ++l) {
    std::vector<int> idx(b);
    const auto rv = residual.data();
    for (std::size_t r = 0; r < b; ++r) {
      if (fixed_codes) {
        idx[r] = (*fixed_codes)[r].codes.at(l);
      } else {
        idx[r] = quantize_level(rv.subspan(r * cfg.d_latent, cfg.d_latent), model.codebook(l)).index;
      }
      out.codes[r].codes.push_back(idx[r]);
    }
    const nd::Tensor code = nd::embedding(model.codebook(l), idx);
    const nd::Tensor residual_sg =
        stop(residual, frozen ? &frozen->residual : nullptr, l, out.detached.residual);
    const nd::Tensor code_sg = stop(code, frozen ? &frozen->code : nullptr, l, out.detached.code);
    const nd::Tensor codebook_term = nd::sum(nd::square(nd::sub(residual_sg, code)));
    const nd::Tensor encoder_term = nd::sum(nd::square(nd::sub(residual, code_sg)));
    const nd::Tensor level = nd::add(codebook_term, nd::scale(encoder_term, cfg.beta));
    commit = commit.defined() ? nd::add(commit, level) : level;
    for (std::size_t i = 0; i < quantized.size(); ++i) quantized[i] += code_sg.at(i);
    residual = nd::sub(residual, code_sg);
  }
  out.commit = nd::scale(commit, inv_b / static_cast<double>(cfg.levels));

  // Straight-through: forward value is the quantized latent, gradient flows to z.
  std::vector<double> shift(z.numel());
  for (std::size_t i = 0; i < shift.size(); ++i) shift[i] = quantized[i] - z.at(i);
  if (frozen) shift = frozen->st_offset;
  out.detached.st_offset = shift;
  const nd::Tensor zq = nd::add(z, nd::Tensor::from(z.shape(), std::move(shift)));
  const nd::Tensor recon_x = model.decode(zq);
  out.recon = nd::scale(nd::sum(nd::square(nd::sub(batch, recon_x))), inv_b);
  out.total = nd::add(out.recon, out.commit);
  return out;
}

double RqvaeTrainReport::mean_utilization() const {
  if (utilization.empty()) return 0.0;
  return std::accumulate(utilization.begin(), utilization.end(), 0.0) /
         static_cast<double>(utilization.size());
}

namespace {

// Lloyd's k-means with distinct seeded initial points. Empty clusters take
// the point farthest from its current centroid.
std::vector<std::vector<double>> kmeans(const std::vector<std::vector<double>>& points,
                                        std::size_t k, std::size_t iters, std::mt19937_64& rng) {
  const std::size_t n = points.size(), d = points[0].size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::vector<double>> centers;
  std::set<std::vector<double>> used;
  std::normal_distribution<double> jitter(0.0, 1e-4);
  for (std::size_t i = 0; i < n && centers.size() < k; ++i) {
    if (used.insert(points[order[i]]).second) centers.push_back(points[order[i]]);
  }
  while (centers.size() < k) {
    auto c = points[order[centers.size() % n]];
    for (auto& v : c) v += jitter(rng);
    centers.push_back(std::move(c));
  }
  auto dist2 = [d](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
    return s;
  };
  std::vector<std::size_t> assign(n);
  for (std::size_t it = 0; it < iters; ++it) {
    std::vector<double> best(n);
    for (std::size_t i = 0; i < n; ++i) {
      double bd = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        const double dd = dist2(points[i], centers[c]);
        if (dd < bd) {
          bd = dd;
          assign[i] = c;
        }
      }
      best[i] = bd;
    }
    std::vector<std::vector<double>> sums(k, std::vector<double>(d, 0.0));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      ++counts[assign[i]];
      for (std::size_t j = 0; j < d; ++j) sums[assign[i]][j] += points[i][j];
    }
    std::vector<bool> taken(n, false);
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        for (std::size_t j = 0; j < d; ++j) centers[c][j] = sums[c][j] / static_cast<double>(counts[c]);
        continue;
      }
      std::size_t far = 0;
      double fd = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (!taken[i] && best[i] > fd) {
          fd = best[i];
          far = i;
        }
      }
      taken[far] = true;
      centers[c] = points[far];
      for (auto& v : centers[c]) v += jitter(rng);
    }
  }
  return centers;
}

void set_row(nd::Tensor& table, std::size_t row, const std::vector<double>& v) {
  auto t = table.data();
  std::copy(v.begin(), v.end(), t.begin() + static_cast<std::ptrdiff_t>(row * v.size()));
}

// Latent residuals entering each level for every embedding.
std::vector<std::vector<std::vector<double>>> level_residuals(
    const RqvaeModel& model, const std::vector<std::vector<double>>& embeddings,
    std::vector<std::vector<std::size_t>>* usage) {
  const auto& cfg = model.config();
  std::vector<std::vector<std::vector<double>>> out(cfg.levels);
  if (usage) usage->assign(cfg.levels, std::vector<std::size_t>(cfg.codebook, 0));
  for (const auto& e : embeddings) {
    auto r = model.encode_one(e);
    for (std::size_t l = 0; l < cfg.levels; ++l) {
      out[l].push_back(r);
      const auto q = quantize_level(r, model.codebook(l));
      if (usage) ++(*usage)[l][static_cast<std::size_t>(q.index)];
      for (std::size_t j = 0; j < r.size(); ++j) r[j] -= q.codeword[j];
    }
  }
  return out;
}

}  // namespace

double reconstruction_loss(const RqvaeModel& model,
                           const std::vector<std::vector<double>>& embeddings) {
  nd::NoGradGuard no_grad;
  std::vector<std::size_t> all(embeddings.size());
  std::iota(all.begin(), all.end(), 0);
  return rqvae_loss(model, rows_to_tensor(embeddings, all)).recon.item();
}

std::vector<double> codebook_utilization(const RqvaeModel& model,
                                         const std::vector<std::vector<double>>& embeddings) {
  std::vector<std::vector<std::size_t>> usage;
  level_residuals(model, embeddings, &usage);
  std::vector<double> out;
  for (const auto& level : usage) {
    const auto used = std::count_if(level.begin(), level.end(), [](std::size_t c) { return c > 0; });
    out.push_back(static_cast<double>(used) / static_cast<double>(level.size()));
  }
  return out;
}

RqvaeTrainReport train_rqvae(RqvaeModel& model, const std::vector<std::vector<double>>& embeddings,
                             const RqvaeTrainConfig& config) {
  const auto& cfg = model.config();
  if (embeddings.size() < cfg.codebook) {
    throw std::invalid_argument("train_rqvae: " + std::to_string(embeddings.size()) +
                                " embeddings is fewer than the codebook size W = " +
                                std::to_string(cfg.codebook) + "; use a smaller W");
  }
  std::mt19937_64 rng(config.seed);

  // k-means initialization, level by level on the residual stream.
  {
    std::vector<std::vector<double>> residuals;
    for (const auto& e : embeddings) residuals.push_back(model.encode_one(e));
    for (std::size_t l = 0; l < cfg.levels; ++l) {
      const auto centers = kmeans(residuals, cfg.codebook, config.kmeans_iters, rng);
      for (std::size_t c = 0; c < centers.size(); ++c) set_row(model.codebook(l), c, centers[c]);
      for (auto& r : residuals) {
        const auto q = quantize_level(r, model.codebook(l));
        for (std::size_t j = 0; j < r.size(); ++j) r[j] -= q.codeword[j];
      }
    }
  }

  RqvaeTrainReport report;
  report.initial_recon = reconstruction_loss(model, embeddings);
  nd::Adam adam(model.params().tensors(), {.lr = config.lr});
  std::vector<std::size_t> order(embeddings.size());
  std::iota(order.begin(), order.end(), 0);
  std::normal_distribution<double> jitter(0.0, 1e-4);

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::vector<std::size_t>> usage(cfg.levels, std::vector<std::size_t>(cfg.codebook, 0));
    double total = 0.0, recon = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch) {
      const std::size_t end = std::min(order.size(), start + config.batch);
      const nd::Tensor x = rows_to_tensor(
          embeddings, std::span<const std::size_t>(order.data() + start, end - start));
      model.params().zero_grad();
      nd::Graph graph;
      nd::GraphScope scope(graph);
      const RqvaeLoss loss = rqvae_loss(model, x);
      graph.backward(loss.total);
      adam.step();
      for (const auto& id : loss.codes)
        for (std::size_t l = 0; l < cfg.levels; ++l) ++usage[l][static_cast<std::size_t>(id.codes[l])];
      total += loss.total.item();
      recon += loss.recon.item();
      ++batches;
    }
    report.total_curve.push_back(total / static_cast<double>(batches));
    report.recon_curve.push_back(recon / static_cast<double>(batches));

    if (epoch + 1 == config.epochs) break;
    // Dead codewords take a random residual from the level they serve.
    const auto residuals = level_residuals(model, embeddings, nullptr);
    std::uniform_int_distribution<std::size_t> pick(0, embeddings.size() - 1);
    for (std::size_t l = 0; l < cfg.levels; ++l) {
      for (std::size_t c = 0; c < cfg.codebook; ++c) {
        if (usage[l][c] > 0) continue;
        auto v = residuals[l][pick(rng)];
        for (auto& x : v) x += jitter(rng);
        set_row(model.codebook(l), c, v);
        ++report.reseeded;
      }
    }
  }
  report.final_recon = reconstruction_loss(model, embeddings);
  report.utilization = codebook_utilization(model, embeddings);
  return report;
}

void RqvaeModel::save(const std::string& path, const std::string& config_hash) const {
  detail::json j;
  j["format"] = "gensug.rqvae";
  j["version"] = 1;
  j["config_hash"] = config_hash;
  j["config"] = {{"d_in", config_.d_in},         {"d_hidden", config_.d_hidden},
                 {"d_latent", config_.d_latent}, {"blocks", config_.blocks},
                 {"levels", config_.levels},     {"codebook", config_.codebook},
                 {"beta", config_.beta},         {"identity", config_.identity_autoencoder}};
  j["params"] = detail::params_to_json(params_);
  detail::write_json_file(path, j);
}

RqvaeModel RqvaeModel::load(const std::string& path, std::string* config_hash) {
  const auto j = detail::read_json_file(path);
  if (j.value("format", "") != "gensug.rqvae" || j.value("version", 0) != 1) {
    throw std::runtime_error(path + ": not a version-1 RQ-VAE checkpoint");
  }
  const auto& c = j.at("config");
  RqvaeConfig cfg;
  cfg.d_in = c.at("d_in");
  cfg.d_hidden = c.at("d_hidden");
  cfg.d_latent = c.at("d_latent");
  cfg.blocks = c.at("blocks");
  cfg.levels = c.at("levels");
  cfg.codebook = c.at("codebook");
  cfg.beta = c.at("beta");
  cfg.identity_autoencoder = c.at("identity");
  RqvaeModel model(cfg, 0);
  detail::params_from_json(j.at("params"), model.params_);
  if (config_hash) *config_hash = j.at("config_hash").get<std::string>();
  return model;
}

}  // namespace gensug::rqvae
