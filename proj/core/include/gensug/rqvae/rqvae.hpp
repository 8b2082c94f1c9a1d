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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gensug/ndgrad/params.hpp"
#include "gensug/ndgrad/tensor.hpp"

namespace gensug::rqvae {

struct SemanticID {
  std::vector<int> codes;
  bool operator==(const SemanticID&) const = default;
  auto operator<=>(const SemanticID&) const = default;
  std::string str() const;
};

struct RqvaeConfig {
  std::size_t d_in = 32;
  std::size_t d_hidden = 32;
  std::size_t d_latent = 16;
  std::size_t blocks = 3;      // L, linear layers in each of encoder and decoder
  std::size_t levels = 4;
  std::size_t codebook = 64;
  double beta = 0.25;          // commitment weight
  // Identity encoder/decoder (requires d_in == d_latent); used to test
  // quantization in isolation.
  bool identity_autoencoder = false;
};

struct QuantizeResult {
  int index = 0;
  std::vector<double> codeword;
};

/// Nearest codeword by squared Euclidean distance; ties go to the lowest
/// index. `table` is [W, d].
QuantizeResult quantize_level(std::span<const double> residual, const nd::Tensor& table);

class RqvaeModel {
 public:
  RqvaeModel() = default;
  RqvaeModel(const RqvaeConfig& config, std::uint64_t seed);

  const RqvaeConfig& config() const { return config_; }
  nd::ParamSet& params() { return params_; }
  const nd::ParamSet& params() const { return params_; }
  nd::Tensor& codebook(std::size_t level);
  const nd::Tensor& codebook(std::size_t level) const;

  /// [B, d_in] -> [B, d_latent]. Records on the active graph.
  nd::Tensor encode(const nd::Tensor& x) const;
  nd::Tensor decode(const nd::Tensor& z) const;

  std::vector<double> encode_one(std::span<const double> embedding) const;
  SemanticID assign(std::span<const double> embedding) const;
  /// Residual quantization of an already-encoded latent.
  SemanticID quantize_latent(std::span<const double> latent) const;

  void save(const std::string& path, const std::string& config_hash) const;
  static RqvaeModel load(const std::string& path, std::string* config_hash = nullptr);

 private:
  RqvaeConfig config_;
  nd::ParamSet params_;
};

SemanticID assign_semantic_id(const RqvaeModel& model, std::span<const double> embedding);

/// Values of every stop-gradient operand, row-major per level.
struct RqvaeDetached {
  std::vector<std::vector<double>> residual;  // sg[r_i] per level
  std::vector<std::vector<double>> code;      // sg[e_ci] per level
  std::vector<double> st_offset;              // quantized - z, the straight-through constant
};

struct RqvaeLoss {
  nd::Tensor total;
  nd::Tensor recon;
  nd::Tensor commit;
  std::vector<SemanticID> codes;
  RqvaeDetached detached;
};

/// recon = mean_b ||x - x_hat||^2; commit = mean over batch and levels of
/// ||sg[r_i] - e_ci||^2 + beta ||r_i - sg[e_ci]||^2. The decoder reads the
/// quantized latent through a straight-through estimator. When `fixed_codes`
/// is given it replaces the nearest-codeword assignment. A given `frozen`
/// supplies every stop-gradient operand as a constant. Evaluated at the point
/// `frozen` was captured the value is unchanged, and the result is a smooth
/// function whose true derivative is the stop-gradient gradient, which is
/// what a gradient check needs.
RqvaeLoss rqvae_loss(const RqvaeModel& model, const nd::Tensor& batch,
                     const std::vector<SemanticID>* fixed_codes = nullptr,
                     const RqvaeDetached* frozen = nullptr);

struct RqvaeTrainConfig {
  std::size_t epochs = 30;
  std::size_t batch = 64;
  double lr = 2e-3;
  std::size_t kmeans_iters = 10;
  std::uint64_t seed = 0;
};

struct RqvaeTrainReport {
  std::vector<double> total_curve;
  std::vector<double> recon_curve;
  double initial_recon = 0.0;  // whole set, after k-means init
  double final_recon = 0.0;    // whole set, after training
  std::vector<double> utilization;  // per level, fraction of codewords used
  double mean_utilization() const;
  std::size_t reseeded = 0;
};

/// Throws std::invalid_argument when there are fewer embeddings than W.
RqvaeTrainReport train_rqvae(RqvaeModel& model, const std::vector<std::vector<double>>& embeddings,
                             const RqvaeTrainConfig& config);

/// Whole-set reconstruction loss and per-level codebook utilization.
double reconstruction_loss(const RqvaeModel& model,
                           const std::vector<std::vector<double>>& embeddings);
std::vector<double> codebook_utilization(const RqvaeModel& model,
                                         const std::vector<std::vector<double>>& embeddings);

}  // namespace gensug::rqvae
