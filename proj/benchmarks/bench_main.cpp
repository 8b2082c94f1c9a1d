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

#include <benchmark/benchmark.h>

#include <random>

#include "gensug/model/beam.hpp"
#include "gensug/model/transformer.hpp"
#include "gensug/ndgrad/graph.hpp"
#include "gensug/ndgrad/ops.hpp"
#include "gensug/rqvae/rqvae.hpp"

using namespace gensug;

namespace {

std::vector<double> noise(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0, 1);
  std::vector<double> v(n);
  for (double& x : v) x = g(rng);
  return v;
}

void BM_Matmul(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  nd::NoGradGuard guard;
  const auto a = nd::Tensor::from({n, n}, noise(n * n, 1));
  const auto b = nd::Tensor::from({n, n}, noise(n * n, 2));
  for (auto _ : state) benchmark::DoNotOptimize(nd::matmul(a, b));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n * n));
}
BENCHMARK(BM_Matmul)->Arg(32)->Arg(64)->Arg(128);

void BM_SemanticId(benchmark::State& state) {
  const auto w = static_cast<std::size_t>(state.range(0));
  rqvae::RqvaeModel model({.d_in = 32, .d_hidden = 32, .d_latent = 16, .blocks = 3, .levels = 4,
                           .codebook = w},
                          3);
  const auto x = noise(32, 4);
  for (auto _ : state) benchmark::DoNotOptimize(rqvae::assign_semantic_id(model, x));
}
BENCHMARK(BM_SemanticId)->Arg(64)->Arg(512);

void BM_BeamSearch(benchmark::State& state) {
  const auto beam = static_cast<std::size_t>(state.range(0));
  model::GenModel m({.d_model = 32, .n_layers = 2, .n_heads = 2, .d_ff = 64, .max_enc_len = 64,
                     .max_dec_len = 12},
                    60, 5);
  std::vector<int> input(40);
  for (std::size_t i = 0; i < input.size(); ++i) input[i] = 6 + static_cast<int>(i % 50);
  for (auto _ : state) benchmark::DoNotOptimize(model::beam_search(m, input, beam, 12));
}
BENCHMARK(BM_BeamSearch)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
