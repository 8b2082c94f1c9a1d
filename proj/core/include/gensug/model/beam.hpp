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

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gensug/model/transformer.hpp"
#include "gensug/model/vocab.hpp"

namespace gensug::model {

struct BeamHypothesis {
  std::vector<int> tokens;  // without [BOS]; ends in [EOS] when finished
  double score = 0.0;       // sum of token log-probabilities
  bool finished = false;
};

/// Log-probabilities of every vocabulary token following `prefix`.
using NextLogProbs = std::function<std::vector<double>(std::span<const int> prefix)>;

struct BeamOptions {
  std::size_t beam_size = 32;
  std::size_t max_len = 24;  // tokens per hypothesis, [EOS] included
  int eos = special::kEos;
  std::vector<int> banned{};  // never expanded
};

/// Breadth-first beam over summed log-probabilities with no length
/// normalization. Each step keeps the best beam_size expansions; those
/// ending in eos, or reaching max_len, retire to a pool. Returns up to
/// beam_size hypotheses by score descending, ties by token ids ascending.
std::vector<BeamHypothesis> beam_search(const NextLogProbs& next, const BeamOptions& options);

/// Beam over the generator; specials other than [EOS] are never emitted.
std::vector<BeamHypothesis> beam_search(const GenModel& model, std::span<const int> input_ids,
                                        std::size_t beam_size, std::size_t max_len);

struct Suggestion {
  std::string query;
  double score = 0.0;
};

/// Finished hypotheses decoded to strings, empty strings dropped, repeated
/// strings collapsed to their best-scoring copy, at most `top_k` kept.
std::vector<Suggestion> generate_suggestions(const GenModel& model, const Vocab& vocab,
                                             std::span<const int> input_ids,
                                             std::size_t beam_size, std::size_t top_k);

}  // namespace gensug::model
