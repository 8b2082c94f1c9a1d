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

#include "gensug/model/beam.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "gensug/ndgrad/graph.hpp"

namespace gensug::model {

namespace {

bool ranks_before(const BeamHypothesis& a, const BeamHypothesis& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.tokens < b.tokens;
}

}  // namespace

std::vector<BeamHypothesis> beam_search(const NextLogProbs& next, const BeamOptions& options) {
  if (options.beam_size < 1) throw std::invalid_argument("beam_search: beam_size must be >= 1");
  if (options.max_len < 1) throw std::invalid_argument("beam_search: max_len must be >= 1");
  const std::set<int> banned(options.banned.begin(), options.banned.end());
  std::vector<BeamHypothesis> live{BeamHypothesis{}};
  std::vector<BeamHypothesis> pool;
  while (!live.empty()) {
    std::vector<BeamHypothesis> expanded;
    for (const auto& hyp : live) {
      const auto lp = next(hyp.tokens);
      for (std::size_t t = 0; t < lp.size(); ++t) {
        const int tok = static_cast<int>(t);
        if (banned.contains(tok)) continue;
        BeamHypothesis h{hyp.tokens, hyp.score + lp[t], tok == options.eos};
        h.tokens.push_back(tok);
        expanded.push_back(std::move(h));
      }
    }
    std::sort(expanded.begin(), expanded.end(), ranks_before);
    if (expanded.size() > options.beam_size) expanded.resize(options.beam_size);
    live.clear();
    for (auto& h : expanded) {
      if (h.finished || h.tokens.size() >= options.max_len) {
        pool.push_back(std::move(h));
      } else {
        live.push_back(std::move(h));
      }
    }
    std::sort(pool.begin(), pool.end(), ranks_before);
    if (pool.size() > options.beam_size) pool.resize(options.beam_size);
    // Scores never increase along a path, so a full pool that beats every
    // live hypothesis is final.
    if (pool.size() == options.beam_size && !live.empty() &&
        live.front().score < pool.back().score) {
      break;
    }
  }
  return pool;
}

std::vector<BeamHypothesis> beam_search(const GenModel& model, std::span<const int> input_ids,
                                        std::size_t beam_size, std::size_t max_len) {
  nd::NoGradGuard no_grad;
  const Memory memory = model.encode(input_ids);
  BeamOptions options;
  options.beam_size = beam_size;
  options.max_len = std::min(max_len, model.config().max_dec_len);
  for (int s = 0; s < special::kCount; ++s) {
    if (s != special::kEos) options.banned.push_back(s);
  }
  std::vector<int> dec_in;
  return beam_search(
      [&](std::span<const int> prefix) {
        dec_in.assign(1, special::kBos);
        dec_in.insert(dec_in.end(), prefix.begin(), prefix.end());
        return model.next_log_probs(memory, dec_in);
      },
      options);
}

namespace {

// Trims and collapses runs of spaces; the hybrid tokens can emit stray ones.
std::string squeeze_spaces(const std::string& text) {
  std::string out;
  for (char c : text) {
    if (c == ' ' && (out.empty() || out.back() == ' ')) continue;
    out += c;
  }
  if (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

}  // namespace

std::vector<Suggestion> generate_suggestions(const GenModel& model, const Vocab& vocab,
                                             std::span<const int> input_ids,
                                             std::size_t beam_size, std::size_t top_k) {
  std::vector<Suggestion> out;
  std::set<std::string> seen;
  for (const auto& h : beam_search(model, input_ids, beam_size, model.config().max_dec_len)) {
    if (!h.finished) continue;
    auto text = squeeze_spaces(vocab.decode(h.tokens));
    if (text.empty() || !seen.insert(text).second) continue;
    out.push_back({std::move(text), h.score});
    if (out.size() == top_k) break;
  }
  return out;
}

}  // namespace gensug::model
