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

#include "gensug/eval/metrics.hpp"

#include <stdexcept>

namespace gensug::eval {

std::string_view popularity_name(Popularity p) {
  switch (p) {
    case Popularity::kTop: return "top";
    case Popularity::kMiddle: return "middle";
    case Popularity::kLongTail: return "long-tail";
  }
  return "unknown";
}

int hit_rate_at_k(std::span<const std::string> ranked, const std::set<std::string>& relevant,
                  std::size_t k) {
  if (k < 1) throw std::invalid_argument("hit_rate_at_k: k must be >= 1");
  for (std::size_t i = 0; i < ranked.size() && i < k; ++i) {
    if (relevant.contains(ranked[i])) return 1;
  }
  return 0;
}

double mrr(std::span<const std::string> ranked, const std::set<std::string>& relevant) {
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    if (relevant.contains(ranked[i])) return 1.0 / static_cast<double>(i + 1);
  }
  return 0.0;
}

Popularity classify_popularity(std::size_t count, const SliceThresholds& t) {
  if (!(t.top > t.mid && t.mid > 0)) {
    throw std::invalid_argument("popularity thresholds need top > mid > 0");
  }
  if (count > t.top) return Popularity::kTop;
  if (count >= t.mid) return Popularity::kMiddle;
  return Popularity::kLongTail;
}

void slice_by_popularity(std::vector<EvalCase>& cases,
                         const std::map<std::string, std::size_t>& prefix_counts,
                         const SliceThresholds& thresholds) {
  for (auto& c : cases) {
    auto it = prefix_counts.find(c.context.prefix);
    c.popularity = classify_popularity(it == prefix_counts.end() ? 0 : it->second, thresholds);
  }
}

}  // namespace gensug::eval
