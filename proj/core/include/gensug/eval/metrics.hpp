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
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gensug/model/user_context.hpp"

namespace gensug::eval {

enum class Popularity { kTop, kMiddle, kLongTail };

std::string_view popularity_name(Popularity p);

struct EvalCase {
  UserContext context;
  std::set<std::string> relevant;
  Popularity popularity = Popularity::kLongTail;
  std::int64_t ts = 0;
};

/// 1 when one of the first k ranked queries is relevant. Throws
/// std::invalid_argument when k < 1.
int hit_rate_at_k(std::span<const std::string> ranked, const std::set<std::string>& relevant,
                  std::size_t k);
/// 1 / rank of the first relevant query, 0 when none appears.
double mrr(std::span<const std::string> ranked, const std::set<std::string>& relevant);

struct SliceThresholds {
  std::size_t top = 50;  // count > top is the head slice
  std::size_t mid = 10;  // mid <= count <= top is the middle slice
};

/// Throws std::invalid_argument unless top > mid > 0.
Popularity classify_popularity(std::size_t count, const SliceThresholds& thresholds);

/// Labels every case from the interaction count of its prefix; prefixes
/// absent from `prefix_counts` count as 0.
void slice_by_popularity(std::vector<EvalCase>& cases,
                         const std::map<std::string, std::size_t>& prefix_counts,
                         const SliceThresholds& thresholds);

}  // namespace gensug::eval
