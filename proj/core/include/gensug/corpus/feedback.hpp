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

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace gensug::corpus {

/// Feedback levels in decreasing strength of the user signal.
enum class Level : std::uint8_t { kOrder, kItemClick, kClick, kShow, kNotShow, kRand };

inline constexpr std::array<Level, 6> kAllLevels = {
    Level::kOrder, Level::kItemClick, Level::kClick,
    Level::kShow,  Level::kNotShow,   Level::kRand};

/// Base reward weight per level, in kAllLevels order.
inline constexpr std::array<double, 6> kLevelLambda = {2.0, 1.5, 1.0, 0.5, 0.2, 0.0};

std::string_view level_name(Level level);
/// Throws std::invalid_argument listing the six valid names.
Level parse_level(std::string_view name);
bool try_parse_level(std::string_view name, Level& out);
std::string valid_level_names();

inline constexpr std::size_t level_index(Level level) {
  return static_cast<std::size_t>(level);
}
inline constexpr double level_lambda(Level level) {
  return kLevelLambda[level_index(level)];
}
/// Order, ItemClick, Click.
inline constexpr bool is_positive(Level level) {
  return level == Level::kOrder || level == Level::kItemClick || level == Level::kClick;
}
/// True when a is a strictly stronger signal than b.
inline constexpr bool stronger(Level a, Level b) {
  return level_index(a) < level_index(b);
}

struct InteractionRecord {
  std::string user_id;
  std::string prefix;
  std::string query;
  Level level = Level::kShow;
  std::int64_t ts = 0;

  bool operator==(const InteractionRecord&) const = default;
};

}  // namespace gensug::corpus
