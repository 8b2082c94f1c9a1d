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

#include "gensug/corpus/feedback.hpp"

#include <stdexcept>

namespace gensug::corpus {

namespace {
constexpr std::array<std::string_view, 6> kNames = {"Order", "ItemClick", "Click",
                                                     "Show",  "NotShow",   "Rand"};
}  // namespace

std::string_view level_name(Level level) { return kNames[level_index(level)]; }

bool try_parse_level(std::string_view name, Level& out) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) {
      out = kAllLevels[i];
      return true;
    }
  }
  return false;
}

std::string valid_level_names() {
  std::string s;
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (i) s += ", ";
    s += kNames[i];
  }
  return s;
}

Level parse_level(std::string_view name) {
  Level level{};
  if (!try_parse_level(name, level)) {
    throw std::invalid_argument("unknown feedback level '" + std::string(name) +
                                "'; valid levels: " + valid_level_names());
  }
  return level;
}

}  // namespace gensug::corpus
