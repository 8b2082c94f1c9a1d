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

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace gensug::model {

namespace special {
inline constexpr int kCls = 0;
inline constexpr int kSep = 1;
inline constexpr int kBos = 2;
inline constexpr int kEos = 3;
inline constexpr int kPad = 4;
inline constexpr int kUnk = 5;
inline constexpr int kCount = 6;
}  // namespace special

/// Token inventory: the six specials at ids 0-5, then single characters,
/// then (in hybrid mode) whole words of two or more characters. Text is
/// split on spaces; a word present in the inventory becomes one token,
/// anything else is spelled out character by character. Space is itself a
/// character token.
class Vocab {
 public:
  /// Specials plus the space and comma characters.
  Vocab();
  static Vocab build(std::span<const std::string> texts, bool word_tokens = true);
  /// Tokens in id order; the first six must be the specials.
  static Vocab from_tokens(std::vector<std::string> tokens);

  std::vector<int> encode(std::string_view text) const;
  /// Concatenates token strings, skipping specials.
  std::string decode(std::span<const int> ids) const;

  std::size_t size() const { return tokens_.size(); }
  const std::string& token(int id) const { return tokens_.at(static_cast<std::size_t>(id)); }
  std::optional<int> id(std::string_view token) const;
  const std::vector<std::string>& tokens() const { return tokens_; }
  int comma() const { return comma_; }
  static bool is_special(int id) { return id >= 0 && id < special::kCount; }

  /// JSON {format, version, config_hash, tokens} with tokens in id order.
  void save(const std::string& path, const std::string& config_hash) const;
  static Vocab load(const std::string& path, std::string* config_hash = nullptr);

 private:
  void reindex();

  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> lookup_;
  int comma_ = -1;
};

}  // namespace gensug::model
