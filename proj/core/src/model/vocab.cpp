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

#include "gensug/model/vocab.hpp"

#include <set>
#include <stdexcept>

#include "util/json_io.hpp"

namespace gensug::model {

namespace {

const char* const kSpecialNames[special::kCount] = {"[CLS]", "[SEP]", "[BOS]",
                                                     "[EOS]", "[PAD]", "[UNK]"};

}  // namespace

Vocab::Vocab() {
  tokens_.assign(std::begin(kSpecialNames), std::end(kSpecialNames));
  tokens_.push_back(" ");
  tokens_.push_back(",");
  reindex();
}

Vocab Vocab::build(std::span<const std::string> texts, bool word_tokens) {
  std::set<std::string> chars{" ", ","};
  std::set<std::string> words;
  for (const auto& text : texts) {
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
      if (i < text.size()) chars.insert(std::string(1, text[i]));
      if (i == text.size() || text[i] == ' ') {
        if (i - start >= 2) words.insert(text.substr(start, i - start));
        start = i + 1;
      }
    }
  }
  std::vector<std::string> tokens(std::begin(kSpecialNames), std::end(kSpecialNames));
  tokens.insert(tokens.end(), chars.begin(), chars.end());
  if (word_tokens) tokens.insert(tokens.end(), words.begin(), words.end());
  return from_tokens(std::move(tokens));
}

Vocab Vocab::from_tokens(std::vector<std::string> tokens) {
  if (tokens.size() < special::kCount) throw std::invalid_argument("vocab: missing specials");
  for (int i = 0; i < special::kCount; ++i) {
    if (tokens[static_cast<std::size_t>(i)] != kSpecialNames[i]) {
      throw std::invalid_argument("vocab: id " + std::to_string(i) + " must be " +
                                  kSpecialNames[i]);
    }
  }
  Vocab v;
  v.tokens_ = std::move(tokens);
  v.reindex();
  if (v.lookup_.size() != v.tokens_.size()) throw std::invalid_argument("vocab: duplicate token");
  if (!v.id(",") || !v.id(" ")) throw std::invalid_argument("vocab: space and comma required");
  return v;
}

void Vocab::reindex() {
  lookup_.clear();
  for (std::size_t i = 0; i < tokens_.size(); ++i) lookup_.emplace(tokens_[i], static_cast<int>(i));
  comma_ = lookup_.count(",") ? lookup_.at(",") : -1;
}

std::optional<int> Vocab::id(std::string_view token) const {
  auto it = lookup_.find(std::string(token));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

std::vector<int> Vocab::encode(std::string_view text) const {
  std::vector<int> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i < text.size() && text[i] != ' ') continue;
    const auto word = text.substr(start, i - start);
    const auto whole = word.size() >= 2 ? id(word) : std::nullopt;
    if (whole) {
      out.push_back(*whole);
    } else {
      for (char c : word) out.push_back(id(std::string_view(&c, 1)).value_or(special::kUnk));
    }
    if (i < text.size()) out.push_back(*id(" "));
    start = i + 1;
  }
  return out;
}

std::string Vocab::decode(std::span<const int> ids) const {
  std::string out;
  for (int i : ids) {
    if (!is_special(i)) out += token(i);
  }
  return out;
}

void Vocab::save(const std::string& path, const std::string& config_hash) const {
  detail::write_json_file(path, {{"format", "gensug.tokenizer"},
                                 {"version", 1},
                                 {"config_hash", config_hash},
                                 {"tokens", tokens_}});
}

Vocab Vocab::load(const std::string& path, std::string* config_hash) {
  const auto j = detail::read_json_file(path);
  if (j.value("format", "") != "gensug.tokenizer") {
    throw std::runtime_error(path + ": not a tokenizer file");
  }
  if (config_hash) *config_hash = j.at("config_hash").get<std::string>();
  return from_tokens(j.at("tokens").get<std::vector<std::string>>());
}

}  // namespace gensug::model
