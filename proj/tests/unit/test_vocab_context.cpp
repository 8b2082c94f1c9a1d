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

#include <gtest/gtest.h>

#include <random>

#include "gensug/model/context.hpp"
#include "gensug/model/vocab.hpp"
#include "test_util.hpp"

using namespace gensug;
using namespace gensug::model;
using gensug::testing::TempDir;

namespace {

// ids: 0-5 specials, 6 ' ', 7 ',', 8 a, 9 b, 10 c, 11 d, 12 "ab", 13 "cd",
// 14 "dc".
Vocab fixture_vocab() {
  const std::vector<std::string> texts = {"ab cd", "ab", "dc"};
  return Vocab::build(texts);
}

UserContext fixture_context() {
  return {"u1", "ab", {"cd", "ab cd"}, {"a"}, "dc"};
}

}  // namespace

TEST(Vocab, LayoutIsSpecialsCharsWords) {
  const Vocab v = fixture_vocab();
  EXPECT_EQ(v.tokens(), (std::vector<std::string>{"[CLS]", "[SEP]", "[BOS]", "[EOS]", "[PAD]",
                                                  "[UNK]", " ", ",", "a", "b", "c", "d", "ab",
                                                  "cd", "dc"}));
  EXPECT_EQ(v.comma(), 7);
  EXPECT_EQ(*v.id("cd"), 13);
  EXPECT_FALSE(v.id("zz").has_value());
}

TEST(Vocab, HybridEncodingFallsBackToCharacters) {
  const Vocab v = fixture_vocab();
  EXPECT_EQ(v.encode("ab cd"), (std::vector<int>{12, 6, 13}));
  EXPECT_EQ(v.encode("abc"), (std::vector<int>{8, 9, 10}));
  EXPECT_EQ(v.encode("ax"), (std::vector<int>{8, special::kUnk}));
  EXPECT_EQ(v.encode("a "), (std::vector<int>{8, 6}));
  EXPECT_TRUE(v.encode("").empty());
}

TEST(Vocab, CharacterModelHasNoWords) {
  const std::vector<std::string> texts = {"ab cd"};
  const Vocab v = Vocab::build(texts, false);
  EXPECT_EQ(v.size(), 6u + 6u);
  EXPECT_EQ(v.encode("ab"), (std::vector<int>{8, 9}));
}

TEST(Vocab, DecodeInvertsEncodeOnInventoryText) {
  std::mt19937_64 rng(4);
  const std::vector<std::string> words = {"ab", "cd", "dc", "a", "b", "c", "abc", "dcba"};
  const Vocab v = fixture_vocab();
  std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1), len(1, 4);
  for (int trial = 0; trial < 200; ++trial) {
    std::string text;
    const std::size_t n = len(rng);
    for (std::size_t i = 0; i < n; ++i) text += (i ? " " : "") + words[pick(rng)];
    EXPECT_EQ(v.decode(v.encode(text)), text);
  }
  const std::vector<int> with_specials = {special::kBos, 12, special::kEos, special::kPad};
  EXPECT_EQ(v.decode(with_specials), "ab");
}

TEST(Vocab, FromTokensValidates) {
  EXPECT_THROW((void)Vocab::from_tokens({"a", "b"}), std::invalid_argument);
  EXPECT_THROW((void)Vocab::from_tokens({"[CLS]", "[SEP]", "[BOS]", "[EOS]", "[PAD]", "[UNK]", " "}),
               std::invalid_argument);
  EXPECT_THROW((void)Vocab::from_tokens(
                   {"[CLS]", "[SEP]", "[BOS]", "[EOS]", "[PAD]", "[UNK]", " ", ",", ","}),
               std::invalid_argument);
}

TEST(Vocab, SaveLoadRoundTrip) {
  TempDir dir("vocab");
  const Vocab v = fixture_vocab();
  v.save(dir.file("t.json"), "h");
  std::string hash;
  const Vocab loaded = Vocab::load(dir.file("t.json"), &hash);
  EXPECT_EQ(hash, "h");
  EXPECT_EQ(loaded.tokens(), v.tokens());
}

TEST(Assemble, Fixture) {
  const auto ids = assemble_input(fixture_context(), fixture_vocab());
  EXPECT_EQ(ids, (std::vector<int>{0, 12, 1, 13, 7, 12, 6, 13, 1, 8, 1, 14}));
}

TEST(Assemble, ListLimits) {
  const auto ids = assemble_input(fixture_context(), fixture_vocab(),
                                  {.max_related = 1, .max_history = 0, .max_len = 160});
  EXPECT_EQ(ids, (std::vector<int>{0, 12, 1, 13, 1, 1, 14}));
}

TEST(Assemble, TruncatesHistoryThenRelatedAndDropsDanglingComma) {
  const Vocab v = fixture_vocab();
  const auto ctx = fixture_context();
  // 12 tokens untruncated. One over: the single history token goes.
  EXPECT_EQ(assemble_input(ctx, v, {.max_len = 11}),
            (std::vector<int>{0, 12, 1, 13, 7, 12, 6, 13, 1, 1, 14}));
  // Then tokens come off the right of the related list. Cutting three leaves [cd ,] and
  // the dangling comma is dropped.
  EXPECT_EQ(assemble_input(ctx, v, {.max_len = 9}),
            (std::vector<int>{0, 12, 1, 13, 7, 12, 1, 1, 14}));
  EXPECT_EQ(assemble_input(ctx, v, {.max_len = 8}), (std::vector<int>{0, 12, 1, 13, 1, 1, 14}));
  EXPECT_EQ(assemble_input(ctx, v, {.max_len = 6}), (std::vector<int>{0, 12, 1, 1, 1, 14}));
}

TEST(Assemble, RejectsEmptyPrefixAndOversizedFixedPart) {
  const Vocab v = fixture_vocab();
  auto ctx = fixture_context();
  EXPECT_THROW((void)assemble_input(ctx, v, {.max_len = 5}), std::invalid_argument);
  ctx.prefix.clear();
  EXPECT_THROW((void)assemble_input(ctx, v), std::invalid_argument);
}

TEST(Assemble, PropertyLengthBoundAndFieldOrder) {
  const Vocab v = fixture_vocab();
  std::mt19937_64 rng(12);
  const std::vector<std::string> words = {"ab", "cd", "dc", "a", "abc"};
  std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1), n(0, 12), len(10, 40);
  for (int trial = 0; trial < 300; ++trial) {
    UserContext ctx{"u", words[pick(rng)], {}, {}, words[pick(rng)]};
    for (std::size_t i = n(rng); i > 0; --i) ctx.related.push_back(words[pick(rng)]);
    for (std::size_t i = n(rng); i > 0; --i) ctx.history.push_back(words[pick(rng)]);
    const std::size_t max_len = len(rng);
    const auto ids = assemble_input(ctx, v, {.max_len = max_len});
    ASSERT_LE(ids.size(), max_len);
    EXPECT_EQ(ids.front(), special::kCls);
    EXPECT_EQ(std::count(ids.begin(), ids.end(), special::kSep), 3);
    // Sections never begin or end with a comma.
    for (std::size_t i = 0; i + 1 < ids.size(); ++i) {
      if (ids[i] == special::kSep) {
        EXPECT_NE(ids[i + 1], v.comma());
      }
      if (ids[i + 1] == special::kSep) {
        EXPECT_NE(ids[i], v.comma());
      }
    }
  }
}
