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

#include "gensug/corpus/catalog.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string_view>

namespace gensug::corpus {

namespace {

struct CategoryWord {
  std::string_view word;
  std::string_view department;
};

// Interleaved so that small category counts already share leading letters
// across departments, which keeps short prefixes ambiguous.
constexpr std::array<CategoryWord, 40> kCategoryWords = {{
    {"shirt", "apparel"},   {"speaker", "tech"},  {"sofa", "home"},
    {"serum", "beauty"},    {"shoes", "apparel"}, {"phone", "tech"},
    {"pillow", "home"},     {"perfume", "beauty"}, {"socks", "apparel"},
    {"cable", "tech"},      {"candle", "home"},   {"cream", "beauty"},
    {"skirt", "apparel"},   {"camera", "tech"},   {"desk", "home"},
    {"lipstick", "beauty"}, {"dress", "apparel"}, {"laptop", "tech"},
    {"lamp", "home"},       {"lotion", "beauty"}, {"jeans", "apparel"},
    {"charger", "tech"},    {"mug", "home"},      {"mascara", "beauty"},
    {"jacket", "apparel"},  {"tablet", "tech"},   {"mirror", "home"},
    {"shampoo", "beauty"},  {"coat", "apparel"},  {"mouse", "tech"},
    {"towel", "home"},      {"soap", "beauty"},   {"scarf", "apparel"},
    {"drone", "tech"},      {"teapot", "home"},   {"brush", "beauty"},
    {"hat", "apparel"},     {"headphones", "tech"}, {"blender", "home"},
    {"powder", "beauty"},
}};

constexpr std::array<std::string_view, 40> kModifiers = {
    "red",    "blue",    "black",  "white",    "green",   "pink",   "grey",
    "gold",   "mini",    "pro",    "wireless", "cotton",  "leather", "wool",
    "silk",   "vintage", "kids",   "men",      "women",   "summer", "winter",
    "sport",  "travel",  "luxury", "cheap",    "portable", "smart", "classic",
    "slim",   "organic", "led",    "usb",      "retro",   "floral", "plaid",
    "soft",   "large",   "small",  "premium",  "basic"};

std::string category_word(std::size_t i) {
  const auto& base = kCategoryWords[i % kCategoryWords.size()];
  std::string w(base.word);
  if (i >= kCategoryWords.size()) w += std::to_string(i / kCategoryWords.size() + 1);
  return w;
}

// Modifier phrases in a seeded order: single words first, then word pairs,
// then numbered fallbacks.
std::vector<std::string> modifier_phrases(std::size_t count, std::mt19937_64& rng) {
  std::vector<std::string> singles(kModifiers.begin(), kModifiers.end());
  std::shuffle(singles.begin(), singles.end(), rng);
  std::vector<std::string> out;
  out.reserve(count);
  for (const auto& s : singles) {
    if (out.size() == count) return out;
    out.push_back(s);
  }
  std::vector<std::string> pairs;
  for (const auto& a : singles)
    for (const auto& b : singles)
      if (a != b) pairs.push_back(a + " " + b);
  std::shuffle(pairs.begin(), pairs.end(), rng);
  for (const auto& p : pairs) {
    if (out.size() == count) return out;
    out.push_back(p);
  }
  for (std::size_t k = 0; out.size() < count; ++k) {
    out.push_back(singles[k % singles.size()] + " " + std::to_string(k));
  }
  return out;
}

}  // namespace

std::ptrdiff_t Catalog::find(const std::string& query) const {
  auto it = index_.find(query);
  return it == index_.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
}

const std::string& Catalog::department_of(const std::string& category) const {
  for (std::size_t i = 0; i < categories.size(); ++i) {
    if (categories[i] == category) return departments[i];
  }
  throw std::out_of_range("unknown category " + category);
}

void Catalog::reindex() {
  index_.clear();
  for (std::size_t i = 0; i < entries.size(); ++i) index_.emplace(entries[i].query, i);
}

Catalog generate_catalog(std::uint64_t seed, const CatalogConfig& config) {
  if (config.n_categories < 1 || config.n_queries < config.n_categories) {
    throw std::invalid_argument("generate_catalog: need n_queries >= n_categories >= 1");
  }
  std::mt19937_64 rng(seed);
  Catalog catalog;
  const std::size_t base = config.n_queries / config.n_categories;
  const std::size_t extra = config.n_queries % config.n_categories;
  for (std::size_t c = 0; c < config.n_categories; ++c) {
    const std::string cat = category_word(c);
    catalog.categories.push_back(cat);
    catalog.departments.emplace_back(kCategoryWords[c % kCategoryWords.size()].department);
    const std::size_t count = base + (c < extra ? 1 : 0);
    const auto mods = modifier_phrases(count, rng);
    double total = 0.0;
    for (std::size_t r = 0; r < count; ++r) {
      total += std::pow(static_cast<double>(r + 1), -config.power_law_exponent);
    }
    for (std::size_t r = 0; r < count; ++r) {
      const double w = std::pow(static_cast<double>(r + 1), -config.power_law_exponent) / total;
      catalog.entries.push_back({cat + " " + mods[r], cat, w});
    }
  }
  catalog.reindex();
  return catalog;
}

}  // namespace gensug::corpus
