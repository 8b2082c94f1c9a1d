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
#include <string>
#include <unordered_map>
#include <vector>

namespace gensug::corpus {

struct CatalogEntry {
  std::string query;
  std::string category;
  double weight = 0.0;  // popularity, normalized to 1 within the category

  bool operator==(const CatalogEntry&) const = default;
};

struct Catalog {
  std::vector<CatalogEntry> entries;
  std::vector<std::string> categories;   // in generation order
  std::vector<std::string> departments;  // parallel to categories

  std::size_t size() const { return entries.size(); }
  /// Index of `query` or -1.
  std::ptrdiff_t find(const std::string& query) const;
  const std::string& department_of(const std::string& category) const;
  void reindex();

  bool operator==(const Catalog& o) const { return entries == o.entries && categories == o.categories; }

 private:
  std::unordered_map<std::string, std::size_t> index_;
};

struct CatalogConfig {
  std::size_t n_categories = 12;
  std::size_t n_queries = 360;
  double power_law_exponent = 1.0;
};

/// Templated "<category-word> <modifier>" queries. Popularity within each
/// category follows rank^-exponent; the category's query order is a seeded
/// shuffle of the modifier list.
Catalog generate_catalog(std::uint64_t seed, const CatalogConfig& config);

}  // namespace gensug::corpus
