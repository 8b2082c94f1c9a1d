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

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "gensug/corpus/feedback.hpp"

namespace gensug::corpus {

/// Most-popular-completion baseline: a character trie over every logged query
/// carrying its positive-interaction frequency.
class MpcTrie {
 public:
  MpcTrie();
  void insert(const std::string& query, std::size_t positive_count);

  /// Up to k queries having `prefix` as a string prefix, by descending
  /// frequency, ties lexicographic.
  std::vector<std::string> suggest(const std::string& prefix, std::size_t k) const;
  std::size_t frequency(const std::string& query) const;
  std::size_t size() const { return n_queries_; }

 private:
  struct Node {
    std::map<char, std::size_t> children;
    long long count = -1;  // >= 0 when a query ends here
  };
  std::vector<Node> nodes_;
  std::size_t n_queries_ = 0;
};

MpcTrie mpc_build(std::span<const InteractionRecord> records);
std::vector<std::string> mpc_suggest(const MpcTrie& trie, const std::string& prefix,
                                     std::size_t k);

}  // namespace gensug::corpus
