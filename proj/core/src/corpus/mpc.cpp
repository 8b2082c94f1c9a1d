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

#include "gensug/corpus/mpc.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace gensug::corpus {

MpcTrie::MpcTrie() : nodes_(1) {}

void MpcTrie::insert(const std::string& query, std::size_t positive_count) {
  std::size_t at = 0;
  for (char c : query) {
    auto it = nodes_[at].children.find(c);
    if (it == nodes_[at].children.end()) {
      nodes_.emplace_back();
      it = nodes_[at].children.emplace(c, nodes_.size() - 1).first;
    }
    at = it->second;
  }
  if (nodes_[at].count < 0) {
    ++n_queries_;
    nodes_[at].count = 0;
  }
  nodes_[at].count += static_cast<long long>(positive_count);
}

std::size_t MpcTrie::frequency(const std::string& query) const {
  std::size_t at = 0;
  for (char c : query) {
    auto it = nodes_[at].children.find(c);
    if (it == nodes_[at].children.end()) return 0;
    at = it->second;
  }
  return nodes_[at].count < 0 ? 0 : static_cast<std::size_t>(nodes_[at].count);
}

std::vector<std::string> MpcTrie::suggest(const std::string& prefix, std::size_t k) const {
  if (k < 1) throw std::invalid_argument("mpc_suggest: k must be >= 1");
  std::size_t at = 0;
  for (char c : prefix) {
    auto it = nodes_[at].children.find(c);
    if (it == nodes_[at].children.end()) return {};
    at = it->second;
  }
  std::vector<std::pair<long long, std::string>> found;
  std::string path = prefix;
  // Iterative DFS; children maps give lexicographic visiting order.
  struct Frame {
    std::size_t node;
    std::map<char, std::size_t>::const_iterator next;
  };
  std::vector<Frame> stack{{at, nodes_[at].children.begin()}};
  if (nodes_[at].count >= 0) found.emplace_back(nodes_[at].count, path);
  while (!stack.empty()) {
    auto& top = stack.back();
    if (top.next == nodes_[top.node].children.end()) {
      stack.pop_back();
      if (!stack.empty()) path.pop_back();
      continue;
    }
    const auto [c, child] = *top.next++;
    path.push_back(c);
    if (nodes_[child].count >= 0) found.emplace_back(nodes_[child].count, path);
    stack.push_back({child, nodes_[child].children.begin()});
  }
  std::stable_sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < found.size() && i < k; ++i) out.push_back(found[i].second);
  return out;
}

MpcTrie mpc_build(std::span<const InteractionRecord> records) {
  std::map<std::string, std::size_t> counts;
  for (const auto& r : records) {
    counts[r.query] += is_positive(r.level) ? 1 : 0;
  }
  MpcTrie trie;
  for (const auto& [q, n] : counts) trie.insert(q, n);
  return trie;
}

std::vector<std::string> mpc_suggest(const MpcTrie& trie, const std::string& prefix,
                                     std::size_t k) {
  return trie.suggest(prefix, k);
}

}  // namespace gensug::corpus
