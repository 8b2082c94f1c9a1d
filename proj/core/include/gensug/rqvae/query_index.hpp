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

#include <map>
#include <span>
#include <string>
#include <vector>

#include "gensug/rqvae/rqvae.hpp"

namespace gensug::rqvae {

struct IndexEntry {
  std::string query;
  std::vector<double> embedding;
  SemanticID id;
};

/// Immutable after construction; concurrent readers are safe.
class QueryIndex {
 public:
  QueryIndex() = default;
  /// Every id must have exactly `levels` codes.
  QueryIndex(std::vector<IndexEntry> entries, std::size_t levels);

  const std::vector<IndexEntry>& entries() const { return entries_; }
  std::size_t levels() const { return levels_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  /// Entry positions whose id starts with the first `length` codes of `id`,
  /// in index order. length == levels is the full-ID bucket; length 0 is
  /// the whole index.
  const std::vector<std::size_t>& bucket(const SemanticID& id, std::size_t length) const;

  /// JSONL: a header line {format, version, levels, config_hash} followed by
  /// one {query, embedding, codes} object per entry.
  void save(const std::string& path, const std::string& config_hash) const;
  static QueryIndex load(const std::string& path, std::string* config_hash = nullptr);

 private:
  std::vector<IndexEntry> entries_;
  std::size_t levels_ = 0;
  std::map<std::vector<int>, std::vector<std::size_t>> buckets_;
};

/// Fine-to-coarse candidate walk: the full-ID bucket, then ID-prefix buckets
/// of length C-1 down to 1, then the whole index, stopping after the first
/// stage that brings the count to at least `min_candidates`. Returns entry
/// positions in stage order, each position once.
std::vector<std::size_t> gather_candidates(const QueryIndex& index, const SemanticID& prefix_id,
                                           std::size_t min_candidates);

struct Candidate {
  std::string query;
  std::vector<double> embedding;
};

/// Greedy maximal marginal relevance after dropping repeated strings (first
/// occurrence kept). Ties go to the earlier candidate.
std::vector<std::string> screen_candidates(std::span<const Candidate> candidates,
                                           std::span<const double> prefix_emb, std::size_t k,
                                           double lambda_div);

/// Gathers at least 4k candidates, then screens them down to k.
std::vector<std::string> related_query_search(const QueryIndex& index, const SemanticID& prefix_id,
                                              std::span<const double> prefix_emb, std::size_t k,
                                              double lambda_div = 0.7);

}  // namespace gensug::rqvae
