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

#include "gensug/corpus/datasets.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>

#include "gensug/util/hash.hpp"

namespace gensug::corpus {

std::vector<InteractionRecord> chronological(std::span<const InteractionRecord> records) {
  std::vector<InteractionRecord> out(records.begin(), records.end());
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::tie(a.ts, a.user_id, a.prefix) < std::tie(b.ts, b.user_id, b.prefix);
  });
  return out;
}

RatioTable::RatioTable(std::span<const InteractionRecord> records) {
  for (const auto& r : records) {
    ++slice_[{r.prefix, r.level}];
    ++cell_[{r.prefix, r.level, r.query}];
  }
}

std::size_t RatioTable::count(const std::string& prefix, Level level) const {
  auto it = slice_.find({prefix, level});
  return it == slice_.end() ? 0 : it->second;
}

double RatioTable::ratio(const std::string& prefix, Level level, const std::string& query) const {
  const std::size_t total = count(prefix, level);
  if (total == 0) {
    throw std::out_of_range("level ratio: no records for prefix '" + prefix + "' at level " +
                            std::string(level_name(level)));
  }
  auto it = cell_.find({prefix, level, query});
  const std::size_t n = it == cell_.end() ? 0 : it->second;
  return static_cast<double>(n) / static_cast<double>(total);
}

double compute_level_ratio(std::span<const InteractionRecord> records,
                           const std::string& prefix, Level level,
                           const std::string& query) {
  return RatioTable(records).ratio(prefix, level, query);
}

HistoryIndex::HistoryIndex(std::span<const InteractionRecord> records) {
  for (const auto& r : chronological(records)) {
    if (is_positive(r.level)) by_user_[r.user_id].emplace_back(r.ts, r.query);
  }
}

std::vector<std::string> HistoryIndex::before(const std::string& user_id, std::int64_t ts,
                                              std::size_t limit) const {
  std::vector<std::string> out;
  auto it = by_user_.find(user_id);
  if (it == by_user_.end()) return out;
  const auto& events = it->second;
  auto end = std::lower_bound(events.begin(), events.end(), ts,
                              [](const auto& e, std::int64_t t) { return e.first < t; });
  for (auto r = std::make_reverse_iterator(end); r != events.rend() && out.size() < limit; ++r) {
    out.push_back(r->second);
  }
  return out;
}

std::vector<std::string> HistoryIndex::latest(const std::string& user_id, std::size_t limit) const {
  std::vector<std::string> out;
  auto it = by_user_.find(user_id);
  if (it == by_user_.end()) return out;
  for (auto r = it->second.rbegin(); r != it->second.rend() && out.size() < limit; ++r) {
    out.push_back(r->second);
  }
  return out;
}

std::vector<SftExample> build_sft_dataset(std::span<const InteractionRecord> records,
                                          std::size_t history_len) {
  const HistoryIndex history(records);
  std::vector<SftExample> out;
  for (const auto& r : chronological(records)) {
    if (!is_positive(r.level)) continue;
    SftExample ex;
    ex.context.user_id = r.user_id;
    ex.context.prefix = r.prefix;
    ex.context.history = history.before(r.user_id, r.ts, history_len);
    ex.target = r.query;
    ex.ts = r.ts;
    out.push_back(std::move(ex));
  }
  return out;
}

namespace {

struct PageView {
  std::string user_id;
  std::string prefix;
  std::int64_t ts = 0;
  std::map<std::string, Level> strongest;  // query -> strongest level
};

bool is_negative_level(Level l) { return !is_positive(l); }

}  // namespace

std::vector<PreferenceGroup> build_preference_groups(
    std::span<const InteractionRecord> records, const PairPolicy& policy) {
  if (policy.rand_negatives > 0 && policy.catalog == nullptr) {
    throw std::invalid_argument("build_preference_groups: Rand negatives need a catalog");
  }
  const auto ordered = chronological(records);
  const RatioTable ratios(records);
  const HistoryIndex history(records);

  std::map<std::string, std::set<std::string>> seen_for_prefix;
  for (const auto& r : records) seen_for_prefix[r.prefix].insert(r.query);

  std::vector<PageView> views;
  std::map<std::tuple<std::int64_t, std::string, std::string>, std::size_t> view_index;
  for (const auto& r : ordered) {
    auto key = std::make_tuple(r.ts, r.user_id, r.prefix);
    auto [it, inserted] = view_index.try_emplace(key, views.size());
    if (inserted) views.push_back({r.user_id, r.prefix, r.ts, {}});
    auto& pv = views[it->second];
    auto [q, fresh] = pv.strongest.try_emplace(r.query, r.level);
    if (!fresh && stronger(r.level, q->second)) q->second = r.level;
  }

  std::vector<PreferenceGroup> groups;
  for (const auto& pv : views) {
    std::vector<LabeledQuery> items;
    for (const auto& [query, level] : pv.strongest) {
      LabeledQuery lq{query, level, ratios.ratio(pv.prefix, level, query), 0.0};
      lq.reward = pref::reward(level, lq.pi, policy.reward);
      items.push_back(std::move(lq));
    }
    bool has_win = false;
    for (const auto& it : items) {
      has_win = has_win || is_positive(it.level) ||
                (policy.adjacent_level_pairs && it.level != Level::kRand);
    }
    if (!has_win) continue;

    if (policy.rand_negatives > 0) {
      const auto& seen = seen_for_prefix[pv.prefix];
      std::vector<std::size_t> pool;
      for (std::size_t i = 0; i < policy.catalog->entries.size(); ++i) {
        if (!seen.contains(policy.catalog->entries[i].query)) pool.push_back(i);
      }
      std::mt19937_64 rng(policy.seed ^
                          fnv1a64(pv.user_id + '\x1f' + pv.prefix + '\x1f' + std::to_string(pv.ts)));
      for (std::size_t k = 0; k < policy.rand_negatives && !pool.empty(); ++k) {
        std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
        const std::size_t j = pick(rng);
        items.push_back({policy.catalog->entries[pool[j]].query, Level::kRand, 0.0,
                         pref::reward(Level::kRand, 0.0, policy.reward)});
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(j));
      }
    }
    std::stable_sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
      return std::tie(a.level, a.query) < std::tie(b.level, b.query);
    });

    UserContext ctx;
    ctx.user_id = pv.user_id;
    ctx.prefix = pv.prefix;
    ctx.history = history.before(pv.user_id, pv.ts, policy.history_len);

    for (const auto& win : items) {
      const bool win_ok = is_positive(win.level) ||
                          (policy.adjacent_level_pairs && win.level != Level::kRand);
      if (!win_ok) continue;
      PreferenceGroup list_group{ctx, win, {}, {}, pv.ts};
      for (const auto& lose : items) {
        if (!stronger(win.level, lose.level) || lose.query == win.query) continue;
        if (!policy.adjacent_level_pairs && !is_negative_level(lose.level)) continue;
        if (!(win.reward > lose.reward)) continue;
        const double rw = pref::reward_weight(win.reward, lose.reward, policy.reward);
        if (policy.listwise) {
          list_group.loses.push_back(lose);
          list_group.rw.push_back(rw);
        } else {
          groups.push_back({ctx, win, {lose}, {rw}, pv.ts});
        }
      }
      if (policy.listwise && !list_group.loses.empty()) groups.push_back(std::move(list_group));
    }
  }
  return groups;
}

}  // namespace gensug::corpus
