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

#include "gensug/corpus/simulate.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <stdexcept>

namespace gensug::corpus {

namespace {

std::string modifier_of(const std::string& query, const std::string& category) {
  return query.size() > category.size() + 1 ? query.substr(category.size() + 1) : "";
}

}  // namespace

bool is_head_query(const Catalog& catalog, std::size_t entry) {
  const auto& cat = catalog.entries[entry].category;
  std::size_t rank = 0, count = 0;
  for (std::size_t i = 0; i < catalog.entries.size(); ++i) {
    if (catalog.entries[i].category != cat) continue;
    if (i < entry) ++rank;
    ++count;
  }
  return rank * 3 < count;
}

SimulatedLog simulate_logs(const Catalog& catalog, const SimConfig& config,
                           std::uint64_t seed) {
  if (config.n_events < 1) throw std::invalid_argument("simulate_logs: n_events must be >= 1");
  if (config.n_users < 1) throw std::invalid_argument("simulate_logs: n_users must be >= 1");
  if (catalog.entries.empty()) throw std::invalid_argument("simulate_logs: empty catalog");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // Per-category entry lists (in popularity order) and weights.
  std::map<std::string, std::vector<std::size_t>> by_cat;
  for (std::size_t i = 0; i < catalog.entries.size(); ++i) {
    by_cat[catalog.entries[i].category].push_back(i);
  }
  std::vector<bool> head(catalog.entries.size());
  for (const auto& [cat, ids] : by_cat) {
    for (std::size_t r = 0; r < ids.size(); ++r) head[ids[r]] = r * 3 < ids.size();
  }
  // Global popularity for the display panel: uniform over categories times
  // within-category weight.
  std::vector<std::size_t> by_popularity(catalog.entries.size());
  for (std::size_t i = 0; i < by_popularity.size(); ++i) by_popularity[i] = i;
  std::stable_sort(by_popularity.begin(), by_popularity.end(), [&](std::size_t a, std::size_t b) {
    return catalog.entries[a].weight > catalog.entries[b].weight;
  });

  SimulatedLog log;
  const auto& cats = catalog.categories;
  for (std::size_t u = 0; u < config.n_users; ++u) {
    SimUser user;
    user.id = "u" + std::to_string(u);
    std::uniform_int_distribution<std::size_t> pick_cat(0, cats.size() - 1);
    const std::size_t primary = pick_cat(rng);
    user.affinity.push_back(cats[primary]);
    if (cats.size() > 1) {
      std::size_t secondary = pick_cat(rng);
      while (secondary == primary) secondary = pick_cat(rng);
      user.affinity.push_back(cats[secondary]);
    }
    const auto& mods = by_cat[cats[primary]];
    std::uniform_int_distribution<std::size_t> pick_mod(0, mods.size() - 1);
    user.favorite_modifier = modifier_of(catalog.entries[mods[pick_mod(rng)]].query, cats[primary]);
    user.profile = "dept:" + catalog.department_of(cats[primary]);
    log.users.push_back(std::move(user));
  }

  std::uniform_int_distribution<std::size_t> pick_user(0, config.n_users - 1);
  std::uniform_int_distribution<std::int64_t> gap(1, static_cast<std::int64_t>(config.max_gap_seconds));
  std::int64_t clock = 1'700'000'000;
  std::vector<std::vector<std::size_t>> recent(config.n_users);
  for (std::size_t e = 0; e < config.n_events; ++e) {
    clock += gap(rng);
    const std::size_t u = pick_user(rng);
    const SimUser& user = log.users[u];

    std::string category;
    std::size_t repeat = catalog.entries.size();
    if (!recent[u].empty() && unit(rng) < config.repeat_prob) {
      std::uniform_int_distribution<std::size_t> pick_recent(0, recent[u].size() - 1);
      repeat = recent[u][pick_recent(rng)];
      category = catalog.entries[repeat].category;
    } else if (unit(rng) < config.affinity_prob) {
      category = user.affinity.size() > 1 && unit(rng) >= 0.6 ? user.affinity[1] : user.affinity[0];
    } else {
      std::uniform_int_distribution<std::size_t> pick_cat(0, cats.size() - 1);
      category = cats[pick_cat(rng)];
    }
    const bool match = std::find(user.affinity.begin(), user.affinity.end(), category) !=
                       user.affinity.end();
    const auto& ids = by_cat[category];
    std::size_t intended = ids.front();
    bool chose_favorite = false;
    if (repeat < catalog.entries.size()) {
      intended = repeat;
      chose_favorite = true;
    } else if (unit(rng) < config.favorite_prob) {
      for (auto id : ids) {
        if (modifier_of(catalog.entries[id].query, category) == user.favorite_modifier) {
          intended = id;
          chose_favorite = true;
        }
      }
    }
    if (!chose_favorite) {
      std::vector<double> w;
      for (auto id : ids) w.push_back(catalog.entries[id].weight);
      std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
      intended = ids[pick(rng)];
    }
    auto& mine = recent[u];
    mine.erase(std::remove(mine.begin(), mine.end(), intended), mine.end());
    mine.push_back(intended);
    if (mine.size() > config.recent_window) mine.erase(mine.begin());
    const std::string& query = catalog.entries[intended].query;
    std::uniform_int_distribution<std::size_t> cut(1, query.size() - 1);
    std::string prefix = query.substr(0, cut(rng));
    // A prefix ending in a space is trimmed; the typed text is what is logged.
    while (prefix.size() > 1 && prefix.back() == ' ') prefix.pop_back();

    const auto& row = config.levels.rows[LevelTable::row(match, head[intended])];
    std::discrete_distribution<std::size_t> pick_level(row.begin(), row.end());
    const Level level = kAllLevels[pick_level(rng)];
    log.records.push_back({user.id, prefix, query, level, clock});
    log.traces.push_back({user.id, prefix, query, match, head[intended], level});

    // Display panel: most popular completions of the prefix.
    std::vector<std::size_t> completions;
    for (auto id : by_popularity) {
      if (id != intended && catalog.entries[id].query.starts_with(prefix)) completions.push_back(id);
    }
    const std::size_t shown = std::min(config.panel_size, completions.size());
    std::vector<std::size_t> panel(completions.begin(), completions.begin() + shown);
    std::shuffle(panel.begin(), panel.end(), rng);
    for (std::size_t i = 0; i < std::min(config.show_negatives, panel.size()); ++i) {
      log.records.push_back({user.id, prefix, catalog.entries[panel[i]].query, Level::kShow, clock});
    }
    for (std::size_t i = 0; i < config.not_show_negatives && shown + i < completions.size(); ++i) {
      log.records.push_back(
          {user.id, prefix, catalog.entries[completions[shown + i]].query, Level::kNotShow, clock});
    }
  }
  return log;
}

}  // namespace gensug::corpus
