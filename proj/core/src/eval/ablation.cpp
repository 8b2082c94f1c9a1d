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

#include "gensug/eval/ablation.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace gensug::eval {

namespace {

void accumulate(SliceMetrics& m, int hit, double rr) {
  ++m.cases;
  m.hit_rate += hit;
  m.mrr += rr;
}

void finish(SliceMetrics& m) {
  if (m.cases == 0) return;
  m.hit_rate /= static_cast<double>(m.cases);
  m.mrr /= static_cast<double>(m.cases);
}

std::string fmt(const char* spec, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

}  // namespace

const SystemRow& EvalReport::row(const std::string& name) const {
  for (const auto& r : rows) {
    if (r.name == name) return r;
  }
  throw std::out_of_range("eval report has no system '" + name + "'");
}

bool EvalReport::all_passed() const {
  for (const auto& a : assertions) {
    if (!a.passed) return false;
  }
  return true;
}

EvalReport run_ablation(std::span<const System> systems, std::span<const EvalCase> cases,
                        std::size_t k, const std::string& config_hash, std::uint64_t seed) {
  if (systems.empty()) throw std::invalid_argument("run_ablation: no systems");
  for (const auto& c : cases) {
    if (c.relevant.empty()) throw std::invalid_argument("run_ablation: case without relevant query");
  }
  EvalReport report;
  report.k = k;
  report.config_hash = config_hash;
  report.seed = seed;
  for (const auto& sys : systems) {
    SystemRow row;
    row.name = sys.name;
    for (auto p : {Popularity::kTop, Popularity::kMiddle, Popularity::kLongTail}) row.slices[p];
    for (const auto& c : cases) {
      const auto ranked = sys.suggest(c);
      const int hit = hit_rate_at_k(ranked, c.relevant, k);
      const double rr = mrr(ranked, c.relevant);
      accumulate(row.overall, hit, rr);
      accumulate(row.slices[c.popularity], hit, rr);
    }
    finish(row.overall);
    for (auto& [p, m] : row.slices) finish(m);
    report.rows.push_back(std::move(row));
  }
  return report;
}

void add_ordering_assertions(EvalReport& report, const OrderingNames& n, double min_gain,
                             double min_tail_gain) {
  const auto& mpc = report.row(n.mpc).overall;
  const auto& sft = report.row(n.sft).overall;
  const auto& pair = report.row(n.pair).overall;
  const auto& list = report.row(n.list).overall;
  auto chain = [&](const std::string& metric, double SliceMetrics::*field) {
    const bool ok = list.*field >= pair.*field && pair.*field >= sft.*field && sft.*field >= mpc.*field;
    report.assertions.push_back(
        {metric + " ordering list >= pair >= sft >= mpc", ok,
         fmt("%.4f", list.*field) + " >= " + fmt("%.4f", pair.*field) + " >= " +
             fmt("%.4f", sft.*field) + " >= " + fmt("%.4f", mpc.*field)});
  };
  chain("HR@" + std::to_string(report.k), &SliceMetrics::hit_rate);
  chain("MRR", &SliceMetrics::mrr);
  const double gain = list.hit_rate - sft.hit_rate;
  report.assertions.push_back({"HR@" + std::to_string(report.k) + " list - sft >= " +
                                   fmt("%.2f", min_gain),
                               gain >= min_gain, "gain " + fmt("%+.4f", gain)});
  const auto& full_tail = report.row(n.list).slices.at(Popularity::kLongTail);
  const auto& ablated_tail = report.row(n.list_no_related).slices.at(Popularity::kLongTail);
  const double drop = full_tail.hit_rate - ablated_tail.hit_rate;
  report.assertions.push_back(
      {"long-tail HR@" + std::to_string(report.k) + " loss without related queries >= " +
           fmt("%.2f", min_tail_gain),
       full_tail.cases > 0 && drop >= min_tail_gain,
       "loss " + fmt("%+.4f", drop) + " over " + std::to_string(full_tail.cases) + " cases"});
}

std::string EvalReport::to_json() const {
  nlohmann::json j;
  j["schema"] = 1;
  j["k"] = k;
  j["config_hash"] = config_hash;
  j["seed"] = seed;
  auto metrics = [](const SliceMetrics& m) {
    return nlohmann::json{{"cases", m.cases}, {"hit_rate", m.hit_rate}, {"mrr", m.mrr}};
  };
  for (const auto& r : rows) {
    nlohmann::json row{{"system", r.name}, {"overall", metrics(r.overall)}};
    for (const auto& [p, m] : r.slices) row["slices"][std::string(popularity_name(p))] = metrics(m);
    j["systems"].push_back(std::move(row));
  }
  j["assertions"] = nlohmann::json::array();
  for (const auto& a : assertions) {
    j["assertions"].push_back({{"name", a.name}, {"passed", a.passed}, {"detail", a.detail}});
  }
  return j.dump(2);
}

std::string EvalReport::table() const {
  std::size_t width = 6;
  for (const auto& r : rows) width = std::max(width, r.name.size());
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-*s %8s %8s %10s %10s %10s %6s\n", static_cast<int>(width),
                "system", ("HR@" + std::to_string(k)).c_str(), "MRR", "HR-top", "HR-middle",
                "HR-tail", "cases");
  out << line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%-*s %8.4f %8.4f %10.4f %10.4f %10.4f %6zu\n",
                  static_cast<int>(width), r.name.c_str(), r.overall.hit_rate, r.overall.mrr,
                  r.slices.at(Popularity::kTop).hit_rate, r.slices.at(Popularity::kMiddle).hit_rate,
                  r.slices.at(Popularity::kLongTail).hit_rate, r.overall.cases);
    out << line;
  }
  for (const auto& a : assertions) {
    out << (a.passed ? "PASS " : "FAIL ") << a.name << " (" << a.detail << ")\n";
  }
  out << "config " << config_hash << " seed " << seed << '\n';
  return out.str();
}

}  // namespace gensug::eval
