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

#include "gensug/corpus/jsonl.hpp"

#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace gensug::corpus {

using nlohmann::json;

namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

}  // namespace

std::string record_to_jsonl(const InteractionRecord& r) {
  json j = {{"user_id", r.user_id},
            {"prefix", r.prefix},
            {"query", r.query},
            {"level", std::string(level_name(r.level))},
            {"ts", r.ts}};
  return j.dump();
}

InteractionRecord record_from_jsonl(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed log line: ") + e.what());
  }
  try {
    InteractionRecord r;
    r.user_id = j.at("user_id").get<std::string>();
    r.prefix = j.at("prefix").get<std::string>();
    r.query = j.at("query").get<std::string>();
    r.level = parse_level(j.at("level").get<std::string>());
    r.ts = j.at("ts").get<std::int64_t>();
    if (r.prefix.empty() || r.query.empty()) {
      throw std::invalid_argument("empty prefix or query");
    }
    return r;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed log line: ") + e.what());
  }
}

void write_records(const std::string& path, const std::vector<InteractionRecord>& records) {
  auto out = open_out(path);
  for (const auto& r : records) out << record_to_jsonl(r) << '\n';
}

std::vector<InteractionRecord> read_records(const std::string& path) {
  auto in = open_in(path);
  std::vector<InteractionRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      out.push_back(record_from_jsonl(line));
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

void write_catalog(const std::string& path, const Catalog& catalog) {
  auto out = open_out(path);
  for (const auto& e : catalog.entries) {
    json j = {{"query", e.query}, {"category", e.category}, {"weight", e.weight},
              {"department", catalog.department_of(e.category)}};
    out << j.dump() << '\n';
  }
}

Catalog read_catalog(const std::string& path) {
  auto in = open_in(path);
  Catalog catalog;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    CatalogEntry e{j.at("query").get<std::string>(), j.at("category").get<std::string>(),
                   j.at("weight").get<double>()};
    if (std::find(catalog.categories.begin(), catalog.categories.end(), e.category) ==
        catalog.categories.end()) {
      catalog.categories.push_back(e.category);
      catalog.departments.push_back(j.value("department", std::string("misc")));
    }
    catalog.entries.push_back(std::move(e));
  }
  catalog.reindex();
  return catalog;
}

void write_profiles(const std::string& path, const std::vector<SimUser>& users) {
  auto out = open_out(path);
  for (const auto& u : users) {
    out << json{{"user_id", u.id}, {"profile", u.profile}}.dump() << '\n';
  }
}

std::vector<std::pair<std::string, std::string>> read_profiles(const std::string& path) {
  auto in = open_in(path);
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    out.emplace_back(j.at("user_id").get<std::string>(), j.at("profile").get<std::string>());
  }
  return out;
}

}  // namespace gensug::corpus
