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

// Internal helpers shared by the checkpoint readers and writers.

#include <fstream>
#include <stdexcept>
#include <string>

#include "gensug/ndgrad/params.hpp"
#include "json.hpp"

namespace gensug::detail {

using json = nlohmann::json;

inline json tensor_to_json(const nd::Tensor& t) {
  return json{{"shape", t.shape()}, {"data", t.values()}};
}

inline nd::Tensor tensor_from_json(const json& j) {
  return nd::Tensor::from(j.at("shape").get<nd::Shape>(),
                          j.at("data").get<std::vector<double>>());
}

inline json params_to_json(const nd::ParamSet& params) {
  json arr = json::array();
  for (const auto& [name, t] : params.entries()) {
    json e = tensor_to_json(t);
    e["name"] = name;
    arr.push_back(std::move(e));
  }
  return arr;
}

// Loads values into an already-shaped ParamSet; names and shapes must match.
inline void params_from_json(const json& arr, nd::ParamSet& params) {
  nd::ParamSet loaded;
  for (const auto& e : arr) loaded.add(e.at("name").get<std::string>(), tensor_from_json(e));
  params.assign(loaded);
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw std::runtime_error("malformed JSON in " + path + ": " + e.what());
  }
}

inline void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump() << '\n';
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace gensug::detail
