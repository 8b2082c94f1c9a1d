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

#include <string>
#include <vector>

#include "gensug/corpus/catalog.hpp"
#include "gensug/corpus/feedback.hpp"
#include "gensug/corpus/simulate.hpp"

namespace gensug::corpus {

// Log lines: {"user_id","prefix","query","level","ts"}.
std::string record_to_jsonl(const InteractionRecord& record);
/// Throws std::invalid_argument on a malformed line or unknown level.
InteractionRecord record_from_jsonl(const std::string& line);

void write_records(const std::string& path, const std::vector<InteractionRecord>& records);
std::vector<InteractionRecord> read_records(const std::string& path);

// Catalog lines: {"query","category","weight"}; category order follows first
// appearance.
void write_catalog(const std::string& path, const Catalog& catalog);
Catalog read_catalog(const std::string& path);

// User lines: {"user_id","profile"}.
void write_profiles(const std::string& path, const std::vector<SimUser>& users);
std::vector<std::pair<std::string, std::string>> read_profiles(const std::string& path);

}  // namespace gensug::corpus
