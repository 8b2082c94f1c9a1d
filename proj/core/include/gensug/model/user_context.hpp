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

namespace gensug {

/// Generator input: prefix, related queries, user history (most recent
/// first), and profile string.
struct UserContext {
  std::string user_id;
  std::string prefix;
  std::vector<std::string> related;
  std::vector<std::string> history;
  std::string profile;

  bool operator==(const UserContext&) const = default;
};

}  // namespace gensug
