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

#include <vector>

#include "gensug/model/user_context.hpp"
#include "gensug/model/vocab.hpp"

namespace gensug::model {

struct AssemblyConfig {
  std::size_t max_related = 10;
  std::size_t max_history = 10;
  std::size_t max_len = 160;
};

/// [CLS] prefix [SEP] related [SEP] history [SEP] profile, list items joined
/// by the comma token. Over-long inputs lose tokens from the right end of the
/// history, then of the related list. Throws std::invalid_argument when the
/// prefix is empty or when prefix and profile alone exceed max_len.
std::vector<int> assemble_input(const UserContext& ctx, const Vocab& vocab,
                                const AssemblyConfig& config = {});

}  // namespace gensug::model
