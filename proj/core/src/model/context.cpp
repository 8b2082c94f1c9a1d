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

#include "gensug/model/context.hpp"

#include <stdexcept>

namespace gensug::model {

namespace {

std::vector<int> join(const std::vector<std::string>& items, std::size_t limit, const Vocab& vocab) {
  std::vector<int> out;
  for (std::size_t i = 0; i < items.size() && i < limit; ++i) {
    if (i) out.push_back(vocab.comma());
    const auto ids = vocab.encode(items[i]);
    out.insert(out.end(), ids.begin(), ids.end());
  }
  return out;
}

}  // namespace

std::vector<int> assemble_input(const UserContext& ctx, const Vocab& vocab,
                                const AssemblyConfig& config) {
  if (ctx.prefix.empty()) throw std::invalid_argument("assemble_input: empty prefix");
  const auto p = vocab.encode(ctx.prefix);
  const auto u = vocab.encode(ctx.profile);
  auto hp = join(ctx.related, config.max_related, vocab);
  auto hu = join(ctx.history, config.max_history, vocab);

  const std::size_t fixed = p.size() + u.size() + 4;
  if (fixed > config.max_len) {
    throw std::invalid_argument("assemble_input: prefix and profile need " + std::to_string(fixed) +
                                " tokens, over the limit of " + std::to_string(config.max_len));
  }
  std::size_t excess = fixed + hp.size() + hu.size() > config.max_len
                           ? fixed + hp.size() + hu.size() - config.max_len
                           : 0;
  for (auto* field : {&hu, &hp}) {
    const std::size_t cut = std::min(excess, field->size());
    field->resize(field->size() - cut);
    excess -= cut;
    if (!field->empty() && field->back() == vocab.comma()) field->pop_back();
  }

  std::vector<int> out{special::kCls};
  out.insert(out.end(), p.begin(), p.end());
  out.push_back(special::kSep);
  out.insert(out.end(), hp.begin(), hp.end());
  out.push_back(special::kSep);
  out.insert(out.end(), hu.begin(), hu.end());
  out.push_back(special::kSep);
  out.insert(out.end(), u.begin(), u.end());
  return out;
}

}  // namespace gensug::model
