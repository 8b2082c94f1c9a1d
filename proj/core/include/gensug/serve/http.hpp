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

#include <memory>
#include <string>

#include "gensug/serve/service.hpp"

namespace gensug::serve {

/// JSON-over-HTTP front end:
///   GET  /suggest?user=&prefix=&k=  -> {"schema":1,"suggestions":[{"query","score"}]}
///   POST /feedback {user,prefix,query,level,ts} -> {"ok":true}
///   GET  /healthz -> {"ok":true,"snapshot_hash":...}
/// Static files under `static_dir`, when set, are served at /ui.
class HttpServer {
 public:
  HttpServer(SuggestService& service, std::string static_dir = {});
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds; port 0 picks a free port. Returns the bound port or -1.
  int bind(const std::string& host, int port);
  /// Serves until stop(); call after bind().
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace gensug::serve
