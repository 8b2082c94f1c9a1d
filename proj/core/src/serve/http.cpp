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

#include "gensug/serve/http.hpp"

#include "httplib.h"
#include "json.hpp"

namespace gensug::serve {

using json = nlohmann::json;

namespace {

void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

}  // namespace

struct HttpServer::Impl {
  SuggestService& service;
  httplib::Server server;
  explicit Impl(SuggestService& s) : service(s) {}
};

HttpServer::HttpServer(SuggestService& service, std::string static_dir)
    : impl_(std::make_unique<Impl>(service)) {
  auto& svc = impl_->service;
  auto& srv = impl_->server;

  srv.Get("/suggest", [&svc](const httplib::Request& req, httplib::Response& res) {
    const auto prefix = req.get_param_value("prefix");
    const auto user = req.get_param_value("user");
    std::size_t k = 16;
    if (req.has_param("k")) {
      try {
        const long long v = std::stoll(req.get_param_value("k"));
        if (v < 1) throw std::invalid_argument("k");
        k = static_cast<std::size_t>(v);
      } catch (const std::exception&) {
        return reply(res, 400, {{"error", "k must be a positive integer"}});
      }
    }
    if (prefix.empty()) return reply(res, 400, {{"error", "prefix must be non-empty"}});
    try {
      json items = json::array();
      for (const auto& s : svc.suggest(user, prefix, k)) {
        items.push_back({{"query", s.query}, {"score", s.score}});
      }
      reply(res, 200, {{"schema", 1}, {"suggestions", std::move(items)}});
    } catch (const std::invalid_argument& e) {
      reply(res, 400, {{"error", e.what()}});
    } catch (const std::exception& e) {
      reply(res, 500, {{"error", e.what()}});
    }
  });

  srv.Post("/feedback", [&svc](const httplib::Request& req, httplib::Response& res) {
    try {
      const auto j = json::parse(req.body);
      svc.record_feedback(j.at("user").get<std::string>(), j.at("prefix").get<std::string>(),
                          j.at("query").get<std::string>(), j.at("level").get<std::string>(),
                          j.value("ts", std::int64_t{0}));
      reply(res, 200, {{"ok", true}});
    } catch (const json::exception& e) {
      reply(res, 400, {{"ok", false}, {"error", std::string("malformed body: ") + e.what()}});
    } catch (const std::invalid_argument& e) {
      reply(res, 400, {{"ok", false}, {"error", e.what()}});
    } catch (const std::exception& e) {
      reply(res, 500, {{"ok", false}, {"error", e.what()}});
    }
  });

  srv.Get("/healthz", [&svc](const httplib::Request&, httplib::Response& res) {
    reply(res, 200, {{"ok", true}, {"snapshot_hash", svc.snapshot()->config_hash()}});
  });

  if (!static_dir.empty()) srv.set_mount_point("/ui", static_dir);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() { impl_->server.stop(); }

}  // namespace gensug::serve
