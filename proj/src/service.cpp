/*
   Copyright 2026 The layoutsearch Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
 */

#include "layoutsearch/service.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "layoutsearch/errors.hpp"
#include "layoutsearch/raster.hpp"
#include "layoutsearch/voc.hpp"
#include "layoutsearch/weights_io.hpp"

namespace layoutsearch {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::mutex log_mutex;

void log_event(const json& event) {
  const std::string line = event.dump();
  std::lock_guard lock(log_mutex);
  std::cerr << line << '\n';
}

HttpResponse json_response(int status, const json& body) { return {status, body.dump()}; }

HttpResponse error_response(int status, const std::string& message, const std::string& subject = {}) {
  json body = {{"error", message}};
  if (!subject.empty()) body["subject"] = subject;
  return json_response(status, body);
}

int status_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DegenerateBox:
    case ErrorKind::EmptyCanvas:
      return 422;
    case ErrorKind::MalformedJson:
    case ErrorKind::UnknownClass:
    case ErrorKind::MissingField:
      return 400;
    default:
      return 500;
  }
}

std::size_t parse_size(const std::string& text, const char* what) {
  std::size_t pos = 0;
  unsigned long long value = 0;
  try {
    value = std::stoull(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != text.size() || text.front() == '-') {
    throw Error(ErrorKind::InvalidConfig, std::string("not a non-negative integer: ") + what, text);
  }
  return static_cast<std::size_t>(value);
}

std::string hex(const Rgb& c) {
  const auto byte = [](double v) { return static_cast<int>(v * 255.0 + 0.5); };
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", byte(c.r), byte(c.g), byte(c.b));
  return buf;
}

json color_json(const Rgb& c) { return {{"rgb", {c.r, c.g, c.b}}, {"hex", hex(c)}}; }

}  // namespace

void ServiceConfig::validate() const {
  if (port < 0 || port > 65535) throw Error(ErrorKind::InvalidConfig, "port out of range", std::to_string(port));
  if (default_k == 0 || max_k == 0) throw Error(ErrorKind::InvalidConfig, "K bounds must be positive");
  if (default_k > max_k) throw Error(ErrorKind::InvalidConfig, "default K exceeds max K");
  for (const auto& [path, what] : {std::pair{&weights, "weights"}, {&corpus_dir, "corpus"}, {&index, "index"}}) {
    if (path->empty() || !fs::exists(*path)) {
      throw Error(ErrorKind::Io, std::string(what) + " path does not exist", path->string());
    }
  }
}

ServiceConfig apply_environment(ServiceConfig config) {
  const auto env = [](const char* name) -> std::optional<std::string> {
    const char* v = std::getenv(name);
    if (v == nullptr) return std::nullopt;
    return std::string(v);
  };
  if (auto v = env("LAYOUTSEARCH_HOST")) config.host = *v;
  if (auto v = env("LAYOUTSEARCH_PORT")) config.port = static_cast<int>(parse_size(*v, "LAYOUTSEARCH_PORT"));
  if (auto v = env("LAYOUTSEARCH_WEIGHTS")) config.weights = *v;
  if (auto v = env("LAYOUTSEARCH_CORPUS")) config.corpus_dir = *v;
  if (auto v = env("LAYOUTSEARCH_INDEX")) config.index = *v;
  if (auto v = env("LAYOUTSEARCH_DEFAULT_K")) config.default_k = parse_size(*v, "LAYOUTSEARCH_DEFAULT_K");
  if (auto v = env("LAYOUTSEARCH_MAX_K")) config.max_k = parse_size(*v, "LAYOUTSEARCH_MAX_K");
  if (auto v = env("LAYOUTSEARCH_CORS")) {
    config.cors_allow.clear();
    std::stringstream ss(*v);
    for (std::string origin; std::getline(ss, origin, ',');) {
      const auto first = origin.find_first_not_of(" \t");
      origin = first == std::string::npos ? "" : origin.substr(first, origin.find_last_not_of(" \t") - first + 1);
      if (!origin.empty()) config.cors_allow.push_back(origin);
    }
  }
  return config;
}

std::shared_ptr<const ServiceState> load_service_state(const ServiceConfig& config) {
  config.validate();
  ModelWeights model = load_weights(config.weights);
  EmbeddingIndex index = load_index(config.index);
  Corpus corpus = load_corpus(config.corpus_dir);
  if (const fs::path csv = config.corpus_dir / "categories.csv"; fs::exists(csv)) {
    apply_categories(corpus, read_categories(csv));
  }
  if (index.dim() != embedding_size(model.image.config())) {
    throw Error(ErrorKind::DimensionMismatch,
                "index dimension " + std::to_string(index.dim()) + " does not match the model");
  }
  std::unordered_map<std::string, std::size_t> by_id;
  for (std::size_t i = 0; i < corpus.layouts.size(); ++i) by_id.emplace(corpus.layouts[i].id, i);
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (!by_id.contains(index.id(i))) {
      throw Error(ErrorKind::UnknownId, "indexed layout missing from corpus", index.id(i));
    }
  }
  return std::make_shared<const ServiceState>(
      ServiceState{std::move(model), std::move(index), std::move(corpus), std::move(by_id)});
}

QueryService::QueryService(ServiceConfig config) : config_(std::move(config)) {}

void QueryService::install(std::shared_ptr<const ServiceState> state) { std::atomic_store(&state_, std::move(state)); }

std::shared_ptr<const ServiceState> QueryService::state() const { return std::atomic_load(&state_); }

bool QueryService::ready() const { return state() != nullptr; }

HttpResponse QueryService::health() const {
  const auto s = state();
  if (!s) return error_response(503, "starting");
  return json_response(200, {{"status", "ok"},
                             {"index_size", s->index.size()},
                             {"dim", s->index.dim()},
                             {"m", s->model.image.config().attention_maps}});
}

HttpResponse QueryService::query(const std::string& body, const std::optional<std::string>& k_param) const {
  const auto s = state();
  if (!s) return error_response(503, "starting");
  if (body.size() > kMaxRequestBody) return error_response(413, "request body exceeds 256 KiB");

  std::size_t k = config_.default_k;
  if (k_param) {
    try {
      k = parse_size(*k_param, "k");
    } catch (const Error&) {
      return error_response(400, "k must be a positive integer", *k_param);
    }
    if (k == 0) return error_response(400, "k must be a positive integer", *k_param);
  }
  k = std::min(k, config_.max_k);

  AnnotatedLayout layout;
  try {
    const json doc = json::parse(body);
    if (!doc.is_object()) return error_response(400, "body must be a JSON object");
    layout = layout_from_json(doc, ConfidencePolicy::Optional);
  } catch (const json::exception& e) {
    return error_response(400, std::string("malformed layout: ") + e.what());
  } catch (const Error& e) {
    return error_response(status_for(e.kind()), e.what(), e.subject());
  }

  RankedResult ranked;
  try {
    const EmbeddingVector z = embed(s->model, layout);
    ranked = s->index.query(z, k);
  } catch (const Error& e) {
    return error_response(status_for(e.kind()), e.what(), e.subject());
  }

  json results = json::array();
  for (const Neighbor& n : ranked.neighbors) {
    const AnnotatedLayout& hit = s->corpus.layouts[s->by_id.at(n.id)];
    results.push_back({{"id", n.id},
                       {"distance", n.distance},
                       {"layout", layout_to_json(hit)},
                       {"category", hit.category ? json(*hit.category) : json(nullptr)}});
  }
  return json_response(200, {{"results", std::move(results)}});
}

HttpResponse QueryService::layout(const std::string& id) const {
  const auto s = state();
  if (!s) return error_response(503, "starting");
  const auto it = s->by_id.find(id);
  if (it == s->by_id.end()) return error_response(404, "unknown layout id", id);
  return json_response(200, layout_to_json(s->corpus.layouts[it->second]));
}

HttpResponse QueryService::palette() const {
  const Palette& p = Palette::standard();
  json classes = json::object();
  for (ComponentClass cls : all_classes()) classes[class_name(cls)] = color_json(p.color(cls));
  return json_response(200, {{"background", color_json(p.background())}, {"classes", std::move(classes)}});
}

void QueryService::mount(httplib::Server& server) const {
  const auto reply = [](httplib::Response& res, const HttpResponse& r) {
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };

  server.set_payload_max_length(kMaxRequestBody);

  server.Get("/health", [this, reply](const httplib::Request&, httplib::Response& res) { reply(res, health()); });
  server.Get("/palette", [this, reply](const httplib::Request&, httplib::Response& res) { reply(res, palette()); });
  server.Get(R"(/layouts/([^/]+))", [this, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, layout(req.matches[1].str()));
  });
  server.Post("/query", [this, reply](const httplib::Request& req, httplib::Response& res) {
    std::optional<std::string> k;
    if (req.has_param("k")) k = req.get_param_value("k");
    reply(res, query(req.body, k));
  });
  server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return;
    const char* message = res.status == 413 ? "request body exceeds 256 KiB"
                          : res.status == 404 ? "not found"
                                              : "request failed";
    res.set_content(json{{"error", message}}.dump(), "application/json");
  });

  server.set_post_routing_handler([this](const httplib::Request& req, httplib::Response& res) {
    const std::string origin = req.get_header_value("Origin");
    if (origin.empty()) return;
    for (const std::string& allowed : config_.cors_allow) {
      if (allowed == "*" || allowed == origin) {
        res.set_header("Access-Control-Allow-Origin", allowed == "*" ? "*" : origin);
        res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
        res.set_header("Vary", "Origin");
        return;
      }
    }
  });

  server.set_logger([](const httplib::Request& req, const httplib::Response& res) {
    log_event({{"event", "request"}, {"method", req.method}, {"path", req.path}, {"status", res.status}});
  });
}

bool serve(const ServiceConfig& config, const std::function<void(int)>& on_listening) {
  config.validate();
  QueryService service(config);
  httplib::Server server;
  service.mount(server);

  int port = config.port;
  if (port == 0) {
    port = server.bind_to_any_port(config.host);
  } else if (!server.bind_to_port(config.host, port)) {
    port = -1;
  }
  if (port < 0) {
    log_event({{"event", "bind_failed"}, {"host", config.host}, {"port", config.port}});
    return false;
  }
  log_event({{"event", "listening"}, {"host", config.host}, {"port", port}});
  if (on_listening) on_listening(port);

  std::thread loader([&] {
    try {
      const auto started = std::chrono::steady_clock::now();
      service.install(load_service_state(config));
      const auto ms =
          std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started).count();
      log_event({{"event", "ready"}, {"load_ms", ms}});
    } catch (const std::exception& e) {
      log_event({{"event", "load_failed"}, {"error", e.what()}});
      server.wait_until_ready();
      server.stop();
    }
  });
  const bool ok = server.listen_after_bind();
  loader.join();
  return ok && service.ready();
}

}  // namespace layoutsearch
