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

#pragma once

#include <atomic>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "layoutsearch/corpus.hpp"
#include "layoutsearch/model.hpp"
#include "layoutsearch/retrieval.hpp"

namespace httplib {
class Server;
}

namespace layoutsearch {

inline constexpr std::size_t kMaxRequestBody = 256 * 1024;

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path weights;
  std::filesystem::path corpus_dir;
  std::filesystem::path index;
  std::size_t default_k = 10;
  std::size_t max_k = 50;
  // Origins echoed in Access-Control-Allow-Origin; "*" allows any.
  std::vector<std::string> cors_allow;

  // Throws InvalidConfig for bad K bounds or ports, Io for missing paths.
  void validate() const;
};

// Applies LAYOUTSEARCH_HOST, _PORT, _WEIGHTS, _CORPUS, _INDEX, _DEFAULT_K,
// _MAX_K and _CORS (comma-separated) on top of `config`.
ServiceConfig apply_environment(ServiceConfig config);

// Everything a running service reads. Immutable once loaded.
struct ServiceState {
  ModelWeights model;
  EmbeddingIndex index;
  Corpus corpus;
  std::unordered_map<std::string, std::size_t> by_id;
};

// Loads weights, corpus (plus categories.csv when present) and index, and
// checks that they agree with each other.
std::shared_ptr<const ServiceState> load_service_state(const ServiceConfig& config);

struct HttpResponse {
  int status = 200;
  std::string body;
};

// Transport-independent request handling. Until a state is installed every
// endpoint answers 503.
class QueryService {
 public:
  explicit QueryService(ServiceConfig config);

  void install(std::shared_ptr<const ServiceState> state);
  bool ready() const;
  const ServiceConfig& config() const noexcept { return config_; }

  HttpResponse health() const;
  HttpResponse query(const std::string& body, const std::optional<std::string>& k) const;
  HttpResponse layout(const std::string& id) const;
  HttpResponse palette() const;

  // Registers every route, the body-size limit, CORS headers and the
  // per-request log line.
  void mount(httplib::Server& server) const;

 private:
  std::shared_ptr<const ServiceState> state() const;

  ServiceConfig config_;
  std::shared_ptr<const ServiceState> state_;
};

// Listens on config.host:port, loads the state in the background (503 until
// done) and blocks until the server stops. `on_listening` receives the
// bound port. Returns false if the socket could not be bound.
bool serve(const ServiceConfig& config, const std::function<void(int)>& on_listening = {});

}  // namespace layoutsearch
