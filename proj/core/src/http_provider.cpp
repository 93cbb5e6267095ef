// Copyright 2026 The ckassist Authors
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

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"
#include "json.hpp"

#include "ckassist/http_provider.hpp"

#include <cstdlib>
#include <mutex>

#include "ckassist/error.hpp"

namespace ckassist {

namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

SplitUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw PreconditionError("endpoint URL lacks a scheme: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

class HttplibTransport : public HttpTransport {
 public:
  HttpResponse post(const HttpRequest& request) override {
    const SplitUrl parts = split_url(request.url);
    httplib::Client client(parts.origin);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(request.timeout);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(request.timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());
    httplib::Headers headers;
    std::string content_type = "application/json";
    for (const auto& [k, v] : request.headers) {
      if (k == "Content-Type") {
        content_type = v;
      } else {
        headers.emplace(k, v);
      }
    }
    auto result = client.Post(parts.path, headers, request.body, content_type);
    if (!result) {
      const auto err = result.error();
      const std::string what = httplib::to_string(err);
      if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read) {
        throw TimeoutError("HTTP transport: " + what);
      }
      throw TransientError("HTTP transport: " + what);
    }
    return HttpResponse{result->status, result->body};
  }
};

std::mutex& factory_mutex() {
  static std::mutex mu;
  return mu;
}

TransportFactory& factory_slot() {
  static TransportFactory factory;
  return factory;
}

}  // namespace

std::unique_ptr<HttpTransport> make_default_transport() {
  {
    std::lock_guard lock(factory_mutex());
    if (factory_slot()) return factory_slot()();
  }
  return std::make_unique<HttplibTransport>();
}

void set_transport_factory(TransportFactory factory) {
  std::lock_guard lock(factory_mutex());
  factory_slot() = std::move(factory);
}

HttpProvider::HttpProvider(ProviderConfig cfg, std::shared_ptr<HttpTransport> transport)
    : cfg_(std::move(cfg)), transport_(std::move(transport)) {
  cfg_.validate();
  if (!transport_) transport_ = make_default_transport();
}

std::string HttpProvider::build_request_body(const ProviderConfig& cfg, const std::string& prompt) {
  nlohmann::json body = {
      {"model", cfg.model_id},
      {"temperature", cfg.temperature},
      {"top_p", cfg.top_p},
      {"n", cfg.n_samples},
      {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})},
  };
  return body.dump();
}

std::string HttpProvider::extract_text(const ProviderConfig& cfg, const std::string& body) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    throw TransientError(std::string("response is not JSON: ") + e.what());
  }
  try {
    const auto& node = doc.at(nlohmann::json::json_pointer(cfg.response_text_path));
    if (!node.is_string()) throw TransientError("completion at " + cfg.response_text_path + " is not a string");
    return node.get<std::string>();
  } catch (const nlohmann::json::exception&) {
    throw TransientError("response has no completion at " + cfg.response_text_path);
  }
}

std::string HttpProvider::send(const CompletionRequest& request) {
  const char* key = std::getenv(cfg_.api_key_env.c_str());
  if (key == nullptr || *key == '\0') {
    throw AuthError("environment variable " + cfg_.api_key_env + " is not set");
  }
  HttpRequest http;
  http.url = cfg_.endpoint_url;
  http.headers = {{"Authorization", std::string("Bearer ") + key},
                  {"Content-Type", "application/json"}};
  http.body = build_request_body(cfg_, request.prompt);
  http.timeout = cfg_.timeout;
  const HttpResponse response = transport_->post(http);
  if (response.status == 401 || response.status == 403) {
    throw AuthError("provider rejected credentials (HTTP " + std::to_string(response.status) + ")");
  }
  if (response.status == 408) throw TimeoutError("provider timed out (HTTP 408)");
  if (response.status == 429 || response.status >= 500) {
    throw TransientError("provider returned HTTP " + std::to_string(response.status));
  }
  if (response.status < 200 || response.status >= 300) {
    throw ProviderError("provider returned HTTP " + std::to_string(response.status) + ": " +
                        response.body.substr(0, 200));
  }
  return extract_text(cfg_, response.body);
}

}  // namespace ckassist
