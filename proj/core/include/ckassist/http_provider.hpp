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

#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ckassist/llm_gateway.hpp"

namespace ckassist {

struct HttpRequest {
  std::string url;
  std::vector<std::pair<std::string, std::string>> headers;
  std::string body;
  std::chrono::milliseconds timeout{0};
};

struct HttpResponse {
  int status = 0;
  std::string body;
};

/// Minimal POST transport. Connection failures are reported as
/// TransientError, timeouts as TimeoutError.
class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse post(const HttpRequest& request) = 0;
};

using TransportFactory = std::function<std::unique_ptr<HttpTransport>()>;

/// Creates the process-wide default transport (cpp-httplib, TLS enabled).
std::unique_ptr<HttpTransport> make_default_transport();

/// Replaces the factory used by HttpProvider when no transport is injected.
/// Passing an empty function restores the default. Intended for tests that
/// must prove no network traffic happens.
void set_transport_factory(TransportFactory factory);

/// Chat-completion style provider: POSTs
/// {model, temperature, top_p, n, messages:[{role:"user", content}]} and
/// reads the completion at cfg.response_text_path. The API key is read from
/// the environment variable cfg.api_key_env on every call.
class HttpProvider : public Provider {
 public:
  explicit HttpProvider(ProviderConfig cfg, std::shared_ptr<HttpTransport> transport = nullptr);

  std::string send(const CompletionRequest& request) override;

  static std::string build_request_body(const ProviderConfig& cfg, const std::string& prompt);

  /// Extracts the completion text; throws TransientError if the path is absent.
  static std::string extract_text(const ProviderConfig& cfg, const std::string& body);

 private:
  ProviderConfig cfg_;
  std::shared_ptr<HttpTransport> transport_;
};

}  // namespace ckassist
