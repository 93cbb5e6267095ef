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
#include <condition_variable>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace ckassist {

/// Sampling and transport settings for one completion endpoint. The
/// defaults are the single-sample protocol used by the review engine.
struct ProviderConfig {
  std::string endpoint_url = "https://api.openai.com/v1/chat/completions";
  std::string model_id = "gpt-4";
  double temperature = 1.0;
  double top_p = 1.0;
  int n_samples = 1;
  int max_retries = 3;
  std::chrono::milliseconds timeout{120'000};
  std::string api_key_env = "OPENAI_API_KEY";
  /// JSON pointer to the completion text in the response body.
  std::string response_text_path = "/choices/0/message/content";
  std::chrono::milliseconds backoff_initial{1'000};
  std::chrono::milliseconds backoff_max{30'000};
  /// Client-side cap on in-flight requests per shared provider handle.
  int max_concurrent_requests = 15;

  /// Throws PreconditionError when an invariant is violated.
  void validate() const;
};

struct CompletionRequest {
  std::string prompt;
};

struct CompletionResponse {
  std::string text;
  int attempts_used = 1;
};

/// A completion backend. `send` performs exactly one attempt and reports
/// failures by exception: TransientError (and TimeoutError) are retryable,
/// AuthError and other ProviderErrors are not. Implementations must be safe
/// to call from several threads.
class Provider {
 public:
  virtual ~Provider() = default;
  virtual std::string send(const CompletionRequest& request) = 0;
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;

/// Sleeper backed by std::this_thread::sleep_for.
Sleeper real_sleeper();

/// Delays before retry 1..max_retries: initial * 2^(k-1), capped at
/// backoff_max. Nondecreasing.
std::vector<std::chrono::milliseconds> backoff_schedule(const ProviderConfig& cfg);

/// Sends the request, retrying transient failures (including an empty
/// completion) up to cfg.max_retries times with exponential backoff.
/// Throws RetriesExhaustedError wrapping the last cause, or rethrows
/// non-retryable provider errors immediately.
CompletionResponse complete(Provider& provider, const ProviderConfig& cfg,
                            const CompletionRequest& request,
                            const Sleeper& sleep = real_sleeper());

/// Wraps a provider so that at most `limit` sends are in flight at once.
class ConcurrencyLimitedProvider : public Provider {
 public:
  ConcurrencyLimitedProvider(std::shared_ptr<Provider> inner, int limit);
  std::string send(const CompletionRequest& request) override;
  int peak_in_flight() const;

 private:
  std::shared_ptr<Provider> inner_;
  int limit_;
  mutable std::mutex mu_;
  std::condition_variable cv_;
  int in_flight_ = 0;
  int peak_ = 0;
};

}  // namespace ckassist
