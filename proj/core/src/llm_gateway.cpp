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

#include "ckassist/llm_gateway.hpp"

#include <algorithm>
#include <thread>

#include "ckassist/error.hpp"
#include "ckassist/text.hpp"

namespace ckassist {

void ProviderConfig::validate() const {
  if (!(temperature >= 0.0)) throw PreconditionError("temperature must be >= 0");
  if (!(top_p > 0.0 && top_p <= 1.0)) throw PreconditionError("top_p must be in (0, 1]");
  if (n_samples != 1) throw PreconditionError("n_samples must be 1");
  if (max_retries < 0) throw PreconditionError("max_retries must be >= 0");
  if (max_concurrent_requests < 1) throw PreconditionError("max_concurrent_requests must be >= 1");
  if (backoff_initial.count() < 0 || backoff_max < backoff_initial) {
    throw PreconditionError("backoff bounds are inconsistent");
  }
}

Sleeper real_sleeper() {
  return [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

std::vector<std::chrono::milliseconds> backoff_schedule(const ProviderConfig& cfg) {
  std::vector<std::chrono::milliseconds> out;
  auto delay = cfg.backoff_initial;
  for (int k = 0; k < cfg.max_retries; ++k) {
    out.push_back(std::min(delay, cfg.backoff_max));
    if (delay < cfg.backoff_max) delay *= 2;
  }
  return out;
}

CompletionResponse complete(Provider& provider, const ProviderConfig& cfg,
                            const CompletionRequest& request, const Sleeper& sleep) {
  if (request.prompt.empty()) throw PreconditionError("prompt must not be empty");
  const auto delays = backoff_schedule(cfg);
  std::string last_cause;
  for (int attempt = 1; attempt <= cfg.max_retries + 1; ++attempt) {
    if (attempt > 1 && sleep) sleep(delays[attempt - 2]);
    try {
      std::string text = provider.send(request);
      if (text::trim(text).empty()) {
        last_cause = "empty completion";
        continue;
      }
      return CompletionResponse{std::move(text), attempt};
    } catch (const TransientError& e) {
      last_cause = e.what();
    }
  }
  throw RetriesExhaustedError(cfg.max_retries + 1, last_cause);
}

ConcurrencyLimitedProvider::ConcurrencyLimitedProvider(std::shared_ptr<Provider> inner, int limit)
    : inner_(std::move(inner)), limit_(limit) {
  if (!inner_) throw PreconditionError("inner provider is null");
  if (limit_ < 1) throw PreconditionError("concurrency limit must be >= 1");
}

std::string ConcurrencyLimitedProvider::send(const CompletionRequest& request) {
  {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return in_flight_ < limit_; });
    ++in_flight_;
    peak_ = std::max(peak_, in_flight_);
  }
  struct Release {
    ConcurrencyLimitedProvider* self;
    ~Release() {
      {
        std::lock_guard lock(self->mu_);
        --self->in_flight_;
      }
      self->cv_.notify_one();
    }
  } release{this};
  return inner_->send(request);
}

int ConcurrencyLimitedProvider::peak_in_flight() const {
  std::lock_guard lock(mu_);
  return peak_;
}

}  // namespace ckassist
