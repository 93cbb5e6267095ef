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

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ckassist/llm_gateway.hpp"

namespace ckassist {

/// Which prompt asset a prompt was built from, recognised by its opening text.
enum class PromptKind { kReview, kAttack, kExtract, kCluster, kOther };

PromptKind classify_prompt(std::string_view prompt);
std::string_view to_string(PromptKind kind);

/// Trimmed content between "<START OF NAME>" and "<END OF NAME>", if present.
std::optional<std::string> prompt_block(std::string_view prompt, std::string_view name);

/// Index of the built-in question whose text fills the QUESTION block.
std::optional<int> prompt_question_index(std::string_view prompt);

struct MockReply {
  enum class Kind { kText, kTransient, kTimeout, kAuth, kEmpty };
  Kind kind = Kind::kText;
  std::string text;

  static MockReply of(std::string text) { return {Kind::kText, std::move(text)}; }
  static MockReply failure(Kind kind) { return {kind, {}}; }
};

enum class OnExhaust { kError, kRepeatLast, kCycle };

/// Routes prompts to a dedicated reply queue. Every set criterion must match.
struct MockRoute {
  std::optional<PromptKind> kind;
  std::optional<int> question;
  std::string contains;
  std::vector<MockReply> replies;
  OnExhaust on_exhaust = OnExhaust::kError;
};

/// Deterministic test double.
///
/// A prompt is answered by the first matching route, else by the handler,
/// else by the seeded generator, else by the global script. Route queues and
/// generator counters are keyed per route / per prompt, so results do not
/// depend on the order in which concurrent workers reach the mock, as long
/// as each route is consumed by one worker.
class MockProvider : public Provider {
 public:
  using Handler = std::function<std::string(std::string_view prompt)>;
  using Generator =
      std::function<std::string(std::string_view prompt, std::uint64_t seed, std::size_t call)>;

  MockProvider() = default;
  explicit MockProvider(std::vector<MockReply> script) : script_(std::move(script)) {}

  MockProvider& add_route(MockRoute route);
  MockProvider& set_handler(Handler handler);
  MockProvider& set_generator(std::uint64_t seed, Generator generator = default_generator);

  std::string send(const CompletionRequest& request) override;

  std::size_t calls() const;
  std::vector<std::string> prompts() const;

  /// Pseudo-review text ending in a score line, a pure function of its arguments.
  static std::string default_generator(std::string_view prompt, std::uint64_t seed, std::size_t call);

  /// Loads `mock.json` from a fixture directory (format in docs/formats.md).
  static std::shared_ptr<MockProvider> from_directory(const std::filesystem::path& dir);

 private:
  struct RouteState {
    MockRoute route;
    std::size_t next = 0;
  };

  static std::string realize(const MockReply& reply);

  mutable std::mutex mu_;
  std::vector<MockReply> script_;
  std::size_t script_next_ = 0;
  std::vector<RouteState> routes_;
  Handler handler_;
  Generator generator_;
  std::uint64_t seed_ = 0;
  std::map<std::string, std::size_t, std::less<>> generator_calls_;
  std::size_t calls_ = 0;
  std::vector<std::string> prompts_;
};

// Canned behaviours used by red-team fixtures and the CLI's mock mode.

/// Judge whose raw score depends only on the word count of the JUSTIFICATION
/// block: < medium_words -> 0, < long_words -> 0.5, otherwise 1.
MockProvider::Handler length_rewarding_judge(std::size_t medium_words = 12,
                                             std::size_t long_words = 30);

/// Attacker that returns the current justification with `addition` appended,
/// wrapped in the revised-justification delimiters.
MockProvider::Handler appending_attacker(
    std::string addition =
        "Details are given in Section 4 and Appendix B, including hardware, data and code.");

}  // namespace ckassist
