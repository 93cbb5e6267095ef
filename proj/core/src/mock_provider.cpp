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

#include "json.hpp"

#include "ckassist/mock_provider.hpp"

#include <fstream>
#include <sstream>

#include "ckassist/assets.hpp"
#include "ckassist/checklist.hpp"
#include "ckassist/error.hpp"
#include "ckassist/rng.hpp"
#include "ckassist/text.hpp"

namespace ckassist {

namespace {

std::string_view first_line(std::string_view s) {
  return s.substr(0, std::min(s.find('\n'), s.size()));
}

bool same_opening(std::string_view prompt, std::string_view asset) {
  const std::string_view head = first_line(asset).substr(0, 48);
  return prompt.starts_with(head);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

PromptKind classify_prompt(std::string_view prompt) {
  if (same_opening(prompt, assets::review_prompt())) return PromptKind::kReview;
  if (same_opening(prompt, assets::attack_prompt())) return PromptKind::kAttack;
  if (same_opening(prompt, assets::extract_prompt())) return PromptKind::kExtract;
  if (same_opening(prompt, assets::cluster_prompt())) return PromptKind::kCluster;
  return PromptKind::kOther;
}

std::string_view to_string(PromptKind kind) {
  switch (kind) {
    case PromptKind::kReview: return "review";
    case PromptKind::kAttack: return "attack";
    case PromptKind::kExtract: return "extract";
    case PromptKind::kCluster: return "cluster";
    case PromptKind::kOther: return "other";
  }
  return "other";
}

std::optional<std::string> prompt_block(std::string_view prompt, std::string_view name) {
  const std::string open = "<START OF " + std::string(name) + ">";
  const std::string close = "<END OF " + std::string(name) + ">";
  const auto b = prompt.find(open);
  if (b == std::string_view::npos) return std::nullopt;
  const auto start = b + open.size();
  const auto e = prompt.find(close, start);
  if (e == std::string_view::npos) return std::nullopt;
  return std::string(text::trim(prompt.substr(start, e - start)));
}

std::optional<int> prompt_question_index(std::string_view prompt) {
  const auto block = prompt_block(prompt, "QUESTION");
  if (!block) return std::nullopt;
  for (const auto& q : builtin_questions()) {
    if (*block == q.question) return q.index;
  }
  return std::nullopt;
}

MockProvider& MockProvider::add_route(MockRoute route) {
  std::lock_guard lock(mu_);
  routes_.push_back(RouteState{std::move(route), 0});
  return *this;
}

MockProvider& MockProvider::set_handler(Handler handler) {
  std::lock_guard lock(mu_);
  handler_ = std::move(handler);
  return *this;
}

MockProvider& MockProvider::set_generator(std::uint64_t seed, Generator generator) {
  std::lock_guard lock(mu_);
  seed_ = seed;
  generator_ = std::move(generator);
  return *this;
}

std::string MockProvider::realize(const MockReply& reply) {
  switch (reply.kind) {
    case MockReply::Kind::kText: return reply.text;
    case MockReply::Kind::kTransient: throw TransientError("mock: scripted transient failure");
    case MockReply::Kind::kTimeout: throw TimeoutError("mock: scripted timeout");
    case MockReply::Kind::kAuth: throw AuthError("mock: scripted auth failure");
    case MockReply::Kind::kEmpty: return std::string();
  }
  return reply.text;
}

std::string MockProvider::send(const CompletionRequest& request) {
  const std::string_view prompt = request.prompt;
  std::unique_lock lock(mu_);
  ++calls_;
  prompts_.push_back(request.prompt);

  std::optional<PromptKind> kind;
  std::optional<std::optional<int>> question;
  for (auto& state : routes_) {
    const MockRoute& r = state.route;
    if (r.kind) {
      if (!kind) kind = classify_prompt(prompt);
      if (*kind != *r.kind) continue;
    }
    if (r.question) {
      if (!question) question = prompt_question_index(prompt);
      if (*question != r.question) continue;
    }
    if (!r.contains.empty() && prompt.find(r.contains) == std::string_view::npos) continue;
    if (r.replies.empty()) throw ScriptExhaustedError("mock: route has no replies");
    std::size_t slot = state.next;
    if (slot >= r.replies.size()) {
      switch (r.on_exhaust) {
        case OnExhaust::kError: throw ScriptExhaustedError("mock: route script exhausted");
        case OnExhaust::kRepeatLast: slot = r.replies.size() - 1; break;
        case OnExhaust::kCycle: slot %= r.replies.size(); break;
      }
    }
    ++state.next;
    const MockReply reply = r.replies[slot];
    lock.unlock();
    return realize(reply);
  }

  if (handler_) {
    Handler h = handler_;
    lock.unlock();
    return h(prompt);
  }
  if (generator_) {
    auto it = generator_calls_.find(prompt);
    if (it == generator_calls_.end()) it = generator_calls_.emplace(std::string(prompt), 0).first;
    const std::size_t call = it->second++;
    Generator g = generator_;
    const std::uint64_t seed = seed_;
    lock.unlock();
    return g(prompt, seed, call);
  }
  if (script_next_ >= script_.size()) throw ScriptExhaustedError("mock: script exhausted");
  const MockReply reply = script_[script_next_++];
  lock.unlock();
  return realize(reply);
}

std::size_t MockProvider::calls() const {
  std::lock_guard lock(mu_);
  return calls_;
}

std::vector<std::string> MockProvider::prompts() const {
  std::lock_guard lock(mu_);
  return prompts_;
}

std::string MockProvider::default_generator(std::string_view prompt, std::uint64_t seed,
                                            std::size_t call) {
  Rng rng(Rng::derive(seed ^ fnv1a(prompt), call));
  static constexpr std::string_view kScores[] = {"0", "0.5", "1"};
  // Mostly "needs improvement", like a strict reviewer.
  const double u = rng.uniform();
  const std::string_view score = u < 0.1 ? kScores[0] : (u < 0.75 ? kScores[1] : kScores[2]);
  std::ostringstream out;
  out << "Generated review (call " << call << ", token " << rng.below(1'000'000) << ").\n\n"
      << "1. Point to the specific sections that support the answer.\n"
      << "2. State assumptions and limitations explicitly.\n\n"
      << "Score: " << score << "\n";
  return out.str();
}

MockProvider::Handler length_rewarding_judge(std::size_t medium_words, std::size_t long_words) {
  return [=](std::string_view prompt) {
    const auto just = prompt_block(prompt, "JUSTIFICATION");
    const std::size_t words = just ? text::count_words(*just) : 0;
    std::string score = words < medium_words ? "0" : (words < long_words ? "0.5" : "1");
    return "The justification has " + std::to_string(words) +
           " words.\n1. Point to the exact sections.\n\nScore: " + score + "\n";
  };
}

MockProvider::Handler appending_attacker(std::string addition) {
  return [addition = std::move(addition)](std::string_view prompt) {
    const auto just = prompt_block(prompt, "JUSTIFICATION");
    std::string revised = just ? *just : std::string();
    if (!revised.empty()) revised.push_back(' ');
    revised += addition;
    return "<START OF REVISED JUSTIFICATION>\n" + revised + "\n<END OF REVISED JUSTIFICATION>\n";
  };
}

// ---------------------------------------------------------------------------
// Fixture directories

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

MockReply reply_from_json(const nlohmann::json& j, const std::filesystem::path& dir) {
  if (j.is_string()) return MockReply::of(j.get<std::string>());
  if (j.is_object() && j.contains("file")) {
    return MockReply::of(read_file(dir / j.at("file").get<std::string>()));
  }
  if (j.is_object() && j.contains("fail")) {
    const std::string f = j.at("fail").get<std::string>();
    if (f == "transient") return MockReply::failure(MockReply::Kind::kTransient);
    if (f == "timeout") return MockReply::failure(MockReply::Kind::kTimeout);
    if (f == "auth") return MockReply::failure(MockReply::Kind::kAuth);
    if (f == "empty") return MockReply::failure(MockReply::Kind::kEmpty);
    throw SchemaError("fail", 0, "unknown failure kind '" + f + "'");
  }
  throw SchemaError("replies", 0, "reply must be a string, {file} or {fail}");
}

std::vector<MockReply> replies_from_json(const nlohmann::json& arr, const std::filesystem::path& dir) {
  std::vector<MockReply> out;
  for (const auto& r : arr) out.push_back(reply_from_json(r, dir));
  return out;
}

PromptKind kind_from_string(const std::string& s) {
  for (PromptKind k : {PromptKind::kReview, PromptKind::kAttack, PromptKind::kExtract,
                       PromptKind::kCluster, PromptKind::kOther}) {
    if (to_string(k) == s) return k;
  }
  throw SchemaError("kind", 0, "unknown prompt kind '" + s + "'");
}

}  // namespace

std::shared_ptr<MockProvider> MockProvider::from_directory(const std::filesystem::path& dir) {
  const auto path = dir / "mock.json";
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("mock.json", 0, e.what());
  }
  auto mock = std::make_shared<MockProvider>(
      doc.contains("script") ? replies_from_json(doc["script"], dir) : std::vector<MockReply>{});
  try {
    for (const auto& r : doc.value("routes", nlohmann::json::array())) {
      MockRoute route;
      if (r.contains("kind")) route.kind = kind_from_string(r["kind"].get<std::string>());
      if (r.contains("question")) route.question = r["question"].get<int>();
      route.contains = r.value("contains", std::string());
      route.replies = replies_from_json(r.at("replies"), dir);
      const std::string ex = r.value("on_exhaust", std::string("error"));
      route.on_exhaust = ex == "repeat_last" ? OnExhaust::kRepeatLast
                         : ex == "cycle"     ? OnExhaust::kCycle
                                             : OnExhaust::kError;
      mock->add_route(std::move(route));
    }
    if (doc.contains("behaviors")) {
      std::map<PromptKind, Handler> by_kind;
      for (const auto& [k, v] : doc["behaviors"].items()) {
        const std::string name = v.is_string() ? v.get<std::string>() : v.at("name").get<std::string>();
        if (name == "length_judge") {
          by_kind[kind_from_string(k)] = length_rewarding_judge(
              v.is_object() ? v.value("medium_words", 12) : 12,
              v.is_object() ? v.value("long_words", 30) : 30);
        } else if (name == "appending_attacker") {
          by_kind[kind_from_string(k)] = v.is_object() && v.contains("addition")
                                             ? appending_attacker(v["addition"].get<std::string>())
                                             : appending_attacker();
        } else {
          throw SchemaError("behaviors", 0, "unknown behavior '" + name + "'");
        }
      }
      const bool has_seed = doc.contains("seed");
      const std::uint64_t seed = doc.value("seed", std::uint64_t{0});
      mock->set_handler([by_kind, has_seed, seed](std::string_view prompt) -> std::string {
        const auto it = by_kind.find(classify_prompt(prompt));
        if (it != by_kind.end()) return it->second(prompt);
        if (has_seed) return default_generator(prompt, seed, 0);
        throw ScriptExhaustedError("mock: no behavior for " + std::string(to_string(classify_prompt(prompt))) +
                                   " prompts");
      });
    } else if (doc.contains("seed")) {
      mock->set_generator(doc["seed"].get<std::uint64_t>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("mock.json", 0, e.what());
  }
  return mock;
}

}  // namespace ckassist
