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

#include "config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ckassist/error.hpp"
#include "json.hpp"

namespace ckassist::cli {

namespace {

using nlohmann::json;

void apply_provider(ProviderConfig& p, const json& j) {
  p.endpoint_url = j.value("endpoint_url", p.endpoint_url);
  p.model_id = j.value("model_id", p.model_id);
  p.temperature = j.value("temperature", p.temperature);
  p.top_p = j.value("top_p", p.top_p);
  p.n_samples = j.value("n_samples", p.n_samples);
  p.max_retries = j.value("max_retries", p.max_retries);
  p.timeout = std::chrono::milliseconds(j.value("timeout_ms", static_cast<std::int64_t>(p.timeout.count())));
  p.api_key_env = j.value("api_key_env", p.api_key_env);
  p.response_text_path = j.value("response_text_path", p.response_text_path);
  p.backoff_initial = std::chrono::milliseconds(
      j.value("backoff_initial_ms", static_cast<std::int64_t>(p.backoff_initial.count())));
  p.backoff_max =
      std::chrono::milliseconds(j.value("backoff_max_ms", static_cast<std::int64_t>(p.backoff_max.count())));
  p.max_concurrent_requests = j.value("max_concurrent_requests", p.max_concurrent_requests);
}

json provider_json(const ProviderConfig& p) {
  return json{{"endpoint_url", p.endpoint_url},
              {"model_id", p.model_id},
              {"temperature", p.temperature},
              {"top_p", p.top_p},
              {"n_samples", p.n_samples},
              {"max_retries", p.max_retries},
              {"timeout_ms", p.timeout.count()},
              {"api_key_env", p.api_key_env},
              {"response_text_path", p.response_text_path},
              {"backoff_initial_ms", p.backoff_initial.count()},
              {"backoff_max_ms", p.backoff_max.count()},
              {"max_concurrent_requests", p.max_concurrent_requests}};
}

template <typename T>
T parse_env_number(const std::string& name, const std::string& value) {
  std::istringstream in(value);
  T out{};
  if (!(in >> out) || !in.eof()) {
    throw PreconditionError("environment variable " + name + " is not a valid number: '" + value + "'");
  }
  return out;
}

}  // namespace

void RunConfig::validate() const {
  provider.validate();
  attacker.validate();
  ingest.validate();
  if (parallelism < 1) throw PreconditionError("parallelism must be >= 1");
  std::error_code ec;
  std::filesystem::create_directories(output_dir, ec);
  if (ec) throw PreconditionError("cannot create output directory " + output_dir.string() + ": " + ec.message());
  const auto probe = output_dir / ".ckassist-write-probe";
  {
    std::ofstream out(probe);
    if (!out) throw PreconditionError("output directory is not writable: " + output_dir.string());
  }
  std::filesystem::remove(probe, ec);
}

EnvLookup process_env() {
  return [](const std::string& name) -> std::optional<std::string> {
    if (const char* v = std::getenv(name.c_str())) return std::string(v);
    return std::nullopt;
  };
}

RunConfig resolve_config(const std::optional<std::filesystem::path>& config_file, const EnvLookup& env,
                         const FlagOverrides& flags) {
  RunConfig cfg;
  bool attacker_set = false;
  if (config_file) {
    std::ifstream in(*config_file);
    if (!in) throw IoError("cannot open config file " + config_file->string());
    json j;
    try {
      j = json::parse(in);
      if (j.contains("provider")) apply_provider(cfg.provider, j["provider"]);
      cfg.attacker = cfg.provider;
      if (j.contains("attacker")) {
        apply_provider(cfg.attacker, j["attacker"]);
        attacker_set = true;
      }
      if (j.contains("ingest")) cfg.ingest.word_cap = j["ingest"].value("word_cap", cfg.ingest.word_cap);
      cfg.parallelism = j.value("parallelism", cfg.parallelism);
      cfg.seed = j.value("seed", cfg.seed);
      if (j.contains("output_dir")) cfg.output_dir = j["output_dir"].get<std::string>();
    } catch (const json::exception& e) {
      throw SchemaError("config", 0, e.what());
    }
  }

  auto both = [&](auto apply) {
    apply(cfg.provider);
    if (!attacker_set) apply(cfg.attacker);
  };
  if (auto v = env("CKASSIST_ENDPOINT")) both([&](ProviderConfig& p) { p.endpoint_url = *v; });
  if (auto v = env("CKASSIST_MODEL")) both([&](ProviderConfig& p) { p.model_id = *v; });
  if (auto v = env("CKASSIST_MAX_RETRIES")) {
    const int n = parse_env_number<int>("CKASSIST_MAX_RETRIES", *v);
    both([&](ProviderConfig& p) { p.max_retries = n; });
  }
  if (auto v = env("CKASSIST_TIMEOUT_MS")) {
    const auto ms = std::chrono::milliseconds(parse_env_number<std::int64_t>("CKASSIST_TIMEOUT_MS", *v));
    both([&](ProviderConfig& p) { p.timeout = ms; });
  }
  if (auto v = env("CKASSIST_WORD_CAP")) cfg.ingest.word_cap = parse_env_number<std::size_t>("CKASSIST_WORD_CAP", *v);
  if (auto v = env("CKASSIST_PARALLELISM")) cfg.parallelism = parse_env_number<int>("CKASSIST_PARALLELISM", *v);
  if (auto v = env("CKASSIST_SEED")) cfg.seed = parse_env_number<std::uint64_t>("CKASSIST_SEED", *v);
  if (auto v = env("CKASSIST_OUT")) cfg.output_dir = *v;

  if (flags.endpoint) both([&](ProviderConfig& p) { p.endpoint_url = *flags.endpoint; });
  if (flags.model) both([&](ProviderConfig& p) { p.model_id = *flags.model; });
  if (flags.parallelism) cfg.parallelism = *flags.parallelism;
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.output_dir) cfg.output_dir = *flags.output_dir;
  return cfg;
}

std::string config_to_json(const RunConfig& cfg) {
  json j{{"provider", provider_json(cfg.provider)},
         {"attacker", provider_json(cfg.attacker)},
         {"ingest", {{"word_cap", cfg.ingest.word_cap}}},
         {"parallelism", cfg.parallelism},
         {"seed", cfg.seed},
         {"output_dir", cfg.output_dir.generic_string()}};
  return j.dump();
}

}  // namespace ckassist::cli
