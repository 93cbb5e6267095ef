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
#include <optional>
#include <string>

#include "ckassist/ingest.hpp"
#include "ckassist/llm_gateway.hpp"

namespace ckassist::cli {

struct RunConfig {
  ProviderConfig provider;
  ProviderConfig attacker;
  IngestConfig ingest;
  int parallelism = 15;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = "out";

  /// Throws PreconditionError; creates output_dir and checks it is writable.
  void validate() const;
};

/// Values given on the command line. Unset fields leave lower layers alone.
struct FlagOverrides {
  std::optional<std::string> endpoint;
  std::optional<std::string> model;
  std::optional<int> parallelism;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> output_dir;
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

EnvLookup process_env();

/// Defaults, then the JSON config file, then CKASSIST_* environment
/// variables, then flags. The attacker section inherits from the provider
/// section unless set explicitly.
RunConfig resolve_config(const std::optional<std::filesystem::path>& config_file,
                         const EnvLookup& env, const FlagOverrides& flags);

/// Snapshot for manifests. Never contains secrets, only the key's variable name.
std::string config_to_json(const RunConfig& cfg);

}  // namespace ckassist::cli
