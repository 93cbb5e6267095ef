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

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

namespace ckassist::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Entry point behind the `ckassist` binary. `args` excludes the program
/// name. Errors are printed to `err` as "error[<category>]: <message>".
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Number of HTTP requests attempted while a `--mock` run was active. Any
/// nonzero value means mock mode touched the network layer.
std::size_t sentinel_hits();

}  // namespace ckassist::cli
