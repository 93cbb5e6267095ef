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

#include <string>
#include <string_view>
#include <vector>

/// Text assets compiled into the library (see core/assets/).
namespace ckassist::assets {

std::string_view checklist_questions();
std::string_view review_prompt();
std::string_view attack_prompt();
std::string_view extract_prompt();
std::string_view cluster_prompt();

struct AssetChecksum {
  std::string name;
  std::string sha256;
};

/// SHA-256 of every embedded asset, in a fixed order. Written to run manifests.
std::vector<AssetChecksum> checksums();

}  // namespace ckassist::assets
