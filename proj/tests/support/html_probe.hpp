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

#include <map>
#include <regex>
#include <string>

namespace ckassist::testing {

/// Question index -> colour class, read back from rendered HTML.
inline std::map<int, std::string> section_classes(const std::string& html) {
  static const std::regex kSection(R"re(<section class="question (green|orange)" id="q(\d+)")re");
  std::map<int, std::string> out;
  for (auto it = std::sregex_iterator(html.begin(), html.end(), kSection); it != std::sregex_iterator(); ++it) {
    out[std::stoi((*it)[2].str())] = (*it)[1].str();
  }
  return out;
}

inline bool has_banner(const std::string& html) {
  return html.find("<div class=\"banner\" role=\"alert\">") != std::string::npos;
}

}  // namespace ckassist::testing
