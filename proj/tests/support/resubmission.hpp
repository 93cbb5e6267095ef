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

#include <algorithm>
#include <filesystem>
#include <vector>

#include "ckassist/analysis.hpp"
#include "ckassist/report.hpp"
#include "test_support.hpp"

namespace ckassist::testing {

/// All pairs of the bundled re-submission corpus, ordered by paper id.
inline std::vector<SubmissionPair> load_resubmission() {
  const auto root = fixture_dir() / "resubmission";
  std::vector<std::filesystem::path> ids;
  for (const auto& e : std::filesystem::directory_iterator(root / "first")) ids.push_back(e.path().filename());
  std::sort(ids.begin(), ids.end());
  std::vector<SubmissionPair> pairs;
  for (const auto& id : ids) {
    auto side = [&](const char* which) {
      const auto dir = root / which / id;
      return Submission{load_sidecar(dir / "checklist.sidecar"), report_from_json(read_file(dir / "report.json"))};
    };
    pairs.push_back({id.string(), side("first"), side("second")});
  }
  return pairs;
}

}  // namespace ckassist::testing
