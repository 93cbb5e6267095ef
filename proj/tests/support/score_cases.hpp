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

#include <optional>
#include <string_view>

#include "ckassist/error.hpp"
#include "ckassist/review.hpp"

namespace ckassist::testing {

struct ScoreCase {
  std::string_view text;
  std::optional<RawScore> score;            // expected score, or nullopt for an error
  ScoreParseError::Kind error = ScoreParseError::Kind::kMissing;
};

// Thirty reviews covering valid scores, layout noise, missing score lines and
// out-of-domain values.
inline constexpr ScoreCase kScoreCases[] = {
    {"Looks fine.\nScore: 1", RawScore::kOne},
    {"Needs work.\nScore: 0.5", RawScore::kHalf},
    {"Critical.\nScore: 0", RawScore::kZero},
    {"Text\nScore: 1\n", RawScore::kOne},
    {"Text\nScore: 0.5   \n\n\n", RawScore::kHalf},
    {"Text\nScore: 1.", RawScore::kOne},
    {"Text\nScore: 0.5.", RawScore::kHalf},
    {"Text\nscore: 0", RawScore::kZero},
    {"Text\nSCORE: 1", RawScore::kOne},
    {"Text\nScore:1", RawScore::kOne},
    {"Text\nScore :   0.5", RawScore::kHalf},
    {"Text\n   Score: 0  \t", RawScore::kZero},
    {"Text\r\nScore: 1\r\n", RawScore::kOne},
    {"Score: 1", RawScore::kOne},
    {"Score: 0 in line one\nmore\nScore: 0.5", RawScore::kHalf},
    {"Text\nScore: 1.0", RawScore::kOne},
    {"Text\nScore: 0.50", RawScore::kHalf},
    {"Review without any score.", std::nullopt, ScoreParseError::Kind::kMissing},
    {"", std::nullopt, ScoreParseError::Kind::kMissing},
    {"   \n\n", std::nullopt, ScoreParseError::Kind::kMissing},
    {"Score: 1\nThanks for reading.", std::nullopt, ScoreParseError::Kind::kMissing},
    {"Text\nScore:", std::nullopt, ScoreParseError::Kind::kMissing},
    {"Text\nScore 1", std::nullopt, ScoreParseError::Kind::kMissing},
    {"Text\nFinal score: 1", std::nullopt, ScoreParseError::Kind::kMissing},
    {"Text\nScore: 0.7", std::nullopt, ScoreParseError::Kind::kOutOfDomain},
    {"Text\nScore: 2", std::nullopt, ScoreParseError::Kind::kOutOfDomain},
    {"Text\nScore: -1", std::nullopt, ScoreParseError::Kind::kOutOfDomain},
    {"Text\nScore: high", std::nullopt, ScoreParseError::Kind::kOutOfDomain},
    {"Text\nScore: 1/2", std::nullopt, ScoreParseError::Kind::kOutOfDomain},
    {"Text\nScore: nan", std::nullopt, ScoreParseError::Kind::kOutOfDomain},
};

/// True when parse_score behaves as the case expects.
inline bool score_case_holds(const ScoreCase& c) {
  try {
    const auto parsed = parse_score(c.text);
    return c.score && parsed.score == *c.score;
  } catch (const ScoreParseError& e) {
    return !c.score && e.kind() == c.error;
  }
}

}  // namespace ckassist::testing
