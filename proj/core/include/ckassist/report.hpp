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

#include <array>
#include <map>
#include <span>
#include <string>
#include <string_view>

#include "ckassist/review.hpp"

namespace ckassist {

/// CSS class used for a verdict's block: "green" or "orange".
std::string_view verdict_class(Verdict verdict);

std::string html_escape(std::string_view text);

/// Self-contained HTML page: warning banner, then one section per question.
std::string render_html(const ChecklistReport& report);

struct CorpusSummary {
  std::size_t corpus_size = 0;
  // [question 0..14][AnswerValue]
  std::array<std::array<int, 4>, kQuestionCount> answer_counts{};
  // [question 0..14][Verdict]
  std::array<std::array<int, 2>, kQuestionCount> verdict_counts{};
  // [question 0..14][AnswerValue][Verdict]
  std::array<std::array<std::array<int, 2>, 4>, kQuestionCount> joint_counts{};
  // needs_improvement_count -> number of papers
  std::map<int, int> needs_improvement_histogram;

  friend bool operator==(const CorpusSummary&, const CorpusSummary&) = default;
};

/// Throws PreconditionError on an empty corpus.
CorpusSummary summarize_corpus(std::span<const ChecklistReport> reports);

/// Columns question_index,answer,verdict,count; every combination listed.
std::string summary_csv(const CorpusSummary& summary);

/// Columns needs_improvement_count,papers for counts 0..15.
std::string histogram_csv(const CorpusSummary& summary);

std::string report_to_json(const ChecklistReport& report);
/// Throws SchemaError on malformed input.
ChecklistReport report_from_json(std::string_view json);

}  // namespace ckassist
