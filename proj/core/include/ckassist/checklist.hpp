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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ckassist {

inline constexpr int kQuestionCount = 15;

enum class AnswerValue { kYes, kNo, kNA, kTodo };

std::string_view to_string(AnswerValue answer);

/// One entry of the built-in checklist asset.
struct QuestionSpec {
  int index = 0;
  std::string title;
  std::string question;
  std::string guidelines;
};

/// The 15 checklist questions with their guidelines, parsed once from the
/// embedded asset.
const std::vector<QuestionSpec>& builtin_questions();

const QuestionSpec& builtin_question(int index);

struct ChecklistItem {
  int index = 0;
  std::string title;
  std::string question;
  std::string guidelines;
  AnswerValue answer = AnswerValue::kTodo;
  std::string justification;

  friend bool operator==(const ChecklistItem&, const ChecklistItem&) = default;
};

struct Checklist {
  std::vector<ChecklistItem> items;  // exactly 15, indices 1..15 in order

  const ChecklistItem& at(int index) const;
  ChecklistItem& at(int index);

  friend bool operator==(const Checklist&, const Checklist&) = default;
};

/// Builds a complete checklist from builtin questions. `answers` and
/// `justifications` are indexed 0..14.
Checklist make_checklist(const std::vector<AnswerValue>& answers,
                         const std::vector<std::string>& justifications);

/// Case-insensitive; tolerates surrounding brackets and whitespace, and the
/// spellings "Not Applicable" and "N/A" for NA. Throws UnknownAnswerError.
AnswerValue parse_answer(std::string_view token);

/// Extracts answers and justifications from rendered checklist text using
/// line-leading "Question", "Answer", "Justification" markers. Blocks end at
/// the next Question, Answer, Review or Guidelines marker.
///
/// The question index comes from "Question N:" when numbered, otherwise from
/// a preceding "N. Title" heading, otherwise by matching the question text
/// against the built-in questions.
///
/// Throws MissingQuestionsError, UnknownAnswerError or AmbiguousBlockError.
Checklist parse_checklist(std::string_view text);

/// Renders the checklist in the "Question N: / Answer: [X] / Justification:"
/// layout accepted by parse_checklist.
std::string render_checklist(const Checklist& checklist);

/// Sidecar format: blocks of "## <index>", "Answer: <value>",
/// "Justification: <text until next block>". Throws SchemaError.
Checklist parse_sidecar(std::string_view text);
Checklist load_sidecar(const std::filesystem::path& path);
std::string to_sidecar(const Checklist& checklist);

/// True when the text uses sidecar block headers.
bool looks_like_sidecar(std::string_view text);

}  // namespace ckassist
