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
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ckassist/checklist.hpp"
#include "ckassist/error.hpp"
#include "ckassist/llm_gateway.hpp"
#include "ckassist/review.hpp"
#include "ckassist/stats.hpp"

namespace ckassist {

// --- Re-submission diffs ----------------------------------------------------

struct Submission {
  Checklist checklist;
  std::optional<ChecklistReport> report;
};

struct SubmissionPair {
  std::string paper_id;
  Submission first;
  Submission second;
};

struct AnswerChange {
  int index = 0;
  AnswerValue from = AnswerValue::kTodo;
  AnswerValue to = AnswerValue::kTodo;
  friend bool operator==(const AnswerChange&, const AnswerChange&) = default;
};

struct JustificationChange {
  int index = 0;
  double word_ratio = 0.0;  // second words / max(1, first words)
  friend bool operator==(const JustificationChange&, const JustificationChange&) = default;
};

struct DiffRecord {
  std::string paper_id;
  std::vector<AnswerChange> answer_changes;
  std::vector<JustificationChange> justification_changes;
  /// Questions whose trimmed justification is identical in both checklists.
  std::vector<int> unchanged_indices;
};

DiffRecord diff_checklists(std::string paper_id, const Checklist& first, const Checklist& second);

/// Throws PreconditionError when attached reports name different papers.
DiffRecord diff_checklists(const SubmissionPair& pair);

/// Fraction of changed justifications with word_ratio >= each threshold.
/// Throws PreconditionError if there are no justification changes.
std::map<double, double> ratio_survival(std::span<const DiffRecord> diffs,
                                        std::span<const double> thresholds);

/// True when every answer in the checklist is TODO.
bool all_todo(const Checklist& checklist);

/// Drops pairs whose first checklist is entirely TODO.
std::vector<SubmissionPair> exclude_all_todo_first(std::span<const SubmissionPair> pairs);

enum class ChangeType { kNone, kJustification, kAnswer };
enum class Outcome { kImproved, kUnchanged, kWorse };

std::string_view to_string(ChangeType type);
std::string_view to_string(Outcome outcome);

struct TransitionCell {
  int count = 0;
  int total = 0;  // questions with this change type
  double rate = 0.0;
  stats::ConfidenceInterval ci;
};

struct TransitionTable {
  // [ChangeType][Outcome]
  std::array<std::array<TransitionCell, 3>, 3> cells{};

  const TransitionCell& at(ChangeType type, Outcome outcome) const {
    return cells[static_cast<std::size_t>(type)][static_cast<std::size_t>(outcome)];
  }
};

/// Per question: an answer change dominates a justification change. Improved
/// means NeedsImprovement -> NoConcerns. CIs resample whole pairs.
TransitionTable verdict_transitions(std::span<const SubmissionPair> pairs, std::size_t n_boot = 2000,
                                    double level = 0.95, std::uint64_t seed = 0);

/// Columns paper_id,question_index,kind,from,to,word_ratio.
std::string diffs_csv(std::span<const DiffRecord> diffs);

/// Columns change_type,outcome,count,total,rate,ci_lo,ci_hi.
std::string transitions_csv(const TransitionTable& table);

// --- Feedback extraction and clustering -------------------------------------

class UnparseableCompletionError : public ParseError {
 public:
  explicit UnparseableCompletionError(const std::string& message) : ParseError(message) {}
};

class UnassignedPointError : public ParseError {
 public:
  UnassignedPointError(std::vector<int> unassigned, std::vector<int> duplicated);
  const std::vector<int>& unassigned() const noexcept { return unassigned_; }
  const std::vector<int>& duplicated() const noexcept { return duplicated_; }

 private:
  std::vector<int> unassigned_;
  std::vector<int> duplicated_;
};

struct FeedbackPoint {
  std::string name;
  std::string description;
  friend bool operator==(const FeedbackPoint&, const FeedbackPoint&) = default;
};

struct FeedbackTheme {
  std::string name;
  std::string description;
  int frequency = 0;
  std::vector<std::string> subcategories;
  std::vector<int> members;  // 1-based point numbers
};

std::string build_extract_prompt(std::string_view question, std::string_view review);
/// Parses "POINT: name | description" lines inside the POINTS delimiters.
std::vector<FeedbackPoint> parse_feedback_points(std::string_view completion);

/// Retries unparseable completions up to cfg.max_retries times.
std::vector<FeedbackPoint> extract_feedback_points(std::string_view question, std::string_view review,
                                                   Provider& provider, const ProviderConfig& cfg,
                                                   const Sleeper& sleep = real_sleeper());

std::string format_points(std::span<const FeedbackPoint> points);
std::string build_cluster_prompt(std::string_view title, std::span<const FeedbackPoint> points);

/// Parses THEME / DESCRIPTION / SUBCATEGORIES / MEMBERS blocks and checks
/// that each of the n_points points belongs to exactly one theme. Themes are
/// returned by decreasing frequency, ties in reply order.
std::vector<FeedbackTheme> parse_themes(std::string_view completion, std::size_t n_points);

std::vector<FeedbackTheme> cluster_feedback(std::string_view title, std::span<const FeedbackPoint> points,
                                            Provider& provider, const ProviderConfig& cfg,
                                            const Sleeper& sleep = real_sleeper());

std::string themes_to_json(std::string_view title, std::span<const FeedbackTheme> themes);

/// Plain-text listing: the title, then per theme its name followed by
/// "- Frequency: N", "- Description: ..." and "- Subcategories: a; b" lines.
std::string format_themes(std::string_view title, std::span<const FeedbackTheme> themes);

}  // namespace ckassist
