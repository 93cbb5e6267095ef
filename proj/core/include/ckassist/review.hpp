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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ckassist/checklist.hpp"
#include "ckassist/ingest.hpp"
#include "ckassist/llm_gateway.hpp"
#include "ckassist/stats.hpp"

namespace ckassist {

/// Judge rating on the three-level scale.
enum class RawScore { kZero, kHalf, kOne };

double score_value(RawScore score);
/// "0", "0.5" or "1".
std::string_view to_string(RawScore score);
std::optional<RawScore> raw_score_from_value(double value);

enum class Verdict { kNoConcerns, kNeedsImprovement };

std::string_view to_string(Verdict verdict);

/// 1 -> NoConcerns; 0.5 and 0 -> NeedsImprovement.
constexpr Verdict merge_verdict(RawScore score) {
  return score == RawScore::kOne ? Verdict::kNoConcerns : Verdict::kNeedsImprovement;
}

struct ParsedScore {
  RawScore score;
  std::string review_text;  // everything before the score line, right-trimmed
};

/// The last non-empty line must read "Score: <0|0.5|1>" (case-insensitive,
/// flexible spacing, optional trailing period). Throws ScoreParseError.
ParsedScore parse_score(std::string_view review);

/// Byte-exact instantiation of the review prompt asset.
std::string build_review_prompt(const ChecklistItem& item, const PaperDocument& paper);

struct ReviewOutcome {
  int question_index = 0;
  AnswerValue answer = AnswerValue::kTodo;
  std::string justification;
  std::string review_text;
  RawScore raw_score = RawScore::kZero;
  Verdict verdict = Verdict::kNeedsImprovement;
  int attempts_used = 1;

  friend bool operator==(const ReviewOutcome&, const ReviewOutcome&) = default;
};

/// Reviews one item. A completion without a valid score line is requested
/// again, up to cfg.max_retries extra times; attempts_used counts every
/// provider call including transport retries.
ReviewOutcome review_item(const ChecklistItem& item, const PaperDocument& paper, Provider& provider,
                          const ProviderConfig& cfg, const Sleeper& sleep = real_sleeper());

struct ChecklistReport {
  std::string paper_id;
  std::vector<ReviewOutcome> outcomes;  // 15, by question index
  int needs_improvement_count = 0;
  std::vector<std::string> warnings;

  friend bool operator==(const ChecklistReport&, const ChecklistReport&) = default;
};

/// Reviews all items on a pool of `parallelism` workers. Outcomes are
/// assembled in index order. Throws AggregateError naming every failed
/// question.
ChecklistReport review_checklist(std::string paper_id, const Checklist& checklist,
                                 const PaperDocument& paper, Provider& provider,
                                 const ProviderConfig& cfg, int parallelism = 15,
                                 const Sleeper& sleep = real_sleeper());

/// Raw scores from repeated reviews of one paper: scores[q][run], q = 0..14.
struct ScoreMatrix {
  std::string paper_id;
  std::vector<std::vector<double>> scores;

  /// Sample variance (ddof = 1) of each question's runs.
  std::vector<double> per_question_variance() const;
};

/// Reviews each question `runs` times (runs >= 2).
ScoreMatrix consistency_audit(std::string paper_id, const Checklist& checklist,
                              const PaperDocument& paper, Provider& provider,
                              const ProviderConfig& cfg, int runs, int parallelism = 15,
                              const Sleeper& sleep = real_sleeper());

struct ConsistencyResult {
  std::vector<stats::TestResult> per_question;  // 15
  std::vector<double> adjusted_p;               // BH over the 15 questions
};

/// Per question, tests whether run-to-run variation within papers is lower
/// than variation across papers, then applies BH across questions. Needs
/// matrices for at least two papers.
ConsistencyResult consistency_test(const std::vector<ScoreMatrix>& papers, std::size_t n_perm,
                                   std::uint64_t seed);

}  // namespace ckassist
