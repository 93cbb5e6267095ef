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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ckassist/checklist.hpp"
#include "ckassist/error.hpp"
#include "ckassist/ingest.hpp"
#include "ckassist/llm_gateway.hpp"
#include "ckassist/review.hpp"
#include "ckassist/stats.hpp"

namespace ckassist {

struct AttackConfig {
  int budget = 3;
  int eval_repeats = 3;
  double confidence = 0.95;
  /// Report the mean raw score (bootstrap CI) instead of the success rate.
  bool raw_mean = false;
  std::uint64_t seed = 0;  // bootstrap seed in raw-mean mode

  void validate() const;
};

/// Byte-exact instantiation of the attack prompt asset. `item.justification`
/// fills the justification slot.
std::string build_attack_prompt(const ChecklistItem& item, std::string_view review,
                                const PaperDocument& paper);

struct RevisedJustification {
  std::string text;
  bool fallback = false;  // delimiters were missing; whole completion used
};

/// Throws EmptyRevisionError when the delimited (or whole) text is empty.
RevisedJustification parse_revised_justification(std::string_view completion);

struct AttackRound {
  int round_index = 0;
  std::string justification;
  std::string review_text;
  RawScore raw_score = RawScore::kZero;
  bool fallback = false;
};

struct QuestionTrace {
  ChecklistItem item;  // original answer and justification
  std::string baseline_review;
  RawScore baseline_score = RawScore::kZero;
  std::vector<AttackRound> rounds;
  int selected_round = 0;  // 0 = baseline
  std::optional<std::string> error;  // set when a round failed; rounds are partial

  const std::string& justification_at(int round) const;
  RawScore score_at(int round) const;
};

/// Best round among the baseline and rounds 1..k on the raw scale; ties go
/// to the smallest round index.
int select_round(const QuestionTrace& trace, int k);

struct AttackTrace {
  std::string paper_id;
  std::string paper_sha256;
  PaperDocument paper;  // not serialized
  std::vector<QuestionTrace> questions;
  std::vector<AggregateError::Failure> failures;
};

/// Questions run in parallel; rounds within a question are sequential.
/// Failures are recorded in the trace rather than thrown.
AttackTrace run_attack(std::string paper_id, const Checklist& checklist, const PaperDocument& paper,
                       Provider& judge, const ProviderConfig& judge_cfg, Provider& attacker,
                       const ProviderConfig& attacker_cfg, const AttackConfig& cfg,
                       int parallelism = 15, const Sleeper& sleep = real_sleeper());

struct ArmStats {
  int successes = 0;
  int trials = 0;
  double mean = 0.0;
  stats::ConfidenceInterval ci;
};

struct QuestionEvaluation {
  int question_index = 0;
  ArmStats baseline;
  ArmStats attacked;
};

struct AttackEvaluation {
  int k = 0;  // rounds considered by the selection
  std::vector<QuestionEvaluation> questions;  // by question index
  ArmStats baseline_total;
  ArmStats attacked_total;
};

/// Re-reviews baseline and selected justifications cfg.eval_repeats times
/// each, pooling per question across traces. The round-0 review counts as the
/// first baseline repeat. Success means a NoConcerns verdict. Selection uses
/// rounds <= k (defaults to the budget).
AttackEvaluation evaluate_attack(std::span<const AttackTrace> traces, Provider& judge,
                                 const ProviderConfig& judge_cfg, const AttackConfig& cfg,
                                 std::optional<int> k = std::nullopt, int parallelism = 15,
                                 const Sleeper& sleep = real_sleeper());

/// evaluate_attack for k = 1..cfg.budget.
std::vector<AttackEvaluation> budget_sweep(std::span<const AttackTrace> traces, Provider& judge,
                                           const ProviderConfig& judge_cfg, const AttackConfig& cfg,
                                           int parallelism = 15,
                                           const Sleeper& sleep = real_sleeper());

std::string trace_to_json(const AttackTrace& trace);
/// Rebuilds a trace; `paper` must hash to the recorded digest.
AttackTrace trace_from_json(std::string_view json, const PaperDocument& paper);

/// Columns question_index,arm,successes,trials,mean,ci_lo,ci_hi.
std::string evaluation_csv(const AttackEvaluation& evaluation);
/// Same columns prefixed by k.
std::string sweep_csv(std::span<const AttackEvaluation> sweep);

}  // namespace ckassist
