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

#include "json.hpp"

#include "ckassist/redteam.hpp"

#include <map>
#include <sstream>

#include "ckassist/assets.hpp"
#include "ckassist/hash.hpp"
#include "ckassist/parallel.hpp"
#include "ckassist/rng.hpp"
#include "ckassist/text.hpp"

namespace ckassist {

void AttackConfig::validate() const {
  if (budget < 1) throw PreconditionError("attack budget must be >= 1");
  if (eval_repeats < 1) throw PreconditionError("eval_repeats must be >= 1");
  if (!(confidence > 0.0 && confidence < 1.0)) throw PreconditionError("confidence must lie in (0, 1)");
}

std::string build_attack_prompt(const ChecklistItem& item, std::string_view review,
                                const PaperDocument& paper) {
  return text::substitute(assets::attack_prompt(), {{"{question}", item.question},
                                                    {"{answer}", to_string(item.answer)},
                                                    {"{justification}", item.justification},
                                                    {"{review}", review},
                                                    {"{guideline}", item.guidelines},
                                                    {"{paper}", paper.text}});
}

RevisedJustification parse_revised_justification(std::string_view completion) {
  static constexpr std::string_view kOpen = "<START OF REVISED JUSTIFICATION>";
  static constexpr std::string_view kClose = "<END OF REVISED JUSTIFICATION>";
  const auto b = completion.find(kOpen);
  if (b != std::string_view::npos) {
    const auto start = b + kOpen.size();
    const auto e = completion.find(kClose, start);
    const std::string_view inner =
        text::trim(completion.substr(start, e == std::string_view::npos ? std::string_view::npos : e - start));
    if (inner.empty()) throw EmptyRevisionError("revised justification is empty");
    return {std::string(inner), false};
  }
  const std::string_view whole = text::trim(completion);
  if (whole.empty()) throw EmptyRevisionError("attacker returned no text");
  return {std::string(whole), true};
}

const std::string& QuestionTrace::justification_at(int round) const {
  return round == 0 ? item.justification : rounds.at(static_cast<std::size_t>(round - 1)).justification;
}

RawScore QuestionTrace::score_at(int round) const {
  return round == 0 ? baseline_score : rounds.at(static_cast<std::size_t>(round - 1)).raw_score;
}

int select_round(const QuestionTrace& trace, int k) {
  const int last = std::min<int>(k, static_cast<int>(trace.rounds.size()));
  int best = 0;
  for (int r = 1; r <= last; ++r) {
    if (score_value(trace.score_at(r)) > score_value(trace.score_at(best))) best = r;
  }
  return best;
}

namespace {

RevisedJustification request_revision(Provider& attacker, const ProviderConfig& cfg,
                                      const std::string& prompt, const Sleeper& sleep) {
  std::string last_cause;
  int attempts = 0;
  for (int call = 0; call <= cfg.max_retries; ++call) {
    const auto response = complete(attacker, cfg, CompletionRequest{prompt}, sleep);
    attempts += response.attempts_used;
    try {
      return parse_revised_justification(response.text);
    } catch (const EmptyRevisionError& e) {
      last_cause = e.what();
    }
  }
  throw RetriesExhaustedError(attempts, last_cause);
}

}  // namespace

AttackTrace run_attack(std::string paper_id, const Checklist& checklist, const PaperDocument& paper,
                       Provider& judge, const ProviderConfig& judge_cfg, Provider& attacker,
                       const ProviderConfig& attacker_cfg, const AttackConfig& cfg, int parallelism,
                       const Sleeper& sleep) {
  cfg.validate();
  const auto& items = checklist.items;
  std::vector<std::optional<QuestionTrace>> slots(items.size());
  std::vector<std::string> errors(items.size());

  const auto raised = parallel_for_each(items.size(), parallelism, [&](std::size_t i) {
    const ChecklistItem& item = items[i];
    ReviewOutcome base;
    try {
      base = review_item(item, paper, judge, judge_cfg, sleep);
    } catch (const std::exception& e) {
      errors[i] = e.what();
      return;
    }
    QuestionTrace qt;
    qt.item = item;
    qt.baseline_review = base.review_text;
    qt.baseline_score = base.raw_score;
    try {
      ChecklistItem current = item;
      std::string latest_review = base.review_text;
      for (int r = 1; r <= cfg.budget; ++r) {
        const auto revised =
            request_revision(attacker, attacker_cfg, build_attack_prompt(current, latest_review, paper), sleep);
        current.justification = revised.text;
        const ReviewOutcome judged = review_item(current, paper, judge, judge_cfg, sleep);
        qt.rounds.push_back(AttackRound{r, revised.text, judged.review_text, judged.raw_score, revised.fallback});
        latest_review = judged.review_text;
      }
    } catch (const std::exception& e) {
      qt.error = e.what();
      errors[i] = e.what();
    }
    qt.selected_round = select_round(qt, cfg.budget);
    slots[i] = std::move(qt);
  });

  AttackTrace trace;
  trace.paper_id = std::move(paper_id);
  trace.paper = paper;
  trace.paper_sha256 = sha256_hex(paper.text);
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (raised[i]) {
      try {
        std::rethrow_exception(raised[i]);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
    if (slots[i]) trace.questions.push_back(std::move(*slots[i]));
    if (!errors[i].empty()) trace.failures.push_back({items[i].index, errors[i]});
  }
  return trace;
}

namespace {

struct ArmSamples {
  std::vector<double> scores;
};

ArmStats summarize_arm(const std::vector<double>& scores, const AttackConfig& cfg, std::uint64_t stream) {
  ArmStats a;
  a.trials = static_cast<int>(scores.size());
  for (double s : scores) a.successes += s == 1.0;
  if (a.trials == 0) {
    a.ci = {0.0, 1.0, cfg.confidence, stats::CiMethod::kClopperPearson};
    return a;
  }
  if (cfg.raw_mean) {
    a.mean = stats::mean(scores);
    a.ci = stats::bootstrap_ci(
        scores, [](std::span<const double> v) { return stats::mean(v); }, 2000, cfg.confidence,
        Rng::derive(cfg.seed, stream));
  } else {
    a.mean = static_cast<double>(a.successes) / a.trials;
    a.ci = stats::clopper_pearson(a.successes, a.trials, cfg.confidence);
  }
  return a;
}

}  // namespace

AttackEvaluation evaluate_attack(std::span<const AttackTrace> traces, Provider& judge,
                                 const ProviderConfig& judge_cfg, const AttackConfig& cfg,
                                 std::optional<int> k, int parallelism, const Sleeper& sleep) {
  cfg.validate();
  const int limit = k.value_or(cfg.budget);
  if (limit < 1) throw PreconditionError("k must be >= 1");

  struct Job {
    const AttackTrace* trace;
    const QuestionTrace* question;
    std::vector<double> baseline;
    std::vector<double> attacked;
  };
  std::vector<Job> jobs;
  for (const auto& t : traces) {
    for (const auto& q : t.questions) jobs.push_back({&t, &q, {}, {}});
  }
  const auto errors = parallel_for_each(jobs.size(), parallelism, [&](std::size_t j) {
    Job& job = jobs[j];
    const QuestionTrace& q = *job.question;
    const PaperDocument& paper = job.trace->paper;
    job.baseline.push_back(score_value(q.baseline_score));
    for (int r = 1; r < cfg.eval_repeats; ++r) {
      job.baseline.push_back(score_value(review_item(q.item, paper, judge, judge_cfg, sleep).raw_score));
    }
    ChecklistItem attacked = q.item;
    attacked.justification = q.justification_at(select_round(q, limit));
    for (int r = 0; r < cfg.eval_repeats; ++r) {
      job.attacked.push_back(score_value(review_item(attacked, paper, judge, judge_cfg, sleep).raw_score));
    }
  });
  std::vector<AggregateError::Failure> failures;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    if (!errors[j]) continue;
    try {
      std::rethrow_exception(errors[j]);
    } catch (const std::exception& e) {
      failures.push_back({jobs[j].question->item.index, jobs[j].trace->paper_id + ": " + e.what()});
    }
  }
  if (!failures.empty()) throw AggregateError(std::move(failures));

  std::map<int, std::pair<std::vector<double>, std::vector<double>>> pooled;
  std::vector<double> all_base;
  std::vector<double> all_att;
  for (const auto& job : jobs) {
    auto& [b, a] = pooled[job.question->item.index];
    b.insert(b.end(), job.baseline.begin(), job.baseline.end());
    a.insert(a.end(), job.attacked.begin(), job.attacked.end());
    all_base.insert(all_base.end(), job.baseline.begin(), job.baseline.end());
    all_att.insert(all_att.end(), job.attacked.begin(), job.attacked.end());
  }
  AttackEvaluation ev;
  ev.k = limit;
  for (const auto& [index, arms] : pooled) {
    const auto stream = static_cast<std::uint64_t>(index) * 2;
    ev.questions.push_back(QuestionEvaluation{index, summarize_arm(arms.first, cfg, stream),
                                              summarize_arm(arms.second, cfg, stream + 1)});
  }
  ev.baseline_total = summarize_arm(all_base, cfg, 1000);
  ev.attacked_total = summarize_arm(all_att, cfg, 1001);
  return ev;
}

std::vector<AttackEvaluation> budget_sweep(std::span<const AttackTrace> traces, Provider& judge,
                                           const ProviderConfig& judge_cfg, const AttackConfig& cfg,
                                           int parallelism, const Sleeper& sleep) {
  cfg.validate();
  for (const auto& t : traces) {
    if (!t.failures.empty()) throw PreconditionError("budget_sweep: trace for " + t.paper_id + " is incomplete");
  }
  std::vector<AttackEvaluation> out;
  for (int k = 1; k <= cfg.budget; ++k) {
    out.push_back(evaluate_attack(traces, judge, judge_cfg, cfg, k, parallelism, sleep));
  }
  return out;
}

std::string trace_to_json(const AttackTrace& trace) {
  nlohmann::ordered_json j;
  j["paper_id"] = trace.paper_id;
  j["paper_sha256"] = trace.paper_sha256;
  auto& qs = j["questions"] = nlohmann::ordered_json::array();
  for (const auto& q : trace.questions) {
    nlohmann::ordered_json e;
    e["index"] = q.item.index;
    e["answer"] = to_string(q.item.answer);
    e["baseline"] = {{"justification", q.item.justification},
                     {"review_text", q.baseline_review},
                     {"raw_score", score_value(q.baseline_score)}};
    auto& rounds = e["rounds"] = nlohmann::ordered_json::array();
    for (const auto& r : q.rounds) {
      rounds.push_back({{"round", r.round_index},
                        {"justification", r.justification},
                        {"review_text", r.review_text},
                        {"raw_score", score_value(r.raw_score)},
                        {"fallback", r.fallback}});
    }
    e["selected_round"] = q.selected_round;
    e["selected_score"] = score_value(q.score_at(q.selected_round));
    if (q.error) e["error"] = *q.error;
    qs.push_back(std::move(e));
  }
  auto& failures = j["failures"] = nlohmann::ordered_json::array();
  for (const auto& f : trace.failures) failures.push_back({{"index", f.index}, {"message", f.message}});
  return j.dump(2) + "\n";
}

namespace {

RawScore score_field(const nlohmann::json& j) {
  const auto s = raw_score_from_value(j.at("raw_score").get<double>());
  if (!s) throw SchemaError("raw_score", 0, "not one of 0, 0.5, 1");
  return *s;
}

}  // namespace

AttackTrace trace_from_json(std::string_view json, const PaperDocument& paper) {
  try {
    const auto j = nlohmann::json::parse(json);
    AttackTrace t;
    t.paper_id = j.at("paper_id").get<std::string>();
    t.paper_sha256 = j.at("paper_sha256").get<std::string>();
    if (sha256_hex(paper.text) != t.paper_sha256) {
      throw PreconditionError("paper text does not match the trace's paper_sha256");
    }
    t.paper = paper;
    for (const auto& e : j.at("questions")) {
      QuestionTrace q;
      const int index = e.at("index").get<int>();
      const auto& spec = builtin_question(index);
      q.item = ChecklistItem{index, spec.title, spec.question, spec.guidelines,
                             parse_answer(e.at("answer").get<std::string>()),
                             e.at("baseline").at("justification").get<std::string>()};
      q.baseline_review = e.at("baseline").at("review_text").get<std::string>();
      q.baseline_score = score_field(e.at("baseline"));
      for (const auto& r : e.at("rounds")) {
        q.rounds.push_back(AttackRound{r.at("round").get<int>(), r.at("justification").get<std::string>(),
                                       r.at("review_text").get<std::string>(), score_field(r),
                                       r.value("fallback", false)});
      }
      if (e.contains("error")) q.error = e["error"].get<std::string>();
      q.selected_round = select_round(q, static_cast<int>(q.rounds.size()));
      t.questions.push_back(std::move(q));
    }
    for (const auto& f : j.value("failures", nlohmann::json::array())) {
      t.failures.push_back({f.at("index").get<int>(), f.at("message").get<std::string>()});
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("trace", 0, e.what());
  }
}

namespace {

void arm_row(std::ostringstream& out, int index, std::string_view arm, const ArmStats& a) {
  out << index << ',' << arm << ',' << a.successes << ',' << a.trials << ',' << a.mean << ','
      << a.ci.lo << ',' << a.ci.hi << '\n';
}

void evaluation_rows(std::ostringstream& out, const AttackEvaluation& ev, bool with_k) {
  for (const auto& q : ev.questions) {
    if (with_k) out << ev.k << ',';
    arm_row(out, q.question_index, "baseline", q.baseline);
    if (with_k) out << ev.k << ',';
    arm_row(out, q.question_index, "attacked", q.attacked);
  }
}

}  // namespace

std::string evaluation_csv(const AttackEvaluation& evaluation) {
  std::ostringstream out;
  out.precision(6);
  out << "question_index,arm,successes,trials,mean,ci_lo,ci_hi\n";
  evaluation_rows(out, evaluation, false);
  return out.str();
}

std::string sweep_csv(std::span<const AttackEvaluation> sweep) {
  std::ostringstream out;
  out.precision(6);
  out << "k,question_index,arm,successes,trials,mean,ci_lo,ci_hi\n";
  for (const auto& ev : sweep) evaluation_rows(out, ev, true);
  return out.str();
}

}  // namespace ckassist
