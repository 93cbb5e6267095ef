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

#include "ckassist/review.hpp"

#include <charconv>
#include <cmath>

#include "ckassist/assets.hpp"
#include "ckassist/error.hpp"
#include "ckassist/parallel.hpp"
#include "ckassist/rng.hpp"
#include "ckassist/text.hpp"

namespace ckassist {

double score_value(RawScore score) {
  switch (score) {
    case RawScore::kZero: return 0.0;
    case RawScore::kHalf: return 0.5;
    case RawScore::kOne: return 1.0;
  }
  return 0.0;
}

std::string_view to_string(RawScore score) {
  switch (score) {
    case RawScore::kZero: return "0";
    case RawScore::kHalf: return "0.5";
    case RawScore::kOne: return "1";
  }
  return "0";
}

std::optional<RawScore> raw_score_from_value(double value) {
  if (value == 0.0) return RawScore::kZero;
  if (value == 0.5) return RawScore::kHalf;
  if (value == 1.0) return RawScore::kOne;
  return std::nullopt;
}

std::string_view to_string(Verdict verdict) {
  return verdict == Verdict::kNoConcerns ? "NoConcerns" : "NeedsImprovement";
}

namespace {

std::string_view rtrim(std::string_view s) {
  while (!s.empty() && text::is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::string_view skip_spaces(std::string_view s) {
  while (!s.empty() && text::is_space(s.front())) s.remove_prefix(1);
  return s;
}

}  // namespace

ParsedScore parse_score(std::string_view review) {
  const std::string_view body = rtrim(review);
  if (body.empty()) throw ScoreParseError(ScoreParseError::Kind::kMissing, "review is empty");
  const auto nl = body.rfind('\n');
  const std::size_t line_start = nl == std::string_view::npos ? 0 : nl + 1;
  const std::string_view line = text::trim(body.substr(line_start));

  auto missing = [&] {
    return ScoreParseError(ScoreParseError::Kind::kMissing,
                           "final line is not a score line: '" + std::string(line) + "'");
  };
  if (!text::istarts_with(line, "score")) throw missing();
  std::string_view rest = skip_spaces(line.substr(5));
  if (rest.empty() || rest.front() != ':') throw missing();
  rest = skip_spaces(rest.substr(1));
  if (!rest.empty() && rest.back() == '.') rest.remove_suffix(1);
  rest = rtrim(rest);
  if (rest.empty()) throw missing();

  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), value);
  if (ec != std::errc() || ptr != rest.data() + rest.size() || !std::isfinite(value)) {
    throw ScoreParseError(ScoreParseError::Kind::kOutOfDomain,
                          "score value '" + std::string(rest) + "' is not a number");
  }
  const auto score = raw_score_from_value(value);
  if (!score) {
    throw ScoreParseError(ScoreParseError::Kind::kOutOfDomain,
                          "score value " + std::string(rest) + " is not one of 0, 0.5, 1");
  }
  return ParsedScore{*score, std::string(rtrim(body.substr(0, line_start)))};
}

std::string build_review_prompt(const ChecklistItem& item, const PaperDocument& paper) {
  return text::substitute(assets::review_prompt(), {{"{q}", item.question},
                                                    {"{a}", to_string(item.answer)},
                                                    {"{j}", item.justification},
                                                    {"{g}", item.guidelines},
                                                    {"{paper}", paper.text}});
}

ReviewOutcome review_item(const ChecklistItem& item, const PaperDocument& paper, Provider& provider,
                          const ProviderConfig& cfg, const Sleeper& sleep) {
  const CompletionRequest request{build_review_prompt(item, paper)};
  int attempts = 0;
  std::string last_cause;
  for (int call = 0; call <= cfg.max_retries; ++call) {
    const CompletionResponse response = complete(provider, cfg, request, sleep);
    attempts += response.attempts_used;
    try {
      ParsedScore parsed = parse_score(response.text);
      return ReviewOutcome{item.index,
                           item.answer,
                           item.justification,
                           std::move(parsed.review_text),
                           parsed.score,
                           merge_verdict(parsed.score),
                           attempts};
    } catch (const ScoreParseError& e) {
      last_cause = e.what();
    }
  }
  throw RetriesExhaustedError(attempts, "question " + std::to_string(item.index) + ": " + last_cause);
}

namespace {

void raise_failures(const std::vector<std::exception_ptr>& errors,
                    const std::function<int(std::size_t)>& index_of) {
  std::vector<AggregateError::Failure> failures;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const std::exception& e) {
      failures.push_back({index_of(i), e.what()});
    }
  }
  if (!failures.empty()) throw AggregateError(std::move(failures));
}

}  // namespace

ChecklistReport review_checklist(std::string paper_id, const Checklist& checklist,
                                 const PaperDocument& paper, Provider& provider,
                                 const ProviderConfig& cfg, int parallelism, const Sleeper& sleep) {
  const auto& items = checklist.items;
  std::vector<ReviewOutcome> outcomes(items.size());
  const auto errors = parallel_for_each(items.size(), parallelism, [&](std::size_t i) {
    outcomes[i] = review_item(items[i], paper, provider, cfg, sleep);
  });
  raise_failures(errors, [&](std::size_t i) { return items[i].index; });

  ChecklistReport report;
  report.paper_id = std::move(paper_id);
  report.outcomes = std::move(outcomes);
  for (const auto& o : report.outcomes) {
    if (o.verdict == Verdict::kNeedsImprovement) ++report.needs_improvement_count;
  }
  report.warnings = paper.warnings;
  return report;
}

std::vector<double> ScoreMatrix::per_question_variance() const {
  std::vector<double> out;
  out.reserve(scores.size());
  for (const auto& runs : scores) out.push_back(stats::mean_within_variance({runs}));
  return out;
}

ScoreMatrix consistency_audit(std::string paper_id, const Checklist& checklist,
                              const PaperDocument& paper, Provider& provider,
                              const ProviderConfig& cfg, int runs, int parallelism,
                              const Sleeper& sleep) {
  if (runs < 2) throw PreconditionError("consistency_audit: runs must be >= 2");
  const auto& items = checklist.items;
  const auto r = static_cast<std::size_t>(runs);
  ScoreMatrix m{std::move(paper_id), std::vector<std::vector<double>>(items.size(), std::vector<double>(r))};
  const auto errors = parallel_for_each(items.size() * r, parallelism, [&](std::size_t job) {
    const std::size_t q = job / r;
    m.scores[q][job % r] = score_value(review_item(items[q], paper, provider, cfg, sleep).raw_score);
  });
  raise_failures(errors, [&](std::size_t job) { return items[job / r].index; });
  return m;
}

ConsistencyResult consistency_test(const std::vector<ScoreMatrix>& papers, std::size_t n_perm,
                                   std::uint64_t seed) {
  if (papers.size() < 2) throw PreconditionError("consistency_test: need >= 2 papers");
  const std::size_t questions = papers.front().scores.size();
  ConsistencyResult result;
  std::vector<double> raw_p;
  for (std::size_t q = 0; q < questions; ++q) {
    std::vector<std::vector<double>> rows;
    for (const auto& p : papers) {
      if (p.scores.size() != questions) throw PreconditionError("consistency_test: matrix shapes differ");
      rows.push_back(p.scores[q]);
    }
    result.per_question.push_back(stats::perm_test_within_across(rows, n_perm, Rng::derive(seed, q)));
    raw_p.push_back(result.per_question.back().p_value);
  }
  result.adjusted_p = stats::bh_adjust(raw_p);
  return result;
}

}  // namespace ckassist
