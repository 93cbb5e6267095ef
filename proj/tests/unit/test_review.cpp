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

#include "doctest.h"

#include <algorithm>
#include <cstdio>

#include "ckassist/error.hpp"
#include "ckassist/mock_provider.hpp"
#include "ckassist/redteam.hpp"
#include "ckassist/report.hpp"
#include "ckassist/review.hpp"
#include "score_cases.hpp"
#include "test_support.hpp"

using namespace ckassist;

TEST_SUITE("review") {

TEST_CASE("score protocol case table") {
  int index = 0;
  for (const auto& c : testing::kScoreCases) {
    CAPTURE(index);
    CHECK(testing::score_case_holds(c));
    ++index;
  }
  CHECK(index == 30);
}

TEST_CASE("review text excludes the score line") {
  const auto p = parse_score("Point one.\n\n2. Point two.\n\nScore: 0.5\n");
  CHECK(p.review_text == "Point one.\n\n2. Point two.");
  CHECK(parse_score("Score: 1").review_text.empty());
}

TEST_CASE("merge mapping is exhaustive") {
  CHECK(merge_verdict(RawScore::kOne) == Verdict::kNoConcerns);
  CHECK(merge_verdict(RawScore::kHalf) == Verdict::kNeedsImprovement);
  CHECK(merge_verdict(RawScore::kZero) == Verdict::kNeedsImprovement);
  static_assert(merge_verdict(RawScore::kOne) == Verdict::kNoConcerns);
  for (auto s : {RawScore::kZero, RawScore::kHalf, RawScore::kOne}) {
    CHECK(raw_score_from_value(score_value(s)) == s);
    CHECK(parse_score("Score: " + std::string(to_string(s))).score == s);
  }
  CHECK_FALSE(raw_score_from_value(0.25).has_value());
  CHECK(to_string(Verdict::kNoConcerns) == "NoConcerns");
}

TEST_CASE("review prompts match the golden files") {
  const auto paper = testing::fixture_paper();
  const auto c = testing::fixture_checklist();
  for (int q : {3, 7, 12}) {
    char name[32];
    std::snprintf(name, sizeof name, "review_q%02d.txt", q);
    CAPTURE(q);
    CHECK(build_review_prompt(c.at(q), paper) == testing::read_file(testing::golden_dir() / name));
  }
}

TEST_CASE("justification text is not rescanned for placeholders") {
  auto c = testing::fixture_checklist();
  c.at(1).justification = "literal {paper} and {g}";
  const auto prompt = build_review_prompt(c.at(1), testing::fixture_paper());
  CHECK(prompt.find("literal {paper} and {g}") != std::string::npos);
}

TEST_CASE("review_item retries a completion without a score") {
  MockProvider mock({MockReply::of("no score here"), MockReply::of("Better.\nScore: 1")});
  const auto c = testing::fixture_checklist();
  const auto out = review_item(c.at(1), testing::fixture_paper(), mock, testing::fast_config(), testing::no_sleep());
  CHECK(out.raw_score == RawScore::kOne);
  CHECK(out.verdict == Verdict::kNoConcerns);
  CHECK(out.attempts_used == 2);
  CHECK(out.review_text == "Better.");

  MockProvider never({MockReply::of("a"), MockReply::of("b"), MockReply::of("c")});
  CHECK_THROWS_AS(review_item(c.at(1), testing::fixture_paper(), never, testing::fast_config(2), testing::no_sleep()),
                  RetriesExhaustedError);
}

TEST_CASE("scripted review is deterministic across parallelism") {
  const auto paper = testing::fixture_paper();
  const auto c = testing::fixture_checklist();
  const auto dir = testing::fixture_dir() / "mock_review";
  auto m1 = MockProvider::from_directory(dir);
  auto m15 = MockProvider::from_directory(dir);
  const auto r1 = review_checklist("paper", c, paper, *m1, testing::fast_config(), 1, testing::no_sleep());
  const auto r15 = review_checklist("paper", c, paper, *m15, testing::fast_config(), 15, testing::no_sleep());
  CHECK(r1 == r15);
  CHECK(report_to_json(r1) == report_to_json(r15));
  CHECK(r1.needs_improvement_count == 12);
  REQUIRE(r1.outcomes.size() == 15);
  for (int q = 1; q <= 15; ++q) {
    const auto& o = r1.outcomes[q - 1];
    CHECK(o.question_index == q);
    CHECK(o.verdict == ((q == 3 || q == 9 || q == 15) ? Verdict::kNoConcerns : Verdict::kNeedsImprovement));
  }
}

TEST_CASE("failures are aggregated by question") {
  MockProvider mock;
  mock.set_handler([](std::string_view prompt) -> std::string {
    const auto q = prompt_question_index(prompt);
    if (q == 4 || q == 11) throw AuthError("denied");
    return "ok\nScore: 1";
  });
  try {
    review_checklist("p", testing::fixture_checklist(), testing::fixture_paper(), mock, testing::fast_config(), 4,
                     testing::no_sleep());
    FAIL("expected AggregateError");
  } catch (const AggregateError& e) {
    CHECK(e.failed_indices() == std::vector<int>{4, 11});
  }
}

TEST_CASE("truncation warnings travel into the report") {
  std::string big;
  for (int i = 0; i < 15100; ++i) big += "word ";
  const auto paper = ingest(RawDocument{SourceKind::kPlainText, big, ""});
  MockProvider mock;
  mock.set_generator(1);
  const auto r = review_checklist("p", testing::fixture_checklist(), paper, mock, testing::fast_config(), 15,
                                  testing::no_sleep());
  REQUIRE(r.warnings.size() == 1);
  CHECK(r.warnings[0] == truncation_warning(15100, 15000));
}

TEST_CASE("consistency audit and test") {
  const auto paper = testing::fixture_paper();
  const auto c = testing::fixture_checklist();
  MockProvider mock;
  mock.set_generator(5);
  const auto m = consistency_audit("a", c, paper, mock, testing::fast_config(), 4, 15, testing::no_sleep());
  REQUIRE(m.scores.size() == 15);
  for (const auto& row : m.scores) {
    CHECK(row.size() == 4);
    for (double s : row) CHECK((s == 0.0 || s == 0.5 || s == 1.0));
  }
  CHECK(m.per_question_variance().size() == 15);
  CHECK_THROWS_AS(consistency_audit("a", c, paper, mock, testing::fast_config(), 1), PreconditionError);

  // Paper A always 1, paper B always 0: zero within-paper variance everywhere.
  ScoreMatrix a{"a", std::vector<std::vector<double>>(15, {1, 1, 1})};
  ScoreMatrix b{"b", std::vector<std::vector<double>>(15, {0, 0, 0})};
  const auto t = consistency_test({a, b}, 2000, 7);
  REQUIRE(t.adjusted_p.size() == 15);
  std::vector<double> raw;
  for (const auto& r : t.per_question) raw.push_back(r.p_value);
  CHECK(t.adjusted_p == stats::bh_adjust(raw));
  for (double p : raw) CHECK(p == doctest::Approx(0.1).epsilon(0.3));
  CHECK_THROWS_AS(consistency_test({a}, 100, 1), PreconditionError);
}

}  // TEST_SUITE
