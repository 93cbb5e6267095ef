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

#include <string>

#include "ckassist/checklist.hpp"
#include "ckassist/error.hpp"
#include "ckassist/rng.hpp"
#include "test_support.hpp"

using namespace ckassist;

namespace {

Checklist random_checklist(Rng& rng) {
  static const AnswerValue kAnswers[] = {AnswerValue::kYes, AnswerValue::kNo, AnswerValue::kNA,
                                         AnswerValue::kTodo};
  static const char* kWords[] = {"See", "Section", "4.2", "and", "Appendix", "B;", "results", "(Table 3)."};
  std::vector<AnswerValue> answers;
  std::vector<std::string> justs;
  for (int i = 0; i < kQuestionCount; ++i) {
    answers.push_back(kAnswers[rng.below(4)]);
    std::string j;
    const auto n = rng.below(12);
    for (std::uint64_t w = 0; w < n; ++w) {
      if (!j.empty()) j += ' ';
      j += kWords[rng.below(8)];
    }
    justs.push_back(j);
  }
  return make_checklist(answers, justs);
}

}  // namespace

TEST_SUITE("checklist") {

TEST_CASE("builtin questions") {
  const auto& qs = builtin_questions();
  REQUIRE(qs.size() == 15);
  for (int i = 0; i < 15; ++i) {
    CHECK(qs[i].index == i + 1);
    CHECK_FALSE(qs[i].question.empty());
    CHECK_FALSE(qs[i].guidelines.empty());
  }
  CHECK(builtin_question(1).title == "Claims");
  CHECK(builtin_question(3).title == "Theory, Assumptions and Proofs");
  CHECK_THROWS_AS(builtin_question(0), PreconditionError);
  CHECK_THROWS_AS(builtin_question(16), PreconditionError);
}

TEST_CASE("answer tokens") {
  CHECK(parse_answer("Yes") == AnswerValue::kYes);
  CHECK(parse_answer(" [no] ") == AnswerValue::kNo);
  CHECK(parse_answer("[NA]") == AnswerValue::kNA);
  CHECK(parse_answer("N/A") == AnswerValue::kNA);
  CHECK(parse_answer("Not Applicable") == AnswerValue::kNA);
  CHECK(parse_answer("[TODO]") == AnswerValue::kTodo);
  CHECK_THROWS_AS(parse_answer("maybe"), UnknownAnswerError);
  CHECK(to_string(AnswerValue::kNA) == "NA");
  CHECK(to_string(AnswerValue::kTodo) == "TODO");
}

TEST_CASE("rendered fixture and sidecar agree") {
  const auto rendered = parse_checklist(testing::read_file(testing::fixture_dir() / "paper" / "checklist.txt"));
  const auto sidecar = testing::fixture_checklist();
  CHECK(rendered == sidecar);
  CHECK(sidecar.at(11).answer == AnswerValue::kNA);
  CHECK(sidecar.at(3).justification == "Proposition 1 is in Section 3 with its proof in Appendix A.");
}

TEST_CASE("render and sidecar round trips") {
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const Checklist c = random_checklist(rng);
    CHECK(parse_checklist(render_checklist(c)) == c);
    CHECK(parse_sidecar(to_sidecar(c)) == c);
    CHECK(looks_like_sidecar(to_sidecar(c)));
    CHECK_FALSE(looks_like_sidecar(render_checklist(c)));
  }
}

TEST_CASE("question index from heading or question text") {
  std::string text;
  for (const auto& q : builtin_questions()) {
    if (q.index % 2 == 0) text += std::to_string(q.index) + ". " + q.title + "\n";
    text += "Question: " + q.question + "\nAnswer: [Yes] Justification: ok " + std::to_string(q.index) + "\n\n";
  }
  const auto c = parse_checklist(text);
  for (int i = 1; i <= 15; ++i) CHECK(c.at(i).justification == "ok " + std::to_string(i));
}

TEST_CASE("multi-line justifications stop at the next marker") {
  Checklist c = make_checklist(std::vector<AnswerValue>(15, AnswerValue::kYes), std::vector<std::string>(15, "x"));
  std::string text = render_checklist(c);
  const std::string needle = "Justification: x\n\nQuestion 2:";
  const auto at = text.find(needle);
  REQUIRE(at != std::string::npos);
  text.replace(at, needle.size(), "Justification: first line\nsecond line\nGuidelines:\n- ignored\n\nQuestion 2:");
  const auto parsed = parse_checklist(text);
  CHECK(parsed.at(1).justification == "first line\nsecond line");
}

TEST_CASE("parse errors") {
  Checklist c = make_checklist(std::vector<AnswerValue>(15, AnswerValue::kNo), std::vector<std::string>(15, "j"));
  const std::string full = render_checklist(c);
  const auto cut = full.find("Question 15:");
  try {
    parse_checklist(full.substr(0, cut));
    FAIL("expected MissingQuestionsError");
  } catch (const MissingQuestionsError& e) {
    CHECK(e.missing() == std::vector<int>{15});
  }
  std::string bad = full;
  bad.replace(bad.find("Answer: [No]"), 12, "Answer: [Perhaps]");
  CHECK_THROWS_AS(parse_checklist(bad), UnknownAnswerError);

  std::string twice = full;
  twice.replace(twice.find("Answer: [No]"), 12, "Answer: [No]\nAnswer: [Yes]");
  CHECK_THROWS_AS(parse_checklist(twice), AmbiguousBlockError);

  std::string conflict = full + "Question 1: " + builtin_question(1).question + "\nAnswer: [Yes]\nJustification: j\n";
  CHECK_THROWS_AS(parse_checklist(conflict), AmbiguousBlockError);
  // An identical repeat is harmless.
  CHECK(parse_checklist(full + render_checklist(c)) == c);
}

TEST_CASE("sidecar errors carry field and line") {
  try {
    parse_sidecar("## 1\nAnswer: Yes\nJustification: a\n\n## 1\nAnswer: No\nJustification: b\n");
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(e.field() == "index");
    CHECK(e.line() == 5);
  }
  CHECK_THROWS_AS(parse_sidecar("## 0\nAnswer: Yes\nJustification: a\n"), SchemaError);
  CHECK_THROWS_AS(parse_sidecar("## 1\nJustification: a\n"), SchemaError);
  CHECK_THROWS_AS(parse_sidecar("## 1\nAnswer: Yes\nJustification: a\n"), SchemaError);
  CHECK_THROWS_AS(load_sidecar(testing::fixture_dir() / "nope.sidecar"), IoError);
}

TEST_CASE("make_checklist checks sizes") {
  CHECK_THROWS_AS(make_checklist({AnswerValue::kYes}, {"a"}), PreconditionError);
}

}  // TEST_SUITE
