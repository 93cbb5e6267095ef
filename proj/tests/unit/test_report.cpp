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

#include "ckassist/error.hpp"
#include "ckassist/report.hpp"
#include "ckassist/rng.hpp"
#include "html_probe.hpp"
#include "test_support.hpp"

using namespace ckassist;

namespace {

ChecklistReport random_report(Rng& rng, const std::string& id) {
  static const AnswerValue kAnswers[] = {AnswerValue::kYes, AnswerValue::kNo, AnswerValue::kNA, AnswerValue::kTodo};
  ChecklistReport r;
  r.paper_id = id;
  for (int q = 1; q <= 15; ++q) {
    const auto s = static_cast<RawScore>(rng.below(3));
    r.outcomes.push_back({q, kAnswers[rng.below(4)], "Just <" + std::to_string(q) + "> & \"more\"",
                          "Review of 'q'\nline 2", s, merge_verdict(s), 1 + static_cast<int>(rng.below(3))});
    if (merge_verdict(s) == Verdict::kNeedsImprovement) ++r.needs_improvement_count;
  }
  return r;
}

}  // namespace

TEST_SUITE("report") {

TEST_CASE("escaping") {
  CHECK(html_escape("<a href=\"x\">'&'</a>") == "&lt;a href=&quot;x&quot;&gt;&#39;&amp;&#39;&lt;/a&gt;");
  CHECK(verdict_class(Verdict::kNoConcerns) == "green");
  CHECK(verdict_class(Verdict::kNeedsImprovement) == "orange");
}

TEST_CASE("HTML colour classes follow verdicts") {
  Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const auto r = random_report(rng, "paper<" + std::to_string(trial) + ">");
    const std::string html = render_html(r);
    const auto classes = testing::section_classes(html);
    REQUIRE(classes.size() == 15);
    for (const auto& o : r.outcomes) CHECK(classes.at(o.question_index) == verdict_class(o.verdict));
    CHECK_FALSE(testing::has_banner(html));
    CHECK(html.find("Just <") == std::string::npos);
    CHECK(html.find("data-score=\"" + std::string(to_string(r.outcomes[0].raw_score)) + "\"") != std::string::npos);
  }
}

TEST_CASE("warnings render as a banner") {
  Rng rng(1);
  auto r = random_report(rng, "p");
  r.warnings = {truncation_warning(20000, 15000)};
  const std::string html = render_html(r);
  CHECK(testing::has_banner(html));
  CHECK(html.find("only the first 15000 words") != std::string::npos);
  CHECK(html.find("role=\"alert\"") < html.find("<section"));
}

TEST_CASE("JSON round trip") {
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    auto r = random_report(rng, "id" + std::to_string(trial));
    if (trial % 3 == 0) r.warnings.push_back("warned");
    const std::string json = report_to_json(r);
    CHECK(report_from_json(json) == r);
    CHECK(report_to_json(report_from_json(json)) == json);
    CHECK(json.back() == '\n');
  }
  CHECK_THROWS_AS(report_from_json("{"), SchemaError);
  CHECK_THROWS_AS(report_from_json(R"({"paper_id":"x","outcomes":[{"index":1,"answer":"Yes","review_text":"r","raw_score":0.3}]})"),
                  SchemaError);
  CHECK_THROWS_AS(
      report_from_json(
          R"({"paper_id":"x","outcomes":[{"index":1,"answer":"Yes","review_text":"r","raw_score":1,"verdict":"NeedsImprovement"}]})"),
      SchemaError);
}

TEST_CASE("corpus summary counts") {
  Rng rng(3);
  std::vector<ChecklistReport> corpus;
  for (int i = 0; i < 30; ++i) corpus.push_back(random_report(rng, "p" + std::to_string(i)));
  const auto s = summarize_corpus(corpus);
  CHECK(s.corpus_size == 30);
  for (std::size_t q = 0; q < 15; ++q) {
    int answers = 0, verdicts = 0, joint = 0;
    for (int a : s.answer_counts[q]) answers += a;
    for (int v : s.verdict_counts[q]) verdicts += v;
    for (const auto& row : s.joint_counts[q]) {
      for (int v : row) joint += v;
    }
    CHECK(answers == 30);
    CHECK(verdicts == 30);
    CHECK(joint == 30);
  }
  int papers = 0;
  for (const auto& [count, n] : s.needs_improvement_histogram) papers += n;
  CHECK(papers == 30);

  const std::string csv = summary_csv(s);
  CHECK(csv.starts_with("question_index,answer,verdict,count\n"));
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 15 * 4 * 2);
  const std::string hist = histogram_csv(s);
  CHECK(std::count(hist.begin(), hist.end(), '\n') == 17);
  CHECK_THROWS_AS(summarize_corpus(std::span<const ChecklistReport>{}), PreconditionError);
}

}  // TEST_SUITE
