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
#include <map>
#include <string>

#include "ckassist/analysis.hpp"
#include "ckassist/error.hpp"
#include "ckassist/mock_provider.hpp"
#include "ckassist/rng.hpp"
#include "resubmission.hpp"
#include "test_support.hpp"

using namespace ckassist;

namespace {

Checklist uniform(AnswerValue a, const std::string& j) {
  return make_checklist(std::vector<AnswerValue>(15, a), std::vector<std::string>(15, j));
}

std::string themes_reply(const std::vector<std::vector<int>>& groups) {
  std::string out;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    out += "THEME: Theme " + std::to_string(g + 1) + "\nDESCRIPTION: d\nSUBCATEGORIES: a; b\nMEMBERS: ";
    for (std::size_t i = 0; i < groups[g].size(); ++i) out += (i ? ", " : "") + std::to_string(groups[g][i]);
    out += "\n\n";
  }
  return out;
}

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("diff of two checklists") {
  auto a = uniform(AnswerValue::kYes, "one two");
  auto b = a;
  b.at(2).answer = AnswerValue::kNo;
  b.at(5).justification = "one two three four five six";
  b.at(7).justification = "  one two  ";  // same after trimming
  b.at(9).justification = "";
  const auto d = diff_checklists("p", a, b);
  REQUIRE(d.answer_changes.size() == 1);
  CHECK(d.answer_changes[0] == AnswerChange{2, AnswerValue::kYes, AnswerValue::kNo});
  REQUIRE(d.justification_changes.size() == 2);
  CHECK(d.justification_changes[0] == JustificationChange{5, 3.0});
  CHECK(d.justification_changes[1] == JustificationChange{9, 0.0});
  CHECK(d.unchanged_indices.size() == 13);

  const auto empty_first = diff_checklists("p", uniform(AnswerValue::kTodo, ""), uniform(AnswerValue::kYes, "a b c"));
  CHECK(empty_first.justification_changes[0].word_ratio == 3.0);
}

TEST_CASE("diff partitions questions") {
  Rng rng(6);
  const char* kJ[] = {"", "a", "a b", "a b c d", "See Section 4."};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<AnswerValue> a1, a2;
    std::vector<std::string> j1, j2;
    for (int i = 0; i < 15; ++i) {
      a1.push_back(static_cast<AnswerValue>(rng.below(4)));
      a2.push_back(static_cast<AnswerValue>(rng.below(4)));
      j1.push_back(kJ[rng.below(5)]);
      j2.push_back(kJ[rng.below(5)]);
    }
    const auto d = diff_checklists("x", make_checklist(a1, j1), make_checklist(a2, j2));
    CHECK(d.justification_changes.size() + d.unchanged_indices.size() == 15);
    for (const auto& c : d.justification_changes) CHECK(c.word_ratio >= 0.0);
    const auto same = diff_checklists("x", make_checklist(a1, j1), make_checklist(a1, j1));
    CHECK(same.answer_changes.empty());
    CHECK(same.justification_changes.empty());
  }
}

TEST_CASE("reports for different papers are rejected") {
  SubmissionPair p{"a", {uniform(AnswerValue::kYes, "x"), ChecklistReport{"a", {}, 0, {}}},
                   {uniform(AnswerValue::kYes, "x"), ChecklistReport{"b", {}, 0, {}}}};
  CHECK_THROWS_AS(diff_checklists(p), PreconditionError);
}

TEST_CASE("ratio survival") {
  std::vector<DiffRecord> diffs(1);
  diffs[0].justification_changes = {{1, 0.5}, {2, 1.0}, {3, 2.0}, {4, 4.0}};
  const std::vector<double> t = {1.0, 2.0, 3.0, 5.0};
  const auto s = ratio_survival(diffs, t);
  CHECK(s.at(1.0) == 0.75);
  CHECK(s.at(2.0) == 0.5);
  CHECK(s.at(3.0) == 0.25);
  CHECK(s.at(5.0) == 0.0);
  std::vector<DiffRecord> none(1);
  CHECK_THROWS_AS(ratio_survival(none, t), PreconditionError);
}

TEST_CASE("all-TODO exclusion") {
  std::vector<SubmissionPair> pairs = {{"a", {uniform(AnswerValue::kTodo, "")}, {uniform(AnswerValue::kYes, "x")}},
                                       {"b", {uniform(AnswerValue::kNo, "")}, {uniform(AnswerValue::kYes, "x")}}};
  CHECK(all_todo(pairs[0].first.checklist));
  const auto kept = exclude_all_todo_first(pairs);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].paper_id == "b");
}

TEST_CASE("re-submission fixture counts") {
  const auto all = testing::load_resubmission();
  CHECK(all.size() == 41);
  const auto pairs = exclude_all_todo_first(all);
  REQUIRE(pairs.size() == 40);
  std::vector<DiffRecord> diffs;
  for (const auto& p : pairs) diffs.push_back(diff_checklists(p));
  const auto answer_pairs = std::count_if(diffs.begin(), diffs.end(), [](const auto& d) { return !d.answer_changes.empty(); });
  const auto just_pairs =
      std::count_if(diffs.begin(), diffs.end(), [](const auto& d) { return !d.justification_changes.empty(); });
  CHECK(answer_pairs == 22);
  CHECK(just_pairs == 39);
  const std::vector<double> t = {2.0};
  CHECK(ratio_survival(diffs, t).at(2.0) > 0.5);
}

TEST_CASE("verdict transitions on the fixture") {
  const auto pairs = exclude_all_todo_first(testing::load_resubmission());
  const auto table = verdict_transitions(pairs, 2000, 0.95, 3);
  const auto& unchanged = table.at(ChangeType::kNone, Outcome::kUnchanged);
  CHECK(unchanged.total == 100);
  CHECK(unchanged.count == 81);
  CHECK(table.at(ChangeType::kNone, Outcome::kImproved).count == 7);
  CHECK(table.at(ChangeType::kNone, Outcome::kWorse).count == 12);
  for (std::size_t t = 0; t < 3; ++t) {
    double sum = 0;
    for (std::size_t o = 0; o < 3; ++o) {
      const auto& c = table.cells[t][o];
      sum += c.rate;
      CHECK(c.ci.lo <= c.rate + 1e-12);
      CHECK(c.ci.hi >= c.rate - 1e-12);
    }
    if (table.cells[t][0].total > 0) CHECK(sum == doctest::Approx(1.0));
  }
  int total = 0;
  for (const auto& row : table.cells) total += row[0].total;
  CHECK(total == 40 * 15);
  const auto again = verdict_transitions(pairs, 2000, 0.95, 3);
  CHECK(again.at(ChangeType::kNone, Outcome::kWorse).ci.lo == table.at(ChangeType::kNone, Outcome::kWorse).ci.lo);
  const std::string csv = transitions_csv(table);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 10);
}

TEST_CASE("transitions need reports") {
  std::vector<SubmissionPair> pairs = {{"a", {uniform(AnswerValue::kYes, "x")}, {uniform(AnswerValue::kYes, "x")}}};
  CHECK_THROWS_AS(verdict_transitions(pairs), PreconditionError);
}

TEST_CASE("diffs CSV") {
  auto a = uniform(AnswerValue::kYes, "one");
  auto b = a;
  b.at(3).answer = AnswerValue::kNA;
  b.at(3).justification = "one two";
  const std::vector<DiffRecord> d = {diff_checklists("p1", a, b)};
  CHECK(diffs_csv(d) == "paper_id,question_index,kind,from,to,word_ratio\np1,3,answer,Yes,NA,\np1,3,justification,,,2\n");
}

TEST_CASE("feedback point grammar") {
  const auto pts = parse_feedback_points("noise\n<START OF POINTS>\nPOINT: A | first\n\npoint: B|second | more\n<END OF POINTS>");
  REQUIRE(pts.size() == 2);
  CHECK(pts[0] == FeedbackPoint{"A", "first"});
  CHECK(pts[1] == FeedbackPoint{"B", "second | more"});
  CHECK_THROWS_AS(parse_feedback_points("POINT: A | b"), UnparseableCompletionError);
  CHECK_THROWS_AS(parse_feedback_points("<START OF POINTS>\n<END OF POINTS>"), UnparseableCompletionError);
  CHECK_THROWS_AS(parse_feedback_points("<START OF POINTS>\nA | b\n<END OF POINTS>"), UnparseableCompletionError);
  CHECK_THROWS_AS(parse_feedback_points("<START OF POINTS>\nPOINT: no bar\n<END OF POINTS>"), UnparseableCompletionError);
  CHECK(format_points(pts) == "1. A: first\n2. B: second | more");
}

TEST_CASE("theme grammar and partition check") {
  const auto themes = parse_themes(themes_reply({{1}, {2, 3, 4}, {5, 6}}), 6);
  REQUIRE(themes.size() == 3);
  CHECK(themes[0].name == "Theme 2");
  CHECK(themes[0].frequency == 3);
  CHECK(themes[0].subcategories == std::vector<std::string>{"a", "b"});
  CHECK(themes[2].name == "Theme 1");
  CHECK(parse_themes("THEME: X\nMEMBERS: 1-4, 5\n", 5)[0].frequency == 5);
  try {
    parse_themes(themes_reply({{1, 2}, {2}}), 4);
    FAIL("expected UnassignedPointError");
  } catch (const UnassignedPointError& e) {
    CHECK(e.unassigned() == std::vector<int>{3, 4});
    CHECK(e.duplicated() == std::vector<int>{2});
  }
  CHECK_THROWS_AS(parse_themes("no themes", 1), UnparseableCompletionError);
  CHECK_THROWS_AS(parse_themes("THEME: X\n", 1), UnparseableCompletionError);
  CHECK_THROWS_AS(parse_themes("THEME: X\nMEMBERS: 0\n", 1), UnparseableCompletionError);
  CHECK_THROWS_AS(parse_themes("THEME: X\nMEMBERS: 3-1\n", 3), UnparseableCompletionError);
}

TEST_CASE("clustering conserves points over random partitions") {
  Rng rng(31);
  for (int run = 0; run < 50; ++run) {
    const std::size_t n = 1 + rng.below(60);
    std::vector<FeedbackPoint> points;
    for (std::size_t i = 0; i < n; ++i) points.push_back({"p" + std::to_string(i), "d"});
    const std::size_t k = 1 + rng.below(std::min<std::size_t>(n, 6));
    std::vector<std::vector<int>> groups(k);
    for (std::size_t i = 1; i <= n; ++i) groups[rng.below(k)].push_back(static_cast<int>(i));
    MockProvider mock({MockReply::of("garbage"), MockReply::of(themes_reply(groups))});
    const auto themes = cluster_feedback("Claims", points, mock, testing::fast_config(), testing::no_sleep());
    int sum = 0;
    for (const auto& t : themes) sum += t.frequency;
    CHECK(sum == static_cast<int>(n));
    CHECK(std::is_sorted(themes.begin(), themes.end(),
                         [](const auto& a, const auto& b) { return a.frequency > b.frequency; }));
  }
}

TEST_CASE("extraction with the fixture mock") {
  const auto dir = testing::fixture_dir() / "extraction";
  const auto mock = MockProvider::from_directory(dir);
  const auto review = testing::read_file(dir / "review_q12.txt");
  const auto pts = extract_feedback_points(builtin_question(12).question, review, *mock, testing::fast_config(),
                                           testing::no_sleep());
  REQUIRE(pts.size() == 5);
  CHECK(pts[0].name.find("license") != std::string::npos);
  const auto themes = cluster_feedback("Licenses", pts, *mock, testing::fast_config(), testing::no_sleep());
  CHECK(themes.size() == 3);
  const std::string text = format_themes("Licenses", themes);
  CHECK(text.find("- Frequency: 2\n") != std::string::npos);
  const auto prompt = build_extract_prompt("Q?", review);
  CHECK(classify_prompt(prompt) == PromptKind::kExtract);
  CHECK(classify_prompt(build_cluster_prompt("T", pts)) == PromptKind::kCluster);
  CHECK_THROWS_AS(extract_feedback_points("q", "   ", *mock, testing::fast_config(), testing::no_sleep()),
                  PreconditionError);
}

TEST_CASE("claims replay fixture") {
  const auto dir = testing::fixture_dir() / "clustering" / "claims";
  const auto raw = testing::read_file(dir / "points.txt");
  const auto points = parse_feedback_points("<START OF POINTS>\n" + raw + "<END OF POINTS>\n");
  CHECK(points.size() == 241);
  const auto mock = MockProvider::from_directory(dir);
  const auto themes = cluster_feedback("Claims", points, *mock, testing::fast_config(), testing::no_sleep());
  REQUIRE(themes.size() == 4);
  CHECK(themes[0].frequency == 122);
  const std::string text = format_themes("Claims", themes);
  CHECK(text.find("- Frequency: 122\n") != std::string::npos);
  CHECK(themes_to_json("Claims", themes).find("\"frequency\": 122") != std::string::npos);
}

}  // TEST_SUITE
