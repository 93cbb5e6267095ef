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

#include "ckassist/report.hpp"

#include <sstream>

#include "ckassist/error.hpp"

namespace ckassist {

std::string_view verdict_class(Verdict verdict) {
  return verdict == Verdict::kNoConcerns ? "green" : "orange";
}

std::string html_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default: out += c;
    }
  }
  return out;
}

namespace {

constexpr std::string_view kStyle = R"(body{font-family:sans-serif;max-width:60em;margin:2em auto;line-height:1.4}
.banner{background:#fff3cd;border:1px solid #e0a800;padding:.6em 1em;margin-bottom:1em}
.question{border-left:6px solid #999;padding:.4em 1em;margin:1em 0}
.question.green{border-color:#2e7d32;background:#edf7ee}
.question.orange{border-color:#ef6c00;background:#fff4e5}
.review{white-space:pre-wrap}
.meta{color:#555;font-size:.9em})";

}  // namespace

std::string render_html(const ChecklistReport& report) {
  std::ostringstream out;
  out << "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n"
      << "<title>Checklist review: " << html_escape(report.paper_id) << "</title>\n"
      << "<style>\n" << kStyle << "\n</style>\n</head>\n<body>\n"
      << "<h1>Checklist review: " << html_escape(report.paper_id) << "</h1>\n";
  if (!report.warnings.empty()) {
    out << "<div class=\"banner\" role=\"alert\">\n";
    for (const auto& w : report.warnings) out << "<p>" << html_escape(w) << "</p>\n";
    out << "</div>\n";
  }
  out << "<p class=\"meta\">" << report.needs_improvement_count << " of " << report.outcomes.size()
      << " questions need improvement.</p>\n";
  for (const auto& o : report.outcomes) {
    const auto* q = o.question_index >= 1 && o.question_index <= kQuestionCount
                        ? &builtin_question(o.question_index)
                        : nullptr;
    out << "<section class=\"question " << verdict_class(o.verdict) << "\" id=\"q" << o.question_index
        << "\" title=\"raw score: " << to_string(o.raw_score) << "\" data-score=\""
        << to_string(o.raw_score) << "\">\n"
        << "<h2>" << o.question_index << ". " << (q ? html_escape(q->title) : std::string()) << "</h2>\n";
    if (q) out << "<p><strong>Question:</strong> " << html_escape(q->question) << "</p>\n";
    out << "<p><strong>Answer:</strong> " << to_string(o.answer) << "</p>\n"
        << "<p><strong>Justification:</strong> " << html_escape(o.justification) << "</p>\n"
        << "<div class=\"review\">" << html_escape(o.review_text) << "</div>\n"
        << "</section>\n";
  }
  out << "</body>\n</html>\n";
  return out.str();
}

CorpusSummary summarize_corpus(std::span<const ChecklistReport> reports) {
  if (reports.empty()) throw PreconditionError("summarize_corpus: empty corpus");
  CorpusSummary s;
  s.corpus_size = reports.size();
  for (const auto& r : reports) {
    for (const auto& o : r.outcomes) {
      if (o.question_index < 1 || o.question_index > kQuestionCount) {
        throw PreconditionError("summarize_corpus: question index out of range");
      }
      const auto q = static_cast<std::size_t>(o.question_index - 1);
      const auto a = static_cast<std::size_t>(o.answer);
      const auto v = static_cast<std::size_t>(o.verdict);
      ++s.answer_counts[q][a];
      ++s.verdict_counts[q][v];
      ++s.joint_counts[q][a][v];
    }
    ++s.needs_improvement_histogram[r.needs_improvement_count];
  }
  return s;
}

std::string summary_csv(const CorpusSummary& summary) {
  std::ostringstream out;
  out << "question_index,answer,verdict,count\n";
  for (std::size_t q = 0; q < summary.joint_counts.size(); ++q) {
    for (std::size_t a = 0; a < 4; ++a) {
      for (std::size_t v = 0; v < 2; ++v) {
        out << q + 1 << ',' << to_string(static_cast<AnswerValue>(a)) << ','
            << to_string(static_cast<Verdict>(v)) << ',' << summary.joint_counts[q][a][v] << '\n';
      }
    }
  }
  return out.str();
}

std::string histogram_csv(const CorpusSummary& summary) {
  std::ostringstream out;
  out << "needs_improvement_count,papers\n";
  for (int c = 0; c <= kQuestionCount; ++c) {
    const auto it = summary.needs_improvement_histogram.find(c);
    out << c << ',' << (it == summary.needs_improvement_histogram.end() ? 0 : it->second) << '\n';
  }
  return out.str();
}

std::string report_to_json(const ChecklistReport& report) {
  nlohmann::ordered_json j;
  j["paper_id"] = report.paper_id;
  auto& outcomes = j["outcomes"] = nlohmann::ordered_json::array();
  for (const auto& o : report.outcomes) {
    nlohmann::ordered_json e;
    e["index"] = o.question_index;
    e["answer"] = to_string(o.answer);
    e["justification"] = o.justification;
    e["review_text"] = o.review_text;
    e["raw_score"] = score_value(o.raw_score);
    e["verdict"] = to_string(o.verdict);
    e["attempts"] = o.attempts_used;
    outcomes.push_back(std::move(e));
  }
  j["needs_improvement_count"] = report.needs_improvement_count;
  j["warnings"] = report.warnings;
  return j.dump(2) + "\n";
}

ChecklistReport report_from_json(std::string_view json) {
  try {
    const auto j = nlohmann::json::parse(json);
    ChecklistReport r;
    r.paper_id = j.at("paper_id").get<std::string>();
    for (const auto& e : j.at("outcomes")) {
      ReviewOutcome o;
      o.question_index = e.at("index").get<int>();
      o.answer = parse_answer(e.at("answer").get<std::string>());
      o.justification = e.value("justification", std::string());
      o.review_text = e.at("review_text").get<std::string>();
      const auto score = raw_score_from_value(e.at("raw_score").get<double>());
      if (!score) throw SchemaError("raw_score", 0, "not one of 0, 0.5, 1");
      o.raw_score = *score;
      o.verdict = merge_verdict(*score);
      if (e.contains("verdict") && e["verdict"].get<std::string>() != to_string(o.verdict)) {
        throw SchemaError("verdict", 0, "inconsistent with raw_score");
      }
      o.attempts_used = e.value("attempts", 1);
      r.outcomes.push_back(std::move(o));
    }
    r.needs_improvement_count = 0;
    for (const auto& o : r.outcomes) r.needs_improvement_count += o.verdict == Verdict::kNeedsImprovement;
    r.warnings = j.value("warnings", std::vector<std::string>{});
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("report", 0, e.what());
  }
}

}  // namespace ckassist
