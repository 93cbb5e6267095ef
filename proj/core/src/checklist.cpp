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

#include "ckassist/checklist.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <utility>

#include "ckassist/assets.hpp"
#include "ckassist/error.hpp"
#include "ckassist/text.hpp"

namespace ckassist {

std::string_view to_string(AnswerValue answer) {
  switch (answer) {
    case AnswerValue::kYes: return "Yes";
    case AnswerValue::kNo: return "No";
    case AnswerValue::kNA: return "NA";
    case AnswerValue::kTodo: return "TODO";
  }
  return "TODO";
}

namespace {

std::optional<int> parse_int(std::string_view s) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::string trimmed_join(const std::vector<std::string_view>& lines) {
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i) out.push_back('\n');
    out.append(lines[i]);
  }
  return std::string(text::trim(out));
}

std::vector<QuestionSpec> parse_question_asset(std::string_view asset) {
  std::vector<QuestionSpec> out;
  QuestionSpec* cur = nullptr;
  std::vector<std::string_view> guideline_lines;
  bool in_guidelines = false;
  auto finish = [&] {
    if (cur) cur->guidelines = trimmed_join(guideline_lines);
    guideline_lines.clear();
    in_guidelines = false;
  };
  for (std::string_view line : text::split_lines(asset)) {
    if (line.starts_with("## ")) {
      finish();
      out.push_back(QuestionSpec{});
      cur = &out.back();
      cur->index = parse_int(text::trim(line.substr(3))).value_or(0);
    } else if (cur && !in_guidelines && line.starts_with("Title: ")) {
      cur->title = std::string(line.substr(7));
    } else if (cur && !in_guidelines && line.starts_with("Question: ")) {
      cur->question = std::string(line.substr(10));
    } else if (cur && line == "Guidelines:") {
      in_guidelines = true;
    } else if (in_guidelines) {
      guideline_lines.push_back(line);
    }
  }
  finish();
  return out;
}

}  // namespace

const std::vector<QuestionSpec>& builtin_questions() {
  static const std::vector<QuestionSpec> questions = [] {
    auto parsed = parse_question_asset(assets::checklist_questions());
    if (parsed.size() != kQuestionCount) throw ParseError("checklist asset is corrupt");
    for (int i = 0; i < kQuestionCount; ++i) {
      if (parsed[i].index != i + 1 || parsed[i].question.empty() || parsed[i].guidelines.empty()) {
        throw ParseError("checklist asset is corrupt");
      }
    }
    return parsed;
  }();
  return questions;
}

const QuestionSpec& builtin_question(int index) {
  if (index < 1 || index > kQuestionCount) {
    throw PreconditionError("question index out of range: " + std::to_string(index));
  }
  return builtin_questions()[index - 1];
}

const ChecklistItem& Checklist::at(int index) const {
  if (index < 1 || index > static_cast<int>(items.size())) {
    throw PreconditionError("question index out of range: " + std::to_string(index));
  }
  return items[index - 1];
}

ChecklistItem& Checklist::at(int index) {
  return const_cast<ChecklistItem&>(std::as_const(*this).at(index));
}

namespace {

ChecklistItem item_from_builtin(int index, AnswerValue answer, std::string justification) {
  const auto& q = builtin_question(index);
  return ChecklistItem{index, q.title, q.question, q.guidelines, answer, std::move(justification)};
}

}  // namespace

Checklist make_checklist(const std::vector<AnswerValue>& answers,
                         const std::vector<std::string>& justifications) {
  if (answers.size() != kQuestionCount || justifications.size() != kQuestionCount) {
    throw PreconditionError("make_checklist needs 15 answers and 15 justifications");
  }
  Checklist c;
  for (int i = 1; i <= kQuestionCount; ++i) {
    c.items.push_back(item_from_builtin(i, answers[i - 1], justifications[i - 1]));
  }
  return c;
}

AnswerValue parse_answer(std::string_view token) {
  std::string_view t = text::trim(token);
  if (t.size() >= 2 && t.front() == '[' && t.back() == ']') t = text::trim(t.substr(1, t.size() - 2));
  if (text::iequals(t, "yes")) return AnswerValue::kYes;
  if (text::iequals(t, "no")) return AnswerValue::kNo;
  if (text::iequals(t, "na") || text::iequals(t, "n/a") || text::iequals(t, "not applicable")) {
    return AnswerValue::kNA;
  }
  if (text::iequals(t, "todo")) return AnswerValue::kTodo;
  throw UnknownAnswerError(std::string(token));
}

// ---------------------------------------------------------------------------
// Rendered-text grammar

namespace {

enum class MarkerKind { kQuestion, kAnswer, kJustification, kReview, kGuidelines };

struct Marker {
  MarkerKind kind;
  std::optional<int> number;  // "Question 3:"
  std::string_view rest;      // text after the colon
};

std::optional<Marker> match_marker(std::string_view line) {
  std::string_view s = line;
  while (!s.empty() && text::is_space(s.front())) s.remove_prefix(1);
  static constexpr std::pair<std::string_view, MarkerKind> kWords[] = {
      {"question", MarkerKind::kQuestion},           {"answer", MarkerKind::kAnswer},
      {"justification", MarkerKind::kJustification}, {"review", MarkerKind::kReview},
      {"guidelines", MarkerKind::kGuidelines},
  };
  for (const auto& [word, kind] : kWords) {
    if (!text::istarts_with(s, word)) continue;
    std::string_view after = s.substr(word.size());
    std::optional<int> number;
    if (kind == MarkerKind::kQuestion) {
      std::size_t i = 0;
      while (i < after.size() && (after[i] == ' ' || after[i] == '\t')) ++i;
      std::size_t j = i;
      while (j < after.size() && after[j] >= '0' && after[j] <= '9') ++j;
      if (j > i) {
        number = parse_int(after.substr(i, j - i));
        after = after.substr(j);
      }
    }
    while (!after.empty() && (after.front() == ' ' || after.front() == '\t')) after.remove_prefix(1);
    if (after.empty() || after.front() != ':') continue;
    return Marker{kind, number, after.substr(1)};
  }
  return std::nullopt;
}

std::string collapse_lower(std::string_view s) {
  std::string out;
  bool space = false;
  for (char c : text::trim(s)) {
    if (text::is_space(c)) {
      space = true;
      continue;
    }
    if (space && !out.empty()) out.push_back(' ');
    space = false;
    out.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c);
  }
  return out;
}

std::optional<int> match_question_text(std::string_view question) {
  const std::string needle = collapse_lower(question);
  if (needle.size() < 20) return std::nullopt;
  for (const auto& q : builtin_questions()) {
    const std::string ref = collapse_lower(q.question);
    const std::size_t n = std::min<std::size_t>({ref.size(), needle.size(), 60});
    if (needle.compare(0, n, ref, 0, n) == 0) return q.index;
  }
  return std::nullopt;
}

// "4. Experimental Result Reproducibility" style headings.
std::optional<int> match_title_heading(std::string_view line) {
  const std::string_view s = text::trim(line);
  std::size_t j = 0;
  while (j < s.size() && s[j] >= '0' && s[j] <= '9') ++j;
  if (j == 0 || j >= s.size() || s[j] != '.') return std::nullopt;
  const auto number = parse_int(s.substr(0, j));
  if (!number || *number < 1 || *number > kQuestionCount) return std::nullopt;
  const std::string title = collapse_lower(s.substr(j + 1));
  const std::string ref = collapse_lower(builtin_question(*number).title);
  if (title.empty() || ref.compare(0, title.size(), title) != 0) return std::nullopt;
  return number;
}

struct Block {
  std::optional<int> index;
  std::optional<int> heading_index;
  std::vector<std::string_view> question;
  std::optional<std::string> answer;
  std::optional<std::vector<std::string_view>> justification;
  int answer_markers = 0;
  int justification_markers = 0;
};

// Splits "Answer: [Yes] Justification: ..." written on one line.
std::pair<std::string_view, std::optional<std::string_view>> split_inline_justification(
    std::string_view rest) {
  const std::string lower = text::to_lower(rest);
  const std::size_t at = lower.find("justification:");
  if (at == std::string::npos) return {rest, std::nullopt};
  return {rest.substr(0, at), rest.substr(at + std::string_view("justification:").size())};
}

}  // namespace

Checklist parse_checklist(std::string_view input) {
  std::vector<Block> blocks;
  std::optional<int> pending_heading;
  enum class Field { kNone, kQuestion, kAnswer, kJustification, kIgnored } field = Field::kNone;

  bool previous_blank = true;
  for (std::string_view line : text::split_lines(input)) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const bool after_blank = std::exchange(previous_blank, text::trim(line).empty());
    const auto marker = match_marker(line);
    if (!marker) {
      // Inside a justification only the next question's heading, set off by a
      // blank line, ends the block; other numbered lines belong to the text.
      auto h = match_title_heading(line);
      if (h && field == Field::kJustification && !blocks.empty()) {
        const Block& cur = blocks.back();
        const auto idx = cur.index ? cur.index : cur.heading_index;
        if (!after_blank || (idx && *h != *idx + 1)) h.reset();
      }
      if (h) {
        pending_heading = h;
        field = Field::kNone;
        continue;
      }
      if (blocks.empty()) continue;
      Block& b = blocks.back();
      if (field == Field::kQuestion) b.question.push_back(line);
      if (field == Field::kJustification) b.justification->push_back(line);
      if (field == Field::kAnswer && !text::trim(line).empty()) {
        b.answer = *b.answer + "\n" + std::string(line);
      }
      continue;
    }
    switch (marker->kind) {
      case MarkerKind::kQuestion: {
        Block b;
        b.index = marker->number;
        b.heading_index = pending_heading;
        pending_heading.reset();
        b.question.push_back(marker->rest);
        blocks.push_back(std::move(b));
        field = Field::kQuestion;
        break;
      }
      case MarkerKind::kAnswer: {
        if (blocks.empty()) {
          field = Field::kIgnored;
          break;
        }
        Block& b = blocks.back();
        ++b.answer_markers;
        const auto [answer, inline_just] = split_inline_justification(marker->rest);
        b.answer = std::string(answer);
        field = Field::kAnswer;
        if (inline_just) {
          ++b.justification_markers;
          b.justification.emplace(std::vector<std::string_view>{*inline_just});
          field = Field::kJustification;
        }
        break;
      }
      case MarkerKind::kJustification: {
        if (blocks.empty()) {
          field = Field::kIgnored;
          break;
        }
        Block& b = blocks.back();
        ++b.justification_markers;
        b.justification.emplace(std::vector<std::string_view>{marker->rest});
        field = Field::kJustification;
        break;
      }
      case MarkerKind::kReview:
      case MarkerKind::kGuidelines:
        field = Field::kIgnored;
        break;
    }
  }

  std::map<int, ChecklistItem> found;
  int last_index = 0;
  for (const Block& b : blocks) {
    const std::string question = trimmed_join(b.question);
    std::optional<int> index = b.index;
    if (!index) index = b.heading_index;
    if (!index) index = match_question_text(question);
    if (!index && b.answer) index = last_index + 1;
    if (!index) continue;  // stray "Question:" line in body text
    if (*index < 1 || *index > kQuestionCount) {
      throw AmbiguousBlockError(*index, "question number out of range");
    }
    if (b.answer_markers > 1 || b.justification_markers > 1) {
      throw AmbiguousBlockError(*index, "repeated Answer or Justification marker");
    }
    if (!b.answer) {
      throw ParseError("question " + std::to_string(*index) + " has no Answer");
    }
    const AnswerValue answer = parse_answer(*b.answer);
    std::string justification = b.justification ? trimmed_join(*b.justification) : std::string();
    ChecklistItem item = item_from_builtin(*index, answer, std::move(justification));
    if (auto it = found.find(*index); it != found.end()) {
      if (it->second != item) {
        throw AmbiguousBlockError(*index, "question appears twice with different content");
      }
    } else {
      found.emplace(*index, std::move(item));
    }
    last_index = *index;
  }

  std::vector<int> missing;
  for (int i = 1; i <= kQuestionCount; ++i) {
    if (!found.contains(i)) missing.push_back(i);
  }
  if (!missing.empty()) throw MissingQuestionsError(std::move(missing));

  Checklist c;
  for (auto& [index, item] : found) c.items.push_back(std::move(item));
  return c;
}

std::string render_checklist(const Checklist& checklist) {
  std::string out;
  for (const auto& item : checklist.items) {
    out += "Question " + std::to_string(item.index) + ": " + item.question + "\n";
    out += "Answer: [" + std::string(to_string(item.answer)) + "]\n";
    out += "Justification: " + item.justification + "\n\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sidecar

namespace {

std::optional<std::string_view> sidecar_header(std::string_view line) {
  const std::string_view s = text::trim(line);
  if (!s.starts_with("##") || s.starts_with("###")) return std::nullopt;
  return text::trim(s.substr(2));
}

std::optional<std::string_view> field_value(std::string_view line, std::string_view name) {
  const std::string_view s = text::trim(line);
  if (!text::istarts_with(s, name)) return std::nullopt;
  std::string_view after = s.substr(name.size());
  while (!after.empty() && (after.front() == ' ' || after.front() == '\t')) after.remove_prefix(1);
  if (after.empty() || after.front() != ':') return std::nullopt;
  return after.substr(1);
}

}  // namespace

bool looks_like_sidecar(std::string_view input) {
  for (std::string_view line : text::split_lines(input)) {
    const auto h = sidecar_header(line);
    if (h && parse_int(*h)) return true;
  }
  return false;
}

Checklist parse_sidecar(std::string_view input) {
  const auto lines = text::split_lines(input);
  std::map<int, ChecklistItem> found;
  std::size_t i = 0;
  auto line_no = [&](std::size_t k) { return k + 1; };
  auto skip_blank = [&] {
    while (i < lines.size() && text::trim(lines[i]).empty()) ++i;
  };

  skip_blank();
  while (i < lines.size()) {
    const auto header = sidecar_header(lines[i]);
    if (!header) throw SchemaError("index", line_no(i), "expected a '## <index>' block header");
    const auto index = parse_int(*header);
    if (!index || *index < 1 || *index > kQuestionCount) {
      throw SchemaError("index", line_no(i),
                        "index must be an integer in 1..15, got '" + std::string(*header) + "'");
    }
    if (found.contains(*index)) {
      throw SchemaError("index", line_no(i), "duplicate index " + std::to_string(*index));
    }
    ++i;
    skip_blank();

    if (i >= lines.size() || sidecar_header(lines[i])) {
      throw SchemaError("Answer", line_no(std::min(i, lines.size() - 1)),
                        "missing in block " + std::to_string(*index));
    }
    const auto answer_text = field_value(lines[i], "Answer");
    if (!answer_text) throw SchemaError("Answer", line_no(i), "missing in block " + std::to_string(*index));
    AnswerValue answer;
    try {
      answer = parse_answer(*answer_text);
    } catch (const UnknownAnswerError& e) {
      throw SchemaError("Answer", line_no(i), e.what());
    }
    const std::size_t answer_line = i;
    ++i;
    skip_blank();

    if (i >= lines.size() || sidecar_header(lines[i]) || !field_value(lines[i], "Justification")) {
      throw SchemaError("Justification", line_no(i < lines.size() ? i : answer_line),
                        "missing in block " + std::to_string(*index));
    }
    std::vector<std::string_view> just{*field_value(lines[i], "Justification")};
    ++i;
    while (i < lines.size()) {
      const auto h = sidecar_header(lines[i]);
      if (h && parse_int(*h)) break;
      just.push_back(lines[i]);
      ++i;
    }
    found.emplace(*index, item_from_builtin(*index, answer, trimmed_join(just)));
  }

  std::vector<int> missing;
  for (int k = 1; k <= kQuestionCount; ++k) {
    if (!found.contains(k)) missing.push_back(k);
  }
  if (!missing.empty()) {
    std::string list;
    for (int k : missing) list += (list.empty() ? "" : ", ") + std::to_string(k);
    throw SchemaError("index", lines.size(), "missing block(s) for index " + list);
  }
  Checklist c;
  for (auto& [index, item] : found) c.items.push_back(std::move(item));
  return c;
}

Checklist load_sidecar(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_sidecar(buf.str());
}

std::string to_sidecar(const Checklist& checklist) {
  std::string out;
  for (const auto& item : checklist.items) {
    out += "## " + std::to_string(item.index) + "\n";
    out += "Answer: " + std::string(to_string(item.answer)) + "\n";
    out += "Justification: " + item.justification + "\n\n";
  }
  return out;
}

}  // namespace ckassist
