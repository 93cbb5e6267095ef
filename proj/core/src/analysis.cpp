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

#include "ckassist/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "ckassist/assets.hpp"
#include "ckassist/rng.hpp"
#include "ckassist/text.hpp"

namespace ckassist {

DiffRecord diff_checklists(std::string paper_id, const Checklist& first, const Checklist& second) {
  if (first.items.size() != second.items.size()) {
    throw PreconditionError("diff_checklists: checklists differ in length");
  }
  DiffRecord d;
  d.paper_id = std::move(paper_id);
  for (std::size_t i = 0; i < first.items.size(); ++i) {
    const auto& a = first.items[i];
    const auto& b = second.items[i];
    if (a.answer != b.answer) d.answer_changes.push_back({a.index, a.answer, b.answer});
    if (text::trim(a.justification) != text::trim(b.justification)) {
      const auto before = std::max<std::size_t>(1, text::count_words(a.justification));
      d.justification_changes.push_back(
          {a.index, static_cast<double>(text::count_words(b.justification)) / static_cast<double>(before)});
    } else {
      d.unchanged_indices.push_back(a.index);
    }
  }
  return d;
}

DiffRecord diff_checklists(const SubmissionPair& pair) {
  if (pair.first.report && pair.second.report &&
      pair.first.report->paper_id != pair.second.report->paper_id) {
    throw PreconditionError("diff_checklists: reports belong to different papers (" +
                            pair.first.report->paper_id + " vs " + pair.second.report->paper_id + ")");
  }
  return diff_checklists(pair.paper_id, pair.first.checklist, pair.second.checklist);
}

std::map<double, double> ratio_survival(std::span<const DiffRecord> diffs,
                                        std::span<const double> thresholds) {
  std::vector<double> ratios;
  for (const auto& d : diffs) {
    for (const auto& c : d.justification_changes) ratios.push_back(c.word_ratio);
  }
  if (ratios.empty()) throw PreconditionError("ratio_survival: no justification changes");
  std::map<double, double> out;
  for (double t : thresholds) {
    const auto n = std::count_if(ratios.begin(), ratios.end(), [&](double r) { return r >= t; });
    out[t] = static_cast<double>(n) / static_cast<double>(ratios.size());
  }
  return out;
}

bool all_todo(const Checklist& checklist) {
  return std::all_of(checklist.items.begin(), checklist.items.end(),
                     [](const ChecklistItem& i) { return i.answer == AnswerValue::kTodo; });
}

std::vector<SubmissionPair> exclude_all_todo_first(std::span<const SubmissionPair> pairs) {
  std::vector<SubmissionPair> out;
  for (const auto& p : pairs) {
    if (!all_todo(p.first.checklist)) out.push_back(p);
  }
  return out;
}

std::string_view to_string(ChangeType type) {
  switch (type) {
    case ChangeType::kNone: return "none";
    case ChangeType::kJustification: return "justification";
    case ChangeType::kAnswer: return "answer";
  }
  return "none";
}

std::string_view to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::kImproved: return "improved";
    case Outcome::kUnchanged: return "unchanged";
    case Outcome::kWorse: return "worse";
  }
  return "unchanged";
}

namespace {

using Counts = std::array<std::array<int, 3>, 3>;

Counts count_pair(const SubmissionPair& pair) {
  if (!pair.first.report || !pair.second.report) {
    throw PreconditionError("verdict_transitions: pair " + pair.paper_id + " lacks a report");
  }
  Counts c{};
  const DiffRecord d = diff_checklists(pair);
  const auto& r1 = pair.first.report->outcomes;
  const auto& r2 = pair.second.report->outcomes;
  if (r1.size() != r2.size()) throw PreconditionError("verdict_transitions: report sizes differ");
  for (std::size_t i = 0; i < r1.size(); ++i) {
    const int index = r1[i].question_index;
    auto has = [&](const auto& list) {
      return std::any_of(list.begin(), list.end(), [&](const auto& e) { return e.index == index; });
    };
    const ChangeType type = has(d.answer_changes)           ? ChangeType::kAnswer
                            : has(d.justification_changes) ? ChangeType::kJustification
                                                           : ChangeType::kNone;
    Outcome outcome = Outcome::kUnchanged;
    if (r1[i].verdict == Verdict::kNeedsImprovement && r2[i].verdict == Verdict::kNoConcerns) {
      outcome = Outcome::kImproved;
    } else if (r1[i].verdict == Verdict::kNoConcerns && r2[i].verdict == Verdict::kNeedsImprovement) {
      outcome = Outcome::kWorse;
    }
    ++c[static_cast<std::size_t>(type)][static_cast<std::size_t>(outcome)];
  }
  return c;
}

}  // namespace

TransitionTable verdict_transitions(std::span<const SubmissionPair> pairs, std::size_t n_boot,
                                    double level, std::uint64_t seed) {
  std::vector<Counts> per_pair;
  per_pair.reserve(pairs.size());
  for (const auto& p : pairs) per_pair.push_back(count_pair(p));

  auto totals = [&](std::span<const std::size_t> idx) {
    Counts sum{};
    for (std::size_t i : idx) {
      for (std::size_t t = 0; t < 3; ++t) {
        for (std::size_t o = 0; o < 3; ++o) sum[t][o] += per_pair[i][t][o];
      }
    }
    return sum;
  };
  std::vector<std::size_t> all(per_pair.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  const Counts observed = totals(all);

  TransitionTable table;
  for (std::size_t t = 0; t < 3; ++t) {
    const int total = observed[t][0] + observed[t][1] + observed[t][2];
    for (std::size_t o = 0; o < 3; ++o) {
      TransitionCell& cell = table.cells[t][o];
      cell.count = observed[t][o];
      cell.total = total;
      cell.rate = total ? static_cast<double>(cell.count) / total : 0.0;
      cell.ci = {cell.rate, cell.rate, level, stats::CiMethod::kBootstrapPercentile};
      if (per_pair.empty() || total == 0) continue;
      cell.ci = stats::bootstrap_ci_indices(
          per_pair.size(),
          [&](std::span<const std::size_t> idx) {
            const Counts c = totals(idx);
            const int n = c[t][0] + c[t][1] + c[t][2];
            // A resample with no question of this type carries no information
            // about the rate; fall back to the observed value.
            return n ? static_cast<double>(c[t][o]) / n : cell.rate;
          },
          n_boot, level, Rng::derive(seed, t * 3 + o));
    }
  }
  return table;
}

std::string diffs_csv(std::span<const DiffRecord> diffs) {
  std::ostringstream out;
  out.precision(6);
  out << "paper_id,question_index,kind,from,to,word_ratio\n";
  for (const auto& d : diffs) {
    for (const auto& a : d.answer_changes) {
      out << d.paper_id << ',' << a.index << ",answer," << to_string(a.from) << ',' << to_string(a.to) << ",\n";
    }
    for (const auto& j : d.justification_changes) {
      out << d.paper_id << ',' << j.index << ",justification,,," << j.word_ratio << '\n';
    }
  }
  return out.str();
}

std::string transitions_csv(const TransitionTable& table) {
  std::ostringstream out;
  out.precision(6);
  out << "change_type,outcome,count,total,rate,ci_lo,ci_hi\n";
  for (std::size_t t = 0; t < 3; ++t) {
    for (std::size_t o = 0; o < 3; ++o) {
      const auto& c = table.cells[t][o];
      out << to_string(static_cast<ChangeType>(t)) << ',' << to_string(static_cast<Outcome>(o)) << ','
          << c.count << ',' << c.total << ',' << c.rate << ',' << c.ci.lo << ',' << c.ci.hi << '\n';
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------

namespace {

std::string join_ints(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + std::to_string(v[i]);
  return out;
}

std::string assignment_message(const std::vector<int>& unassigned, const std::vector<int>& duplicated) {
  std::string msg = "theme assignment is not a partition of the points";
  if (!unassigned.empty()) msg += "; unassigned: " + join_ints(unassigned);
  if (!duplicated.empty()) msg += "; assigned more than once: " + join_ints(duplicated);
  return msg;
}

// Retries `attempt` while it throws ParseError, then rethrows the last one.
template <typename Fn>
auto with_parse_retries(Provider& provider, const ProviderConfig& cfg, const std::string& prompt,
                        const Sleeper& sleep, Fn parse) {
  std::exception_ptr last;
  for (int call = 0; call <= cfg.max_retries; ++call) {
    const auto response = complete(provider, cfg, CompletionRequest{prompt}, sleep);
    try {
      return parse(response.text);
    } catch (const ParseError&) {
      last = std::current_exception();
    }
  }
  std::rethrow_exception(last);
}

}  // namespace

UnassignedPointError::UnassignedPointError(std::vector<int> unassigned, std::vector<int> duplicated)
    : ParseError(assignment_message(unassigned, duplicated)),
      unassigned_(std::move(unassigned)),
      duplicated_(std::move(duplicated)) {}

std::string build_extract_prompt(std::string_view question, std::string_view review) {
  return text::substitute(assets::extract_prompt(), {{"{question}", question}, {"{review}", review}});
}

std::vector<FeedbackPoint> parse_feedback_points(std::string_view completion) {
  static constexpr std::string_view kOpen = "<START OF POINTS>";
  static constexpr std::string_view kClose = "<END OF POINTS>";
  const auto b = completion.find(kOpen);
  if (b == std::string_view::npos) throw UnparseableCompletionError("missing <START OF POINTS>");
  const auto start = b + kOpen.size();
  const auto e = completion.find(kClose, start);
  if (e == std::string_view::npos) throw UnparseableCompletionError("missing <END OF POINTS>");
  std::vector<FeedbackPoint> points;
  for (std::string_view line : text::split_lines(completion.substr(start, e - start))) {
    line = text::trim(line);
    if (line.empty()) continue;
    if (!text::istarts_with(line, "POINT:")) {
      throw UnparseableCompletionError("unexpected line in points list: '" + std::string(line) + "'");
    }
    line = text::trim(line.substr(6));
    const auto bar = line.find('|');
    if (bar == std::string_view::npos) {
      throw UnparseableCompletionError("point lacks 'name | description': '" + std::string(line) + "'");
    }
    FeedbackPoint p{std::string(text::trim(line.substr(0, bar))), std::string(text::trim(line.substr(bar + 1)))};
    if (p.name.empty()) throw UnparseableCompletionError("point with empty name");
    points.push_back(std::move(p));
  }
  if (points.empty()) throw UnparseableCompletionError("no points between the delimiters");
  return points;
}

std::vector<FeedbackPoint> extract_feedback_points(std::string_view question, std::string_view review,
                                                   Provider& provider, const ProviderConfig& cfg,
                                                   const Sleeper& sleep) {
  if (text::trim(review).empty()) throw PreconditionError("extract_feedback_points: empty review");
  return with_parse_retries(provider, cfg, build_extract_prompt(question, review), sleep,
                            [](const std::string& t) { return parse_feedback_points(t); });
}

std::string format_points(std::span<const FeedbackPoint> points) {
  std::string out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i) out += '\n';
    out += std::to_string(i + 1) + ". " + points[i].name;
    if (!points[i].description.empty()) out += ": " + points[i].description;
  }
  return out;
}

std::string build_cluster_prompt(std::string_view title, std::span<const FeedbackPoint> points) {
  const std::string listed = format_points(points);
  return text::substitute(assets::cluster_prompt(), {{"{title}", title}, {"{points}", listed}});
}

namespace {

std::vector<int> parse_members(std::string_view s) {
  std::vector<int> out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] == ',' || text::is_space(s[i])) {
      ++i;
      continue;
    }
    int value = 0;
    const auto [ptr, ec] = std::from_chars(s.data() + i, s.data() + s.size(), value);
    if (ec != std::errc()) {
      throw UnparseableCompletionError("bad member list: '" + std::string(s) + "'");
    }
    i = static_cast<std::size_t>(ptr - s.data());
    if (i < s.size() && s[i] == '-') {
      int hi = 0;
      const auto [p2, ec2] = std::from_chars(s.data() + i + 1, s.data() + s.size(), hi);
      if (ec2 != std::errc() || hi < value) {
        throw UnparseableCompletionError("bad member range: '" + std::string(s) + "'");
      }
      for (int v = value; v <= hi; ++v) out.push_back(v);
      i = static_cast<std::size_t>(p2 - s.data());
    } else {
      out.push_back(value);
    }
  }
  return out;
}

bool take_field(std::string_view line, std::string_view key, std::string_view& value) {
  if (!text::istarts_with(line, key)) return false;
  value = text::trim(line.substr(key.size()));
  return true;
}

}  // namespace

std::vector<FeedbackTheme> parse_themes(std::string_view completion, std::size_t n_points) {
  std::vector<FeedbackTheme> themes;
  std::vector<bool> has_members;
  for (std::string_view line : text::split_lines(completion)) {
    line = text::trim(line);
    std::string_view v;
    if (take_field(line, "THEME:", v)) {
      if (v.empty()) throw UnparseableCompletionError("theme with empty name");
      themes.push_back(FeedbackTheme{std::string(v), {}, 0, {}, {}});
      has_members.push_back(false);
      continue;
    }
    if (themes.empty()) continue;
    FeedbackTheme& t = themes.back();
    if (take_field(line, "DESCRIPTION:", v)) {
      t.description = std::string(v);
    } else if (take_field(line, "SUBCATEGORIES:", v)) {
      std::string_view rest = v;
      while (!rest.empty()) {
        const auto semi = rest.find(';');
        const std::string_view part = text::trim(rest.substr(0, semi));
        if (!part.empty()) t.subcategories.emplace_back(part);
        if (semi == std::string_view::npos) break;
        rest = rest.substr(semi + 1);
      }
    } else if (take_field(line, "MEMBERS:", v)) {
      const auto members = parse_members(v);
      t.members.insert(t.members.end(), members.begin(), members.end());
      has_members.back() = true;
    }
  }
  if (themes.empty()) throw UnparseableCompletionError("no THEME blocks in completion");
  std::vector<int> seen(n_points + 1, 0);
  for (std::size_t i = 0; i < themes.size(); ++i) {
    if (!has_members[i]) throw UnparseableCompletionError("theme '" + themes[i].name + "' lacks MEMBERS");
    for (int m : themes[i].members) {
      if (m < 1 || static_cast<std::size_t>(m) > n_points) {
        throw UnparseableCompletionError("member " + std::to_string(m) + " is out of range");
      }
      ++seen[static_cast<std::size_t>(m)];
    }
    themes[i].frequency = static_cast<int>(themes[i].members.size());
  }
  std::vector<int> unassigned;
  std::vector<int> duplicated;
  for (std::size_t m = 1; m <= n_points; ++m) {
    if (seen[m] == 0) unassigned.push_back(static_cast<int>(m));
    if (seen[m] > 1) duplicated.push_back(static_cast<int>(m));
  }
  if (!unassigned.empty() || !duplicated.empty()) throw UnassignedPointError(unassigned, duplicated);
  std::erase_if(themes, [](const FeedbackTheme& t) { return t.frequency == 0; });
  std::stable_sort(themes.begin(), themes.end(),
                   [](const FeedbackTheme& a, const FeedbackTheme& b) { return a.frequency > b.frequency; });
  return themes;
}

std::vector<FeedbackTheme> cluster_feedback(std::string_view title, std::span<const FeedbackPoint> points,
                                            Provider& provider, const ProviderConfig& cfg,
                                            const Sleeper& sleep) {
  if (points.empty()) throw PreconditionError("cluster_feedback: no points");
  return with_parse_retries(provider, cfg, build_cluster_prompt(title, points), sleep,
                            [&](const std::string& t) { return parse_themes(t, points.size()); });
}

std::string themes_to_json(std::string_view title, std::span<const FeedbackTheme> themes) {
  nlohmann::ordered_json j;
  j["question"] = title;
  auto& arr = j["themes"] = nlohmann::ordered_json::array();
  for (const auto& t : themes) {
    arr.push_back({{"name", t.name},
                   {"description", t.description},
                   {"frequency", t.frequency},
                   {"subcategories", t.subcategories},
                   {"members", t.members}});
  }
  return j.dump(2) + "\n";
}

std::string format_themes(std::string_view title, std::span<const FeedbackTheme> themes) {
  std::string out = std::string(title) + "\n";
  for (const auto& t : themes) {
    out += "\n" + t.name + "\n";
    out += "- Frequency: " + std::to_string(t.frequency) + "\n";
    out += "- Description: " + t.description + "\n";
    out += "- Subcategories: " + text::join(t.subcategories, "; ") + "\n";
  }
  return out;
}

}  // namespace ckassist
