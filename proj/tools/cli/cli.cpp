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

#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "ckassist/analysis.hpp"
#include "ckassist/assets.hpp"
#include "ckassist/checklist.hpp"
#include "ckassist/error.hpp"
#include "ckassist/hash.hpp"
#include "ckassist/http_provider.hpp"
#include "ckassist/ingest.hpp"
#include "ckassist/mock_provider.hpp"
#include "ckassist/parallel.hpp"
#include "ckassist/redteam.hpp"
#include "ckassist/report.hpp"
#include "ckassist/review.hpp"
#include "ckassist/rng.hpp"
#include "ckassist/stats.hpp"
#include "ckassist/text.hpp"
#include "config.hpp"
#include "csv.hpp"
#include "json.hpp"

namespace ckassist::cli {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

constexpr std::string_view kVersion = "0.1.0";

std::atomic<std::size_t> g_sentinel_hits{0};

class SentinelTransport : public HttpTransport {
 public:
  HttpResponse post(const HttpRequest&) override {
    ++g_sentinel_hits;
    throw ProviderError("network access attempted in --mock mode");
  }
};

// Restores the default transport factory when a mock run ends.
struct SentinelGuard {
  explicit SentinelGuard(bool active) : active_(active) {
    if (active_) set_transport_factory([] { return std::make_unique<SentinelTransport>(); });
  }
  ~SentinelGuard() {
    if (active_) set_transport_factory({});
  }
  bool active_;
};

/// Usage problems detected after CLI11 parsing; reported with exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// ---------------------------------------------------------------------------
// Options

struct GlobalOptions {
  std::optional<std::string> config;
  std::optional<std::string> mock;
  std::optional<int> parallelism;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> endpoint;
  std::optional<std::string> model;
};

struct ReviewOptions {
  std::string paper;
  std::string checklist;
  std::string paper_id;
  std::string batch;
  int runs = 1;
  bool pdf_text = false;
};

struct AuditOptions {
  std::vector<std::string> papers;
  std::vector<std::string> checklists;
  std::string batch;
  int runs = 3;
  std::size_t n_perm = 10'000;
};

struct AttackOptions {
  std::string paper;
  std::string checklist;
  std::string paper_id;
  int budget = 3;
  int repeats = 3;
  double confidence = 0.95;
  bool raw_mean = false;
  bool no_eval = false;
};

struct SweepOptions {
  std::string paper;
  std::string trace;
  int repeats = 3;
  double confidence = 0.95;
  std::optional<int> budget;
};

struct DiffOptions {
  std::string first;
  std::string second;
  bool exclude_all_todo_first = false;
  std::vector<double> thresholds{1.0, 1.5, 2.0, 3.0};
  std::size_t n_boot = 2000;
};

struct ClusterOptions {
  std::string reviews;
  std::string points;
  std::optional<int> question;
  std::string title;
};

struct ReportOptions {
  std::string in;
};

struct StatsOptions {
  std::int64_t successes = 0;
  std::int64_t trials = 0;
  double p0 = 0.5;
  double level = 0.95;
  std::string in;
  std::string column;
  std::string group_column;
  std::string value_column;
  std::string paper_column;
  std::string score_column;
  std::string statistic = "mean";
  std::size_t n_perm = stats::kDefaultPermutations;
  std::size_t n_boot = 2000;
};

// ---------------------------------------------------------------------------
// Session: resolved configuration, providers and the output manifest

class Session {
 public:
  Session(RunConfig cfg, std::vector<std::string> argv, std::string command,
          std::optional<fs::path> mock_dir, std::string primary_name)
      : cfg_(std::move(cfg)),
        argv_(std::move(argv)),
        command_(std::move(command)),
        mock_dir_(std::move(mock_dir)),
        primary_name_(std::move(primary_name)),
        started_at_(utc_now()) {}

  const RunConfig& cfg() const { return cfg_; }
  bool mock() const { return mock_dir_.has_value(); }
  const std::string& primary_name() const { return primary_name_; }

  Sleeper sleeper() const {
    if (mock()) return [](std::chrono::milliseconds) {};
    return real_sleeper();
  }

  Provider& judge() {
    ensure_providers();
    return *judge_;
  }
  Provider& attacker() {
    ensure_providers();
    return *attacker_;
  }

  void record_input(const fs::path& path, const std::string& content) {
    inputs_.push_back({{"path", path.generic_string()}, {"sha256", sha256_hex(content)}});
  }

  std::string read_input(const fs::path& path) {
    std::string content = read_file(path);
    record_input(path, content);
    return content;
  }

  void write(const fs::path& name, const std::string& content) {
    const fs::path path = cfg_.output_dir / name;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << content;
    if (!out) throw IoError("failed writing " + path.string());
    outputs_.push_back({{"path", name.generic_string()}, {"sha256", sha256_hex(content)}});
  }

  void write_manifest(std::string_view status, std::string_view error) {
    ojson m;
    m["tool"] = "ckassist";
    m["version"] = kVersion;
    m["command"] = command_;
    m["argv"] = argv_;
    m["config"] = ojson::parse(config_to_json(cfg_));
    m["mock_dir"] = mock_dir_ ? ojson(mock_dir_->generic_string()) : ojson(nullptr);
    m["seeds"] = {{"seed", cfg_.seed}, {"rng_algorithm", Rng::kAlgorithm}};
    if (mock_seed_) m["seeds"]["mock_seed"] = *mock_seed_;
    auto& assets = m["assets"] = ojson::array();
    for (const auto& a : assets::checksums()) assets.push_back({{"name", a.name}, {"sha256", a.sha256}});
    m["inputs"] = inputs_;
    m["outputs"] = outputs_;
    m["started_at"] = started_at_;
    m["finished_at"] = utc_now();
    m["status"] = status;
    if (!error.empty()) m["error"] = error;
    const fs::path path = cfg_.output_dir / "manifest.json";
    std::ofstream out(path, std::ios::binary);
    if (out) out << m.dump(2) << '\n';
  }

 private:
  void ensure_providers() {
    if (judge_) return;
    if (mock_dir_) {
      auto mock = MockProvider::from_directory(*mock_dir_);
      const std::string spec = read_file(*mock_dir_ / "mock.json");
      record_input(*mock_dir_ / "mock.json", spec);
      const auto j = nlohmann::json::parse(spec);
      if (j.contains("seed")) mock_seed_ = j["seed"].get<std::uint64_t>();
      judge_ = std::make_shared<ConcurrencyLimitedProvider>(mock, cfg_.provider.max_concurrent_requests);
      attacker_ = judge_;
      return;
    }
    judge_ = std::make_shared<ConcurrencyLimitedProvider>(std::make_shared<HttpProvider>(cfg_.provider),
                                                          cfg_.provider.max_concurrent_requests);
    attacker_ = std::make_shared<ConcurrencyLimitedProvider>(std::make_shared<HttpProvider>(cfg_.attacker),
                                                             cfg_.attacker.max_concurrent_requests);
  }

  RunConfig cfg_;
  std::vector<std::string> argv_;
  std::string command_;
  std::optional<fs::path> mock_dir_;
  std::string primary_name_;
  std::string started_at_;
  std::optional<std::uint64_t> mock_seed_;
  std::shared_ptr<Provider> judge_;
  std::shared_ptr<Provider> attacker_;
  ojson inputs_ = ojson::array();
  ojson outputs_ = ojson::array();
};

// ---------------------------------------------------------------------------
// Input helpers

PaperDocument load_paper(Session& s, const fs::path& path, bool pdf_text = false) {
  RawDocument raw{pdf_text ? SourceKind::kPdfExtracted : SourceKind::kPlainText, s.read_input(path),
                  path.string()};
  return ingest(raw, s.cfg().ingest);
}

Checklist load_checklist(Session& s, const fs::path& path) {
  const std::string text = s.read_input(path);
  return looks_like_sidecar(text) ? parse_sidecar(text) : parse_checklist(text);
}

std::optional<fs::path> first_existing(const fs::path& dir, std::initializer_list<const char*> names) {
  for (const char* n : names) {
    if (fs::is_regular_file(dir / n)) return dir / n;
  }
  return std::nullopt;
}

std::optional<fs::path> find_paper(const fs::path& dir) {
  return first_existing(dir, {"paper.txt", "paper.md"});
}

std::optional<fs::path> find_checklist(const fs::path& dir) {
  return first_existing(dir, {"checklist.txt", "checklist.md", "checklist.sidecar", "checklist.sidecar.txt"});
}

std::vector<fs::path> sorted_subdirs(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_directory()) out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct PaperJob {
  std::string id;
  fs::path paper;
  fs::path checklist;
};

std::vector<PaperJob> batch_jobs(const fs::path& dir) {
  std::vector<PaperJob> jobs;
  for (const auto& sub : sorted_subdirs(dir)) {
    const auto paper = find_paper(sub);
    const auto checklist = find_checklist(sub);
    if (!paper || !checklist) continue;
    jobs.push_back({sub.filename().string(), *paper, *checklist});
  }
  if (jobs.empty()) throw IoError("no paper/checklist pairs found under " + dir.string());
  return jobs;
}

std::string stem_id(const std::string& explicit_id, const fs::path& paper) {
  return explicit_id.empty() ? paper.stem().string() : explicit_id;
}

// ---------------------------------------------------------------------------
// Commands

int cmd_review(Session& s, const ReviewOptions& o, std::ostream& out) {
  if (!o.batch.empty()) {
    const auto jobs = batch_jobs(o.batch);
    std::vector<std::optional<ChecklistReport>> reports(jobs.size());
    std::vector<PaperDocument> papers(jobs.size());
    std::vector<Checklist> checklists(jobs.size());
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      papers[i] = load_paper(s, jobs[i].paper, o.pdf_text);
      checklists[i] = load_checklist(s, jobs[i].checklist);
    }
    const int outer = std::min<int>(s.cfg().parallelism, static_cast<int>(jobs.size()));
    const int inner = std::max(1, s.cfg().parallelism / outer);
    Provider& judge = s.judge();
    const Sleeper sleep = s.sleeper();
    const auto errors = parallel_for_each(jobs.size(), outer, [&](std::size_t i) {
      reports[i] = review_checklist(jobs[i].id, checklists[i], papers[i], judge, s.cfg().provider, inner, sleep);
    });
    std::vector<ChecklistReport> done;
    ojson failures = ojson::array();
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      if (errors[i]) {
        try {
          std::rethrow_exception(errors[i]);
        } catch (const std::exception& e) {
          failures.push_back({{"paper_id", jobs[i].id}, {"error", e.what()}});
        }
        continue;
      }
      s.write(fs::path(jobs[i].id) / "report.json", report_to_json(*reports[i]));
      s.write(fs::path(jobs[i].id) / "report.html", render_html(*reports[i]));
      out << jobs[i].id << ": " << reports[i]->needs_improvement_count << "/" << reports[i]->outcomes.size()
          << " need improvement\n";
      done.push_back(*reports[i]);
    }
    if (!done.empty()) {
      const auto summary = summarize_corpus(done);
      s.write("summary.csv", summary_csv(summary));
      s.write("histogram.csv", histogram_csv(summary));
    }
    if (!failures.empty()) {
      s.write("failures.json", failures.dump(2) + "\n");
      throw Error(ErrorCategory::kReview,
                  std::to_string(failures.size()) + " of " + std::to_string(jobs.size()) + " papers failed");
    }
    return kExitOk;
  }

  const PaperDocument paper = load_paper(s, o.paper, o.pdf_text);
  const Checklist checklist = load_checklist(s, o.checklist);
  const std::string id = stem_id(o.paper_id, o.paper);
  const ChecklistReport report =
      review_checklist(id, checklist, paper, s.judge(), s.cfg().provider, s.cfg().parallelism, s.sleeper());
  s.write(s.primary_name().empty() ? "report.json" : s.primary_name(), report_to_json(report));
  s.write("report.html", render_html(report));
  if (o.runs >= 2) {
    const ScoreMatrix m = consistency_audit(id, checklist, paper, s.judge(), s.cfg().provider, o.runs,
                                            s.cfg().parallelism, s.sleeper());
    std::ostringstream csv;
    csv << "question_index,run,raw_score\n";
    for (std::size_t q = 0; q < m.scores.size(); ++q) {
      for (std::size_t r = 0; r < m.scores[q].size(); ++r) csv << q + 1 << ',' << r + 1 << ',' << m.scores[q][r] << '\n';
    }
    s.write("runs.csv", csv.str());
  }
  for (const auto& w : report.warnings) out << "warning: " << w << '\n';
  out << id << ": " << report.needs_improvement_count << "/" << report.outcomes.size()
      << " need improvement\n";
  return kExitOk;
}

int cmd_audit(Session& s, const AuditOptions& o, std::ostream& out) {
  std::vector<PaperJob> jobs;
  if (!o.batch.empty()) {
    jobs = batch_jobs(o.batch);
  } else {
    if (o.papers.size() != o.checklists.size()) {
      throw UsageError("--paper and --checklist must be given the same number of times");
    }
    for (std::size_t i = 0; i < o.papers.size(); ++i) jobs.push_back({stem_id("", o.papers[i]), o.papers[i], o.checklists[i]});
  }
  if (jobs.empty()) throw UsageError("audit needs --batch or at least one --paper/--checklist pair");
  if (o.runs < 2) throw PreconditionError("audit: --runs must be >= 2");

  std::vector<ScoreMatrix> matrices;
  for (const auto& job : jobs) {
    const PaperDocument paper = load_paper(s, job.paper);
    const Checklist checklist = load_checklist(s, job.checklist);
    matrices.push_back(consistency_audit(job.id, checklist, paper, s.judge(), s.cfg().provider, o.runs,
                                         s.cfg().parallelism, s.sleeper()));
  }
  ojson j;
  j["runs"] = o.runs;
  auto& papers = j["papers"] = ojson::array();
  for (const auto& m : matrices) {
    papers.push_back({{"paper_id", m.paper_id}, {"scores", m.scores}, {"variance", m.per_question_variance()}});
  }
  std::ostringstream csv;
  csv << "question_index,statistic,p_value,p_adjusted,degenerate\n";
  if (matrices.size() >= 2) {
    const ConsistencyResult r = consistency_test(matrices, o.n_perm, s.cfg().seed);
    auto& tests = j["tests"] = ojson::array();
    for (std::size_t q = 0; q < r.per_question.size(); ++q) {
      const auto& t = r.per_question[q];
      tests.push_back({{"question_index", q + 1},
                       {"statistic", t.statistic},
                       {"p_value", t.p_value},
                       {"p_adjusted", r.adjusted_p[q]},
                       {"degenerate", t.degenerate},
                       {"n_permutations", t.n_permutations},
                       {"seed", *t.seed}});
      csv << q + 1 << ',' << t.statistic << ',' << t.p_value << ',' << r.adjusted_p[q] << ','
          << (t.degenerate ? "true" : "false") << '\n';
    }
    j["method"] = "permutation_within_across+bh";
    j["seed"] = s.cfg().seed;
    j["rng_algorithm"] = Rng::kAlgorithm;
    const auto significant = std::count_if(r.adjusted_p.begin(), r.adjusted_p.end(), [](double p) { return p < 0.05; });
    out << significant << "/" << r.adjusted_p.size() << " questions with adjusted p < 0.05\n";
  } else {
    out << "one paper audited; the across-paper test needs at least two\n";
  }
  s.write(s.primary_name().empty() ? "audit.json" : s.primary_name(), j.dump(2) + "\n");
  s.write("audit.csv", csv.str());
  return kExitOk;
}

AttackConfig attack_config(int budget, int repeats, double confidence, bool raw_mean, std::uint64_t seed) {
  AttackConfig c;
  c.budget = budget;
  c.eval_repeats = repeats;
  c.confidence = confidence;
  c.raw_mean = raw_mean;
  c.seed = seed;
  c.validate();
  return c;
}

void print_evaluation(const AttackEvaluation& ev, std::ostream& out) {
  int increased = 0;
  for (const auto& q : ev.questions) increased += q.attacked.mean > q.baseline.mean;
  out << "k=" << ev.k << ": baseline " << ev.baseline_total.mean << ", attacked " << ev.attacked_total.mean
      << "; " << increased << "/" << ev.questions.size() << " questions increased\n";
}

int cmd_attack(Session& s, const AttackOptions& o, std::ostream& out) {
  const AttackConfig cfg = attack_config(o.budget, o.repeats, o.confidence, o.raw_mean, s.cfg().seed);
  const PaperDocument paper = load_paper(s, o.paper);
  const Checklist checklist = load_checklist(s, o.checklist);
  const std::string before = sha256_hex(paper.text);
  const AttackTrace trace = run_attack(stem_id(o.paper_id, o.paper), checklist, paper, s.judge(), s.cfg().provider,
                                       s.attacker(), s.cfg().attacker, cfg, s.cfg().parallelism, s.sleeper());
  if (sha256_hex(trace.paper.text) != before) throw Error(ErrorCategory::kReview, "paper text changed during attack");
  s.write(s.primary_name().empty() ? "trace.json" : s.primary_name(), trace_to_json(trace));
  if (!trace.failures.empty()) {
    std::vector<AggregateError::Failure> f = trace.failures;
    throw AggregateError(std::move(f));
  }
  if (!o.no_eval) {
    const AttackTrace traces[] = {trace};
    const AttackEvaluation ev =
        evaluate_attack(traces, s.judge(), s.cfg().provider, cfg, std::nullopt, s.cfg().parallelism, s.sleeper());
    s.write("evaluation.csv", evaluation_csv(ev));
    print_evaluation(ev, out);
  }
  return kExitOk;
}

int cmd_sweep(Session& s, const SweepOptions& o, std::ostream& out) {
  const PaperDocument paper = load_paper(s, o.paper);
  const AttackTrace trace = trace_from_json(s.read_input(o.trace), paper);
  int rounds = 0;
  for (const auto& q : trace.questions) rounds = std::max<int>(rounds, static_cast<int>(q.rounds.size()));
  const AttackConfig cfg =
      attack_config(o.budget.value_or(std::max(1, rounds)), o.repeats, o.confidence, false, s.cfg().seed);
  const AttackTrace traces[] = {trace};
  const auto sweep = budget_sweep(traces, s.judge(), s.cfg().provider, cfg, s.cfg().parallelism, s.sleeper());
  s.write(s.primary_name().empty() ? "sweep.csv" : s.primary_name(), sweep_csv(sweep));
  for (const auto& ev : sweep) print_evaluation(ev, out);
  return kExitOk;
}

std::map<std::string, Submission> load_submissions(Session& s, const fs::path& dir) {
  std::map<std::string, Submission> out;
  for (const auto& sub : sorted_subdirs(dir)) {
    const auto checklist = find_checklist(sub);
    if (!checklist) continue;
    Submission entry{load_checklist(s, *checklist), std::nullopt};
    if (fs::is_regular_file(sub / "report.json")) entry.report = report_from_json(s.read_input(sub / "report.json"));
    out.emplace(sub.filename().string(), std::move(entry));
  }
  return out;
}

int cmd_diff(Session& s, const DiffOptions& o, std::ostream& out, std::ostream& err) {
  auto first = load_submissions(s, o.first);
  auto second = load_submissions(s, o.second);
  std::vector<SubmissionPair> pairs;
  for (auto& [id, sub] : first) {
    auto it = second.find(id);
    if (it == second.end()) {
      err << "warning: " << id << " has no second submission; skipped\n";
      continue;
    }
    pairs.push_back({id, std::move(sub), std::move(it->second)});
  }
  for (const auto& [id, sub] : second) {
    if (!first.contains(id)) err << "warning: " << id << " has no first submission; skipped\n";
  }
  if (o.exclude_all_todo_first) pairs = exclude_all_todo_first(pairs);
  if (pairs.empty()) throw PreconditionError("diff: no submission pairs");

  std::vector<DiffRecord> diffs;
  for (const auto& p : pairs) diffs.push_back(diff_checklists(p));
  s.write(s.primary_name().empty() ? "diffs.csv" : s.primary_name(), diffs_csv(diffs));

  const auto answer_pairs = std::count_if(diffs.begin(), diffs.end(), [](const DiffRecord& d) { return !d.answer_changes.empty(); });
  const auto just_pairs =
      std::count_if(diffs.begin(), diffs.end(), [](const DiffRecord& d) { return !d.justification_changes.empty(); });
  out << pairs.size() << " pairs; " << answer_pairs << " changed an answer; " << just_pairs
      << " changed a justification\n";
  if (just_pairs > 0) {
    const auto survival = ratio_survival(diffs, o.thresholds);
    std::ostringstream csv;
    csv << "threshold,fraction\n";
    for (const auto& [t, f] : survival) csv << t << ',' << f << '\n';
    s.write("survival.csv", csv.str());
  }
  const bool reports = std::all_of(pairs.begin(), pairs.end(),
                                   [](const SubmissionPair& p) { return p.first.report && p.second.report; });
  if (reports) {
    const TransitionTable table = verdict_transitions(pairs, o.n_boot, 0.95, s.cfg().seed);
    s.write("transitions.csv", transitions_csv(table));
  }
  return kExitOk;
}

int cmd_cluster(Session& s, const ClusterOptions& o, std::ostream& out) {
  std::string title = o.title;
  if (title.empty() && o.question) title = builtin_question(*o.question).title;
  if (title.empty()) throw UsageError("cluster needs --question or --title");

  std::vector<FeedbackPoint> points;
  if (!o.points.empty()) {
    std::string text = s.read_input(o.points);
    if (text.find("<START OF POINTS>") == std::string::npos) text = "<START OF POINTS>\n" + text + "\n<END OF POINTS>\n";
    points = parse_feedback_points(text);
  } else {
    if (!o.question) throw UsageError("--reviews needs --question");
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(o.reviews)) {
      if (e.is_regular_file() && e.path().filename() == "report.json") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw IoError("no report.json files under " + o.reviews);
    const std::string& question = builtin_question(*o.question).question;
    std::vector<std::string> reviews;
    for (const auto& f : files) {
      const ChecklistReport r = report_from_json(s.read_input(f));
      for (const auto& oc : r.outcomes) {
        if (oc.question_index == *o.question && !text::trim(oc.review_text).empty()) reviews.push_back(oc.review_text);
      }
    }
    std::vector<std::vector<FeedbackPoint>> extracted(reviews.size());
    Provider& provider = s.judge();
    const Sleeper sleep = s.sleeper();
    const auto errors = parallel_for_each(reviews.size(), s.cfg().parallelism, [&](std::size_t i) {
      extracted[i] = extract_feedback_points(question, reviews[i], provider, s.cfg().provider, sleep);
    });
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
    for (auto& v : extracted) points.insert(points.end(), v.begin(), v.end());
    ojson pj = ojson::array();
    for (const auto& p : points) pj.push_back({{"name", p.name}, {"description", p.description}});
    s.write("points.json", pj.dump(2) + "\n");
  }
  const auto themes = cluster_feedback(title, points, s.judge(), s.cfg().provider, s.sleeper());
  s.write(s.primary_name().empty() ? "themes.json" : s.primary_name(), themes_to_json(title, themes));
  s.write("themes.txt", format_themes(title, themes));
  out << points.size() << " points in " << themes.size() << " themes\n";
  for (const auto& t : themes) out << "  " << t.name << " (" << t.frequency << ")\n";
  return kExitOk;
}

int cmd_report(Session& s, const ReportOptions& o, std::ostream& out) {
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(o.in)) {
    if (e.is_regular_file() && e.path().filename() == "report.json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw IoError("no report.json files under " + o.in);
  std::vector<ChecklistReport> reports;
  std::set<std::string> ids;
  for (const auto& f : files) {
    reports.push_back(report_from_json(s.read_input(f)));
    if (!ids.insert(reports.back().paper_id).second) {
      throw PreconditionError("duplicate paper_id " + reports.back().paper_id);
    }
    s.write(fs::path("html") / (reports.back().paper_id + ".html"), render_html(reports.back()));
  }
  const auto summary = summarize_corpus(reports);
  s.write(s.primary_name().empty() ? "summary.csv" : s.primary_name(), summary_csv(summary));
  s.write("histogram.csv", histogram_csv(summary));
  out << reports.size() << " reports summarized\n";
  return kExitOk;
}

ojson test_json(const stats::TestResult& r) {
  ojson j{{"method", r.method}, {"statistic", r.statistic}, {"p_value", r.p_value}, {"exact", r.exact}};
  if (!r.exact) {
    j["n_permutations"] = r.n_permutations;
    j["seed"] = r.seed ? ojson(*r.seed) : ojson(nullptr);
    j["rng_algorithm"] = Rng::kAlgorithm;
  }
  if (r.effect) j["effect"] = *r.effect;
  j["degenerate"] = r.degenerate;
  return j;
}

ojson interval_json(const stats::ConfidenceInterval& ci) {
  return {{"method", stats::to_string(ci.method)}, {"level", ci.level}, {"lo", ci.lo}, {"hi", ci.hi}};
}

double parse_double(const std::string& v, std::size_t row) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw SchemaError("value", row + 2, "not a number: '" + v + "'");
  }
}

int cmd_stats(Session& s, const std::string& which, const StatsOptions& o, std::ostream& out) {
  ojson j;
  auto table = [&] { return parse_csv(s.read_input(o.in)); };
  if (which == "binom") {
    j = test_json(stats::binom_test_one_sided(o.successes, o.trials, o.p0));
    j["successes"] = o.successes;
    j["trials"] = o.trials;
    j["p0"] = o.p0;
  } else if (which == "clopper-pearson") {
    j = interval_json(stats::clopper_pearson(o.successes, o.trials, o.level));
  } else if (which == "wilson") {
    j = interval_json(stats::proportion_ci(o.successes, o.trials, o.level));
  } else if (which == "bh") {
    const CsvTable t = table();
    const std::size_t c = t.column(o.column);
    std::vector<double> p;
    for (std::size_t r = 0; r < t.rows.size(); ++r) p.push_back(parse_double(t.rows[r][c], r));
    const auto adj = stats::bh_adjust(p);
    j = {{"method", "benjamini_hochberg"}, {"p_values", p}, {"p_adjusted", adj}};
    std::ostringstream csv;
    csv << "row," << csv_escape(o.column) << ",p_adjusted\n";
    for (std::size_t r = 0; r < p.size(); ++r) csv << r + 1 << ',' << p[r] << ',' << adj[r] << '\n';
    s.write("bh.csv", csv.str());
  } else if (which == "perm-proportions") {
    const CsvTable t = table();
    const std::size_t g = t.column(o.group_column);
    const std::size_t v = t.column(o.value_column);
    std::vector<std::string> labels;
    std::map<std::string, std::vector<int>> groups;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      const std::string& label = t.rows[r][g];
      if (!groups.contains(label)) labels.push_back(label);
      const double x = parse_double(t.rows[r][v], r);
      if (x != 0.0 && x != 1.0) throw SchemaError(o.value_column, r + 2, "outcomes must be 0 or 1");
      groups[label].push_back(static_cast<int>(x));
    }
    if (labels.size() != 2) throw SchemaError(o.group_column, 1, "expected exactly two groups");
    j = test_json(stats::perm_test_proportions(groups[labels[0]], groups[labels[1]], o.n_perm, s.cfg().seed));
    j["group_a"] = labels[0];
    j["group_b"] = labels[1];
  } else if (which == "perm-within") {
    const CsvTable t = table();
    const std::size_t pc = t.column(o.paper_column);
    const std::size_t sc = t.column(o.score_column);
    std::vector<std::string> order;
    std::map<std::string, std::vector<double>> rows;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      const std::string& id = t.rows[r][pc];
      if (!rows.contains(id)) order.push_back(id);
      rows[id].push_back(parse_double(t.rows[r][sc], r));
    }
    std::vector<std::vector<double>> m;
    for (const auto& id : order) m.push_back(rows[id]);
    j = test_json(stats::perm_test_within_across(m, o.n_perm, s.cfg().seed));
  } else if (which == "bootstrap") {
    const CsvTable t = table();
    const std::size_t c = t.column(o.column);
    std::vector<double> x;
    for (std::size_t r = 0; r < t.rows.size(); ++r) x.push_back(parse_double(t.rows[r][c], r));
    std::function<double(std::span<const double>)> stat;
    if (o.statistic == "mean") {
      stat = [](std::span<const double> v) { return stats::mean(v); };
    } else if (o.statistic == "median") {
      stat = [](std::span<const double> v) {
        std::vector<double> w(v.begin(), v.end());
        std::sort(w.begin(), w.end());
        const std::size_t n = w.size();
        return n % 2 ? w[n / 2] : 0.5 * (w[n / 2 - 1] + w[n / 2]);
      };
    } else {
      throw UsageError("--statistic must be mean or median");
    }
    j = interval_json(stats::bootstrap_ci(x, stat, o.n_boot, o.level, s.cfg().seed));
    j["statistic"] = o.statistic;
    j["estimate"] = stat(x);
    j["n_boot"] = o.n_boot;
    j["seed"] = s.cfg().seed;
    j["rng_algorithm"] = Rng::kAlgorithm;
  } else {
    throw UsageError("unknown stats subcommand");
  }
  s.write(s.primary_name().empty() ? "stats.json" : s.primary_name(), j.dump(2) + "\n");
  out << j.dump(2) << '\n';
  return kExitOk;
}

// Splits --out into the output directory and an optional primary file name.
std::pair<std::optional<fs::path>, std::string> split_out(const std::optional<std::string>& out) {
  if (!out) return {std::nullopt, {}};
  const fs::path p(*out);
  if (p.has_extension() && !fs::is_directory(p)) {
    const fs::path parent = p.has_parent_path() ? p.parent_path() : fs::path(".");
    return {parent, p.filename().string()};
  }
  return {p, {}};
}

}  // namespace

std::size_t sentinel_hits() { return g_sentinel_hits.load(); }

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Checklist assistant: LLM review of author checklists, red-team and analysis tools", "ckassist"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(kVersion));

  GlobalOptions g;
  app.add_option("--config", g.config, "JSON configuration file");
  app.add_option("--mock", g.mock, "Use the mock provider from this fixture directory (no network)");
  app.add_option("--parallelism", g.parallelism, "Worker count (default 15)")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "Seed for randomized procedures");
  app.add_option("--out", g.out, "Output directory, or primary output file");
  app.add_option("--endpoint", g.endpoint, "Completion endpoint URL");
  app.add_option("--model", g.model, "Model identifier");

  ReviewOptions ro;
  auto* review = app.add_subcommand("review", "Review a paper's checklist");
  review->add_option("--paper", ro.paper, "Paper text file");
  review->add_option("--checklist", ro.checklist, "Checklist file (rendered or sidecar)");
  review->add_option("--paper-id", ro.paper_id, "Identifier used in outputs (default: paper file stem)");
  review->add_option("--batch", ro.batch, "Directory of <id>/paper.txt + <id>/checklist.txt pairs");
  review->add_option("--runs", ro.runs, "Also review each question this many times and write runs.csv");
  review->add_flag("--pdf-text", ro.pdf_text, "Input was extracted from a PDF");

  AuditOptions ao;
  auto* audit = app.add_subcommand("audit", "Consistency audit over repeated reviews");
  audit->add_option("--paper", ao.papers, "Paper text file (repeatable)");
  audit->add_option("--checklist", ao.checklists, "Checklist file (repeatable, paired with --paper)");
  audit->add_option("--batch", ao.batch, "Directory of paper/checklist pairs");
  audit->add_option("--runs", ao.runs, "Reviews per question (>= 2)");
  audit->add_option("--n-perm", ao.n_perm, "Permutations per question");

  AttackOptions at;
  auto* attack = app.add_subcommand("attack", "Adversarial justification rewriting");
  attack->add_option("--paper", at.paper, "Paper text file")->required();
  attack->add_option("--checklist", at.checklist, "Checklist file")->required();
  attack->add_option("--paper-id", at.paper_id, "Identifier used in outputs");
  attack->add_option("--budget", at.budget, "Revision rounds per question");
  attack->add_option("--repeats", at.repeats, "Evaluation reviews per arm");
  attack->add_option("--confidence", at.confidence, "Interval level");
  attack->add_flag("--raw-mean", at.raw_mean, "Report mean raw scores instead of success rates");
  attack->add_flag("--no-eval", at.no_eval, "Write the trace only");

  SweepOptions so;
  auto* sweep = app.add_subcommand("sweep", "Evaluate an attack trace for each budget k");
  sweep->add_option("--paper", so.paper, "Paper text file the trace was made on")->required();
  sweep->add_option("--trace", so.trace, "trace.json from attack")->required();
  sweep->add_option("--repeats", so.repeats, "Evaluation reviews per arm");
  sweep->add_option("--confidence", so.confidence, "Interval level");
  sweep->add_option("--budget", so.budget, "Largest k (default: rounds in trace)");

  DiffOptions dopt;
  auto* diff = app.add_subcommand("diff", "Compare first and second submissions");
  diff->add_option("--first", dopt.first, "Directory of first submissions")->required();
  diff->add_option("--second", dopt.second, "Directory of second submissions")->required();
  diff->add_flag("--exclude-all-todo-first", dopt.exclude_all_todo_first, "Drop pairs whose first checklist is all TODO");
  diff->add_option("--thresholds", dopt.thresholds, "Word-ratio thresholds")->delimiter(',');
  diff->add_option("--n-boot", dopt.n_boot, "Bootstrap resamples for transition CIs");

  ClusterOptions co;
  auto* cluster = app.add_subcommand("cluster", "Extract and cluster feedback points");
  cluster->add_option("--reviews", co.reviews, "Directory containing report.json files");
  cluster->add_option("--points", co.points, "File of 'POINT: name | description' lines (skips extraction)");
  cluster->add_option("--question", co.question, "Question index 1-15")->check(CLI::Range(1, 15));
  cluster->add_option("--title", co.title, "Title used in the clustering prompt");

  ReportOptions rpo;
  auto* report = app.add_subcommand("report", "Render HTML and corpus summaries from report.json files");
  report->add_option("--in", rpo.in, "Results directory")->required();

  StatsOptions st;
  auto* stats_cmd = app.add_subcommand("stats", "Statistical procedures");
  stats_cmd->require_subcommand(1);
  auto* s_binom = stats_cmd->add_subcommand("binom", "Exact one-sided binomial test");
  auto* s_cp = stats_cmd->add_subcommand("clopper-pearson", "Clopper-Pearson interval");
  auto* s_wilson = stats_cmd->add_subcommand("wilson", "Wilson interval for a proportion");
  for (auto* sub : {s_binom, s_cp, s_wilson}) {
    sub->add_option("--successes", st.successes)->required();
    sub->add_option("--trials", st.trials)->required();
  }
  s_binom->add_option("--p0", st.p0, "Null proportion");
  s_cp->add_option("--level", st.level);
  s_wilson->add_option("--level", st.level);
  auto* s_bh = stats_cmd->add_subcommand("bh", "Benjamini-Hochberg adjustment of a CSV column");
  s_bh->add_option("--in", st.in)->required();
  s_bh->add_option("--column", st.column)->required();
  auto* s_pp = stats_cmd->add_subcommand("perm-proportions", "Two-group permutation test on binary outcomes");
  s_pp->add_option("--in", st.in)->required();
  s_pp->add_option("--group-column", st.group_column)->required();
  s_pp->add_option("--value-column", st.value_column)->required();
  s_pp->add_option("--n-perm", st.n_perm);
  auto* s_pw = stats_cmd->add_subcommand("perm-within", "Within- vs across-paper variance permutation test");
  s_pw->add_option("--in", st.in)->required();
  s_pw->add_option("--paper-column", st.paper_column)->required();
  s_pw->add_option("--score-column", st.score_column)->required();
  s_pw->add_option("--n-perm", st.n_perm);
  auto* s_boot = stats_cmd->add_subcommand("bootstrap", "Percentile bootstrap interval of a CSV column");
  s_boot->add_option("--in", st.in)->required();
  s_boot->add_option("--column", st.column)->required();
  s_boot->add_option("--statistic", st.statistic, "mean or median");
  s_boot->add_option("--n-boot", st.n_boot);
  s_boot->add_option("--level", st.level);

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.emplace_back("ckassist");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  auto usage_of = [&]() -> std::string {
    for (auto* sub : app.get_subcommands()) {
      for (auto* leaf : sub->get_subcommands()) return leaf->help();
      return sub->help();
    }
    return app.help();
  };

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << usage_of();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error[usage]: " << e.what() << "\n\n" << usage_of();
    return kExitUsage;
  }

  std::string command;
  for (auto* sub : app.get_subcommands()) {
    command = sub->get_name();
    for (auto* leaf : sub->get_subcommands()) command += " " + leaf->get_name();
  }

  try {
    if (*review) {
      if (ro.batch.empty() && ro.paper.empty()) throw UsageError("--paper is required (or --batch)");
      if (ro.batch.empty() && ro.checklist.empty()) throw UsageError("--checklist is required (or --batch)");
      if (!ro.batch.empty() && !ro.paper.empty()) throw UsageError("--batch excludes --paper");
      if (ro.runs < 1) throw UsageError("--runs must be >= 1");
    }
    if (*cluster && co.reviews.empty() == co.points.empty()) {
      throw UsageError("cluster needs exactly one of --reviews or --points");
    }
  } catch (const UsageError& e) {
    err << "error[usage]: " << e.what() << "\n\n" << usage_of();
    return kExitUsage;
  }

  const auto [out_dir, primary] = split_out(g.out);
  std::unique_ptr<Session> session;
  try {
    FlagOverrides flags{g.endpoint, g.model, g.parallelism, g.seed, out_dir};
    const std::optional<fs::path> config_file = g.config ? std::optional<fs::path>(*g.config) : std::nullopt;
    RunConfig cfg = resolve_config(config_file, process_env(), flags);
    cfg.validate();
    session = std::make_unique<Session>(std::move(cfg), args, command,
                                        g.mock ? std::optional<fs::path>(*g.mock) : std::nullopt, primary);
  } catch (const Error& e) {
    err << "error[" << category_name(e.category()) << "]: " << e.what() << '\n';
    return kExitRuntime;
  }

  SentinelGuard sentinel(session->mock());
  int code = kExitOk;
  std::string failure;
  try {
    if (*review) {
      code = cmd_review(*session, ro, out);
    } else if (*audit) {
      code = cmd_audit(*session, ao, out);
    } else if (*attack) {
      code = cmd_attack(*session, at, out);
    } else if (*sweep) {
      code = cmd_sweep(*session, so, out);
    } else if (*diff) {
      code = cmd_diff(*session, dopt, out, err);
    } else if (*cluster) {
      code = cmd_cluster(*session, co, out);
    } else if (*report) {
      code = cmd_report(*session, rpo, out);
    } else if (*stats_cmd) {
      code = cmd_stats(*session, stats_cmd->get_subcommands().front()->get_name(), st, out);
    }
  } catch (const UsageError& e) {
    err << "error[usage]: " << e.what() << "\n\n" << usage_of();
    session->write_manifest("usage_error", e.what());
    return kExitUsage;
  } catch (const Error& e) {
    failure = e.what();
    err << "error[" << category_name(e.category()) << "]: " << e.what() << '\n';
    code = kExitRuntime;
  } catch (const std::exception& e) {
    failure = e.what();
    err << "error[internal]: " << e.what() << '\n';
    code = kExitRuntime;
  }
  session->write_manifest(code == kExitOk ? "ok" : "error", failure);
  return code;
}

}  // namespace ckassist::cli
