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

#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "json.hpp"
#include "test_support.hpp"

namespace t = ckassist::testing;
namespace fs = std::filesystem;
using ckassist::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& rel) { return (t::fixture_dir() / rel).string(); }

std::vector<std::string> review_args(const fs::path& out_dir, const std::string& parallelism) {
  return {"--mock",    fixture("mock_review"),          "--out",         out_dir.string(),
          "--parallelism", parallelism, "review", "--paper", fixture("paper/paper.txt"),
          "--checklist", fixture("paper/checklist.txt")};
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("missing --paper is a usage error") {
    t::TempDir dir;
    const auto r = invoke({"--out", dir.path().string(), "review", "--checklist", fixture("paper/checklist.txt")});
    CHECK(r.code == ckassist::cli::kExitUsage);
    CHECK(r.err.find("error[usage]") != std::string::npos);
    CHECK(r.err.find("--paper") != std::string::npos);
  }

  TEST_CASE("unknown subcommand and bad values exit 2") {
    CHECK(invoke({"frobnicate"}).code == ckassist::cli::kExitUsage);
    CHECK(invoke({"--parallelism", "0", "stats", "wilson", "--successes", "1", "--trials", "2"}).code ==
          ckassist::cli::kExitUsage);
    CHECK(invoke({"cluster", "--title", "x"}).code == ckassist::cli::kExitUsage);
  }

  TEST_CASE("help and version exit 0") {
    const auto h = invoke({"--help"});
    CHECK(h.code == 0);
    CHECK(h.out.find("review") != std::string::npos);
    const auto v = invoke({"--version"});
    CHECK(v.code == 0);
    CHECK(v.out == "0.1.0\n");
  }

  TEST_CASE("mock review writes reports without touching the network") {
    t::TempDir a, b;
    const std::size_t before = ckassist::cli::sentinel_hits();
    const auto r1 = invoke(review_args(a.path(), "1"));
    REQUIRE_MESSAGE(r1.code == 0, r1.err);
    const auto r2 = invoke(review_args(b.path(), "15"));
    REQUIRE_MESSAGE(r2.code == 0, r2.err);
    CHECK(ckassist::cli::sentinel_hits() == before);

    const std::string j1 = t::read_file(a.path() / "report.json");
    CHECK(j1 == t::read_file(b.path() / "report.json"));
    CHECK(t::read_file(a.path() / "report.html") == t::read_file(b.path() / "report.html"));
    const auto doc = nlohmann::json::parse(j1);
    CHECK(doc["needs_improvement_count"] == 12);
    CHECK(doc["outcomes"].size() == 15);

    const auto manifest = nlohmann::json::parse(t::read_file(a.path() / "manifest.json"));
    CHECK(manifest["status"] == "ok");
    CHECK(manifest["command"] == "review");
    CHECK(manifest["outputs"].size() == 2);
    CHECK(manifest["inputs"].size() >= 3);
    CHECK(manifest["assets"].size() > 0);
  }

  TEST_CASE("--out with an extension names the primary output") {
    t::TempDir dir;
    const fs::path target = dir.path() / "nested" / "mine.json";
    auto args = review_args(target, "4");
    const auto r = invoke(args);
    REQUIRE_MESSAGE(r.code == 0, r.err);
    CHECK(fs::is_regular_file(target));
    CHECK(fs::is_regular_file(dir.path() / "nested" / "report.html"));
    CHECK_FALSE(fs::exists(dir.path() / "nested" / "report.json"));
  }

  TEST_CASE("review --runs writes one row per run") {
    t::TempDir dir;
    auto args = review_args(dir.path(), "3");
    args.insert(args.end(), {"--runs", "2"});
    const auto r = invoke(args);
    REQUIRE_MESSAGE(r.code == 0, r.err);
    const std::string csv = t::read_file(dir.path() / "runs.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 15 * 2);
  }

  TEST_CASE("http provider without a key fails with an auth error") {
    t::TempDir dir;
    ::unsetenv("CKASSIST_TEST_ABSENT_KEY");
    const fs::path config = dir.path() / "cfg.json";
    t::write_file(config,
                  R"({"provider": {"endpoint_url": "http://127.0.0.1:9/v1", "model_id": "m",)"
                  R"( "api_key_env": "CKASSIST_TEST_ABSENT_KEY", "max_retries": 0}})");
    const auto r = invoke({"--config", config.string(), "--out", (dir.path() / "o").string(), "review", "--paper",
                           fixture("paper/paper.txt"), "--checklist", fixture("paper/checklist.txt")});
    CHECK(r.code == ckassist::cli::kExitRuntime);
    CHECK(r.err.find("CKASSIST_TEST_ABSENT_KEY") != std::string::npos);
  }

  TEST_CASE("attack and sweep on the red-team fixture") {
    t::TempDir dir;
    const auto r = invoke({"--mock", fixture("mock_redteam"), "--out", dir.path().string(), "attack", "--paper",
                           fixture("paper/paper.txt"), "--checklist", fixture("paper/checklist.sidecar"), "--repeats",
                           "2"});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    CHECK(fs::is_regular_file(dir.path() / "trace.json"));
    CHECK(fs::is_regular_file(dir.path() / "evaluation.csv"));
    const auto s = invoke({"--mock", fixture("mock_redteam"), "--out", (dir.path() / "sweep").string(), "sweep",
                           "--paper", fixture("paper/paper.txt"), "--trace", (dir.path() / "trace.json").string(),
                           "--repeats", "2"});
    REQUIRE_MESSAGE(s.code == 0, s.err);
    const std::string csv = t::read_file(dir.path() / "sweep" / "sweep.csv");
    // Header, then one row per budget, question and arm.
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 3 * 15 * 2);
    CHECK(ckassist::cli::sentinel_hits() == 0);
  }

  TEST_CASE("audit over two mock papers") {
    t::TempDir dir;
    const auto r = invoke({"--mock", fixture("mock_generator"), "--out", dir.path().string(), "audit", "--paper",
                           fixture("paper/paper.txt"), "--checklist", fixture("paper/checklist.txt"), "--paper",
                           fixture("paper/paper.txt"), "--checklist", fixture("paper/checklist.sidecar"), "--runs",
                           "3", "--n-perm", "200"});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    const auto j = nlohmann::json::parse(t::read_file(dir.path() / "audit.json"));
    REQUIRE(j.contains("tests"));
    CHECK(j["tests"].size() == 15);
    CHECK(fs::is_regular_file(dir.path() / "audit.csv"));
  }

  TEST_CASE("diff over the resubmission fixture") {
    t::TempDir dir;
    const auto r = invoke({"--out", dir.path().string(), "diff", "--first", fixture("resubmission/first"),
                           "--second", fixture("resubmission/second"), "--exclude-all-todo-first", "--n-boot",
                           "200"});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    const std::string diffs = t::read_file(dir.path() / "diffs.csv");
    CHECK(diffs.rfind("paper_id,question_index,kind,from,to,word_ratio\n", 0) == 0);
    CHECK(r.out.find("40 pairs; 22 changed an answer; 39 changed a justification") != std::string::npos);
    CHECK(fs::is_regular_file(dir.path() / "survival.csv"));
    CHECK(fs::is_regular_file(dir.path() / "transitions.csv"));
  }

  TEST_CASE("cluster replays the claims fixture") {
    t::TempDir dir;
    const auto dirf = t::fixture_dir() / "clustering" / "claims";
    const auto r = invoke({"--mock", dirf.string(), "--out", dir.path().string(), "cluster", "--points",
                           (dirf / "points.txt").string(), "--title", "Claims"});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    const std::string text = t::read_file(dir.path() / "themes.txt");
    CHECK(text.find("- Frequency: 122\n") != std::string::npos);
    CHECK(fs::is_regular_file(dir.path() / "themes.json"));
  }

  TEST_CASE("cluster extracts from report.json files") {
    t::TempDir dir;
    const auto ext = t::fixture_dir() / "extraction";
    const auto review = invoke(review_args(dir.path() / "reviews" / "p1", "2"));
    REQUIRE_MESSAGE(review.code == 0, review.err);
    const auto r = invoke({"--mock", ext.string(), "--out", (dir.path() / "themes").string(), "cluster", "--reviews",
                           (dir.path() / "reviews").string(), "--question", "12"});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    const auto points = nlohmann::json::parse(t::read_file(dir.path() / "themes" / "points.json"));
    CHECK(points.size() == 5);
    CHECK(t::read_file(dir.path() / "themes" / "themes.txt").find("- Frequency: 2\n") != std::string::npos);
  }

  TEST_CASE("report rebuilds HTML and summaries") {
    t::TempDir dir;
    const auto review = invoke(review_args(dir.path() / "results" / "a", "2"));
    REQUIRE_MESSAGE(review.code == 0, review.err);
    const auto r = invoke({"--out", (dir.path() / "summary").string(), "report", "--in",
                           (dir.path() / "results").string()});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    CHECK(fs::is_regular_file(dir.path() / "summary" / "summary.csv"));
    CHECK(fs::is_regular_file(dir.path() / "summary" / "histogram.csv"));
  }

  TEST_CASE("stats subcommands") {
    t::TempDir dir;
    const auto binom = invoke({"--out", dir.path().string(), "stats", "binom", "--successes", "44", "--trials", "63"});
    REQUIRE_MESSAGE(binom.code == 0, binom.err);
    const auto j = nlohmann::json::parse(t::read_file(dir.path() / "stats.json"));
    CHECK(j["p_value"].get<double>() == doctest::Approx(0.0013).epsilon(0.2));

    const fs::path csv = dir.path() / "p.csv";
    t::write_file(csv, "name,p\na,0.01\nb,0.02\nc,0.03\n");
    const auto bh = invoke({"--out", (dir.path() / "bh").string(), "stats", "bh", "--in", csv.string(), "--column", "p"});
    REQUIRE_MESSAGE(bh.code == 0, bh.err);
    CHECK(t::read_file(dir.path() / "bh" / "bh.csv").find("0.03") != std::string::npos);

    const fs::path groups = dir.path() / "g.csv";
    t::write_file(groups, "group,value\na,1\na,1\na,0\nb,0\nb,0\nb,1\n");
    const auto pp = invoke({"--seed", "3", "--out", (dir.path() / "pp").string(), "stats", "perm-proportions", "--in",
                            groups.string(), "--group-column", "group", "--value-column", "value", "--n-perm", "500"});
    REQUIRE_MESSAGE(pp.code == 0, pp.err);

    CHECK(invoke({"--out", (dir.path() / "w").string(), "stats", "wilson", "--successes", "3", "--trials", "10"})
              .code == 0);
    CHECK(invoke({"--out", (dir.path() / "c").string(), "stats", "clopper-pearson", "--successes", "0", "--trials",
                  "10"})
              .code == 0);
    const auto bad = invoke({"--out", (dir.path() / "bad").string(), "stats", "binom", "--successes", "5", "--trials",
                             "3"});
    CHECK(bad.code == ckassist::cli::kExitRuntime);
  }
}
