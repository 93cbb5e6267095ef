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

#include "ckassist/error.hpp"
#include "ckassist/ingest.hpp"
#include "ckassist/rng.hpp"
#include "ckassist/text.hpp"
#include "test_support.hpp"

using namespace ckassist;

namespace {

RawDocument raw(std::string text) { return RawDocument{SourceKind::kPdfExtracted, std::move(text), ""}; }

std::string random_text(Rng& rng, std::size_t words) {
  static const char* kPieces[] = {"alpha", "b\xEF\xAC\x81t", "\xEF\xAC\x84ow", "x", "caf\xC3\xA9", "q"};
  static const char* kSeps[] = {" ", "  ", "\t", "\n", "\r\n", " \t ", "\r", "\f"};
  std::string out;
  for (std::size_t i = 0; i < words; ++i) {
    out += kPieces[rng.below(6)];
    out += kSeps[rng.below(8)];
  }
  return out;
}

}  // namespace

TEST_SUITE("ingest") {

TEST_CASE("ligatures expand") {
  const IngestConfig cfg;
  CHECK(normalize_text(raw("e\xEF\xAC\x80" "ect \xEF\xAC\x81" "nd \xEF\xAC\x82" "ow"), cfg) == "effect find flow");
  CHECK(normalize_text(raw("o\xEF\xAC\x83\x63\x65 wa\xEF\xAC\x84\x65"), cfg) == "office waffle");
  CHECK(normalize_text(raw("\xEF\xAC\x85\xEF\xAC\x86"), cfg) == "stst");
}

TEST_CASE("whitespace and line endings") {
  const IngestConfig cfg;
  CHECK(normalize_text(raw("a  \t b"), cfg) == "a b");
  CHECK(normalize_text(raw("a\r\nb\rc\n"), cfg) == "a\nb\nc\n");
  CHECK(normalize_text(raw("a \n  b"), cfg) == "a \n b");
  CHECK(normalize_text(raw("\xC3\xA9t\xC3\xA9"), cfg) == "\xC3\xA9t\xC3\xA9");
}

TEST_CASE("invalid UTF-8 reports the byte offset") {
  const IngestConfig cfg;
  try {
    normalize_text(raw("abc\xFF"), cfg);
    FAIL("expected IngestError");
  } catch (const IngestError& e) {
    CHECK(e.byte_offset() == 3);
  }
  CHECK_THROWS_AS(normalize_text(raw("\xC3"), cfg), IngestError);
  CHECK_THROWS_AS(normalize_text(raw("\xC0\x80"), cfg), IngestError);
  CHECK_THROWS_AS(normalize_text(raw("\xED\xA0\x80"), cfg), IngestError);
}

TEST_CASE("normalization is idempotent and leaves no horizontal runs") {
  Rng rng(3);
  const IngestConfig cfg;
  for (int trial = 0; trial < 200; ++trial) {
    const std::string once = normalize_text(raw(random_text(rng, 1 + rng.below(60))), cfg);
    CHECK(normalize_text(raw(once), cfg) == once);
    CHECK(once.find("  ") == std::string::npos);
    CHECK(once.find('\t') == std::string::npos);
    CHECK(once.find('\r') == std::string::npos);
    CHECK(once.find("\xEF\xAC") == std::string::npos);
  }
}

TEST_CASE("truncation keeps an exact word prefix") {
  CHECK(truncate_words("a b c", 3).truncated == false);
  CHECK(truncate_words("a b c", 3).text == "a b c");
  CHECK(truncate_words("a b c d", 3).text == "a b c");
  CHECK(truncate_words("a\nb  c\td e", 3).text == "a\nb  c");
  CHECK_THROWS_AS(truncate_words("a", 0), PreconditionError);

  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const std::string t = random_text(rng, rng.below(80));
    const std::size_t cap = 1 + rng.below(50);
    const auto cut = truncate_words(t, cap);
    const std::size_t n = text::count_words(t);
    CHECK(t.starts_with(cut.text));
    CHECK(text::count_words(cut.text) == std::min(n, cap));
    CHECK(cut.truncated == (n > cap));
  }
}

TEST_CASE("ingest applies the cap and records a warning") {
  std::string big;
  for (int i = 0; i < 20000; ++i) big += "w" + std::to_string(i) + (i % 17 == 0 ? "\n" : " ");
  const auto doc = ingest(raw(big));
  CHECK(doc.word_count == 15000);
  CHECK(doc.truncated);
  REQUIRE(doc.warnings.size() == 1);
  CHECK(doc.warnings[0] == truncation_warning(20000, 15000));
  CHECK(doc.warnings[0].find("15000") != std::string::npos);

  const auto small = ingest(raw("just a few words"));
  CHECK_FALSE(small.truncated);
  CHECK(small.warnings.empty());
  CHECK(small.word_count == 4);
}

TEST_CASE("config validation") {
  IngestConfig cfg;
  cfg.word_cap = 0;
  CHECK_THROWS_AS(cfg.validate(), PreconditionError);
  IngestConfig missing;
  missing.ligature_map.erase(missing.ligature_map.begin());
  CHECK_THROWS_AS(missing.validate(), PreconditionError);
  CHECK_NOTHROW(IngestConfig{}.validate());
}

TEST_CASE("fixture paper loads unchanged") {
  const auto path = testing::fixture_dir() / "paper" / "paper.txt";
  const auto doc = testing::fixture_paper();
  CHECK(doc.text == testing::read_file(path));
  CHECK_FALSE(doc.truncated);
  CHECK_THROWS_AS(load_document(testing::fixture_dir() / "missing.txt", SourceKind::kPlainText), IoError);
}

}  // TEST_SUITE
