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

#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ckassist {

enum class SourceKind { kPdfExtracted, kPlainText };

struct RawDocument {
  SourceKind source_kind = SourceKind::kPlainText;
  std::string text;
  std::string origin_path;  // informational only
};

/// Paper text after normalization and the word cap.
struct PaperDocument {
  std::string text;
  std::size_t word_count = 0;
  bool truncated = false;
  std::vector<std::string> warnings;
};

struct LigatureExpansion {
  char32_t codepoint;
  std::string expansion;
};

inline constexpr std::size_t kDefaultWordCap = 15000;

struct IngestConfig {
  std::size_t word_cap = kDefaultWordCap;
  std::vector<LigatureExpansion> ligature_map = default_ligatures();

  /// U+FB00..U+FB06: ff, fi, fl, ffi, ffl, long-s t, st.
  static std::vector<LigatureExpansion> default_ligatures();

  /// Throws PreconditionError unless word_cap > 0 and fi/fl/ff/ffi/ffl are mapped.
  void validate() const;
};

/// Reads a UTF-8 file. Throws IoError if it cannot be read.
RawDocument load_document(const std::filesystem::path& path, SourceKind kind);

/// Expands ligatures, converts CRLF and lone CR to LF and collapses runs of
/// horizontal whitespace (space, tab, \v, \f) to one space. Everything else
/// is copied through. Throws IngestError at the first invalid UTF-8 byte.
std::string normalize_text(const RawDocument& raw, const IngestConfig& cfg);

struct Truncation {
  std::string text;
  bool truncated = false;
};

/// Keeps the first `cap` whitespace-delimited words with their original
/// separators. Text at or under the cap is returned unchanged.
Truncation truncate_words(std::string_view text, std::size_t cap);

PaperDocument ingest(const RawDocument& raw, const IngestConfig& cfg = {});

/// Warning attached to documents cut at the word cap.
std::string truncation_warning(std::size_t original_words, std::size_t cap);

}  // namespace ckassist
