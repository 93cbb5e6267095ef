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

#include "ckassist/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "ckassist/error.hpp"
#include "ckassist/text.hpp"

namespace ckassist {

std::vector<LigatureExpansion> IngestConfig::default_ligatures() {
  return {
      {U'ﬀ', "ff"}, {U'ﬁ', "fi"}, {U'ﬂ', "fl"}, {U'ﬃ', "ffi"},
      {U'ﬄ', "ffl"}, {U'ﬅ', "st"}, {U'ﬆ', "st"},
  };
}

void IngestConfig::validate() const {
  if (word_cap == 0) throw PreconditionError("word_cap must be positive");
  for (char32_t required : {U'ﬀ', U'ﬁ', U'ﬂ', U'ﬃ', U'ﬄ'}) {
    const bool mapped = std::any_of(ligature_map.begin(), ligature_map.end(),
                                    [&](const auto& l) { return l.codepoint == required; });
    if (!mapped) throw PreconditionError("ligature map must cover fi, fl, ff, ffi and ffl");
  }
}

RawDocument load_document(const std::filesystem::path& path, SourceKind kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("failed reading " + path.string());
  return RawDocument{kind, buf.str(), path.string()};
}

namespace {

// Decodes one UTF-8 sequence at `pos`, returning the codepoint and its length,
// or throws IngestError naming the offending offset.
std::pair<char32_t, std::size_t> decode_utf8(std::string_view s, std::size_t pos) {
  const auto b0 = static_cast<unsigned char>(s[pos]);
  if (b0 < 0x80) return {b0, 1};
  std::size_t len = 0;
  char32_t cp = 0;
  char32_t min = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2; cp = b0 & 0x1F; min = 0x80;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3; cp = b0 & 0x0F; min = 0x800;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4; cp = b0 & 0x07; min = 0x10000;
  } else {
    throw IngestError(pos, "invalid UTF-8 lead byte at offset " + std::to_string(pos));
  }
  if (pos + len > s.size()) {
    throw IngestError(pos, "truncated UTF-8 sequence at offset " + std::to_string(pos));
  }
  for (std::size_t i = 1; i < len; ++i) {
    const auto b = static_cast<unsigned char>(s[pos + i]);
    if ((b & 0xC0) != 0x80) {
      throw IngestError(pos + i, "invalid UTF-8 continuation byte at offset " +
                                     std::to_string(pos + i));
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    throw IngestError(pos, "invalid UTF-8 codepoint at offset " + std::to_string(pos));
  }
  return {cp, len};
}

constexpr bool is_horizontal_space(char c) noexcept {
  return c == ' ' || c == '\t' || c == '\v' || c == '\f';
}

}  // namespace

std::string normalize_text(const RawDocument& raw, const IngestConfig& cfg) {
  const std::string_view in = raw.text;
  std::string out;
  out.reserve(in.size());
  bool pending_space = false;
  auto flush_space = [&] {
    if (pending_space) out.push_back(' ');
    pending_space = false;
  };
  std::size_t pos = 0;
  while (pos < in.size()) {
    const char c = in[pos];
    if (is_horizontal_space(c)) {
      pending_space = true;
      ++pos;
      continue;
    }
    if (c == '\r') {
      flush_space();
      out.push_back('\n');
      pos += (pos + 1 < in.size() && in[pos + 1] == '\n') ? 2 : 1;
      continue;
    }
    if (c == '\n') {
      flush_space();
      out.push_back('\n');
      ++pos;
      continue;
    }
    const auto [cp, len] = decode_utf8(in, pos);
    flush_space();
    const auto lig = std::find_if(cfg.ligature_map.begin(), cfg.ligature_map.end(),
                                  [cp = cp](const auto& l) { return l.codepoint == cp; });
    if (lig != cfg.ligature_map.end()) {
      out.append(lig->expansion);
    } else {
      out.append(in.substr(pos, len));
    }
    pos += len;
  }
  flush_space();
  return out;
}

Truncation truncate_words(std::string_view text, std::size_t cap) {
  if (cap == 0) throw PreconditionError("word cap must be positive");
  std::size_t words = 0;
  std::size_t cap_word_end = text.size();
  bool in_word = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text::is_space(text[i])) {
      if (in_word && words == cap) cap_word_end = i;
      in_word = false;
    } else if (!in_word) {
      if (words == cap) return {std::string(text.substr(0, cap_word_end)), true};
      in_word = true;
      ++words;
    }
  }
  return {std::string(text), false};
}

std::string truncation_warning(std::size_t original_words, std::size_t cap) {
  return "Paper has " + std::to_string(original_words) + " words; only the first " +
         std::to_string(cap) + " words were reviewed.";
}

PaperDocument ingest(const RawDocument& raw, const IngestConfig& cfg) {
  cfg.validate();
  const std::string normalized = normalize_text(raw, cfg);
  auto [text, truncated] = truncate_words(normalized, cfg.word_cap);
  PaperDocument doc;
  doc.word_count = text::count_words(text);
  doc.truncated = truncated;
  if (truncated) doc.warnings.push_back(truncation_warning(text::count_words(normalized), cfg.word_cap));
  doc.text = std::move(text);
  return doc;
}

}  // namespace ckassist
