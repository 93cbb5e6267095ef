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
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace ckassist::text {

/// ASCII whitespace: space, \t, \n, \v, \f, \r. Locale independent.
constexpr bool is_space(char c) noexcept {
  return c == ' ' || c == '\t' || c == '\n' || c == '\v' || c == '\f' || c == '\r';
}

std::string_view trim(std::string_view s) noexcept;
std::string to_lower(std::string_view s);
bool iequals(std::string_view a, std::string_view b) noexcept;
bool istarts_with(std::string_view s, std::string_view prefix) noexcept;

/// Number of maximal runs of non-whitespace characters.
std::size_t count_words(std::string_view s) noexcept;

/// Splits on '\n'. A trailing newline does not produce an extra empty line.
std::vector<std::string_view> split_lines(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// Replaces each {name} placeholder in a single left-to-right pass, so text
/// substituted into one slot is never rescanned for other placeholders.
struct Substitution {
  std::string_view placeholder;
  std::string_view value;
};
std::string substitute(std::string_view tmpl, std::initializer_list<Substitution> subs);

}  // namespace ckassist::text
