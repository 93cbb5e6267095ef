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

#include "ckassist/error.hpp"

#include <sstream>
#include <utility>

namespace ckassist {

std::string_view category_name(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::kIo: return "io";
    case ErrorCategory::kIngest: return "ingest";
    case ErrorCategory::kParse: return "parse";
    case ErrorCategory::kSchema: return "schema";
    case ErrorCategory::kPrecondition: return "precondition";
    case ErrorCategory::kProvider: return "provider";
    case ErrorCategory::kAuth: return "auth";
    case ErrorCategory::kTimeout: return "timeout";
    case ErrorCategory::kRetriesExhausted: return "retries_exhausted";
    case ErrorCategory::kReview: return "review";
  }
  return "unknown";
}

namespace {

std::string join_ints(const std::vector<int>& values) {
  std::ostringstream out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out << ", ";
    out << values[i];
  }
  return out.str();
}

}  // namespace

UnknownAnswerError::UnknownAnswerError(std::string token)
    : ParseError("unknown checklist answer '" + token + "' (expected Yes, No, NA or TODO)"),
      token_(std::move(token)) {}

MissingQuestionsError::MissingQuestionsError(std::vector<int> missing)
    : ParseError("checklist is missing question(s): " + join_ints(missing)),
      missing_(std::move(missing)) {}

AmbiguousBlockError::AmbiguousBlockError(int index, const std::string& detail)
    : ParseError("ambiguous checklist block for question " + std::to_string(index) + ": " + detail),
      index_(index) {}

SchemaError::SchemaError(std::string field, std::size_t line, const std::string& detail)
    : Error(ErrorCategory::kSchema,
            "line " + std::to_string(line) + ": field '" + field + "': " + detail),
      field_(std::move(field)),
      line_(line) {}

RetriesExhaustedError::RetriesExhaustedError(int attempts, std::string last_cause)
    : Error(ErrorCategory::kRetriesExhausted,
            "gave up after " + std::to_string(attempts) + " attempt(s): " + last_cause),
      attempts_(attempts),
      last_cause_(std::move(last_cause)) {}

namespace {

std::string describe_failures(const std::vector<AggregateError::Failure>& failures) {
  std::ostringstream out;
  out << failures.size() << " item(s) failed:";
  for (const auto& f : failures) out << "\n  [" << f.index << "] " << f.message;
  return out.str();
}

}  // namespace

AggregateError::AggregateError(std::vector<Failure> failures)
    : Error(ErrorCategory::kReview, describe_failures(failures)), failures_(std::move(failures)) {}

std::vector<int> AggregateError::failed_indices() const {
  std::vector<int> out;
  out.reserve(failures_.size());
  for (const auto& f : failures_) out.push_back(f.index);
  return out;
}

}  // namespace ckassist
