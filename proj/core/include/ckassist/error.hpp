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
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ckassist {

/// Coarse error classes. The CLI prints the category name so scripts can
/// branch on failures without parsing messages.
enum class ErrorCategory {
  kIo,
  kIngest,
  kParse,
  kSchema,
  kPrecondition,
  kProvider,
  kAuth,
  kTimeout,
  kRetriesExhausted,
  kReview,
};

std::string_view category_name(ErrorCategory category);

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message) : Error(ErrorCategory::kIo, message) {}
};

class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& message)
      : Error(ErrorCategory::kPrecondition, message) {}
};

/// Raised for byte sequences that are not valid UTF-8.
class IngestError : public Error {
 public:
  IngestError(std::size_t byte_offset, const std::string& message)
      : Error(ErrorCategory::kIngest, message), byte_offset_(byte_offset) {}
  std::size_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& message) : Error(ErrorCategory::kParse, message) {}
};

class UnknownAnswerError : public ParseError {
 public:
  explicit UnknownAnswerError(std::string token);
  const std::string& token() const noexcept { return token_; }

 private:
  std::string token_;
};

class MissingQuestionsError : public ParseError {
 public:
  explicit MissingQuestionsError(std::vector<int> missing);
  const std::vector<int>& missing() const noexcept { return missing_; }

 private:
  std::vector<int> missing_;
};

class AmbiguousBlockError : public ParseError {
 public:
  AmbiguousBlockError(int index, const std::string& detail);
  int index() const noexcept { return index_; }

 private:
  int index_;
};

class SchemaError : public Error {
 public:
  SchemaError(std::string field, std::size_t line, const std::string& detail);
  const std::string& field() const noexcept { return field_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string field_;
  std::size_t line_;
};

class ProviderError : public Error {
 public:
  explicit ProviderError(const std::string& message)
      : Error(ErrorCategory::kProvider, message) {}

 protected:
  ProviderError(ErrorCategory category, const std::string& message) : Error(category, message) {}
};

/// Failures worth another attempt: transport errors, rate limits, 5xx, empty bodies.
class TransientError : public ProviderError {
 public:
  explicit TransientError(const std::string& message) : ProviderError(message) {}

 protected:
  TransientError(ErrorCategory category, const std::string& message)
      : ProviderError(category, message) {}
};

class TimeoutError : public TransientError {
 public:
  explicit TimeoutError(const std::string& message)
      : TransientError(ErrorCategory::kTimeout, message) {}
};

class AuthError : public ProviderError {
 public:
  explicit AuthError(const std::string& message) : ProviderError(ErrorCategory::kAuth, message) {}
};

class ScriptExhaustedError : public ProviderError {
 public:
  explicit ScriptExhaustedError(const std::string& message) : ProviderError(message) {}
};

class RetriesExhaustedError : public Error {
 public:
  RetriesExhaustedError(int attempts, std::string last_cause);
  int attempts() const noexcept { return attempts_; }
  const std::string& last_cause() const noexcept { return last_cause_; }

 private:
  int attempts_;
  std::string last_cause_;
};

class ScoreParseError : public ParseError {
 public:
  enum class Kind { kMissing, kOutOfDomain };
  ScoreParseError(Kind kind, const std::string& message) : ParseError(message), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// The attacker returned delimiters around an empty revision.
class EmptyRevisionError : public ParseError {
 public:
  explicit EmptyRevisionError(const std::string& message) : ParseError(message) {}
};

/// Raised by batch operations; lists every item that failed.
class AggregateError : public Error {
 public:
  struct Failure {
    int index;
    std::string message;
  };
  explicit AggregateError(std::vector<Failure> failures);
  const std::vector<Failure>& failures() const noexcept { return failures_; }
  std::vector<int> failed_indices() const;

 private:
  std::vector<Failure> failures_;
};

}  // namespace ckassist
