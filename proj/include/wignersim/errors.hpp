// Copyright 2026 The wignersim Authors
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
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wignersim {

enum class ErrorCode {
  // Layouts and states.
  InvalidName,
  DuplicateRegister,
  EmptyLayout,
  ValueOutOfRange,
  UnknownRegister,
  MissingRegister,
  DimensionMismatch,
  NonUnitaryMatrix,
  LayoutMismatch,
  InvalidPartition,
  DegenerateState,
  SystemTooLarge,
  SystemTooLargeForOracle,
  SystemTooLargeForTrace,
  // Protocol validation.
  SelfReferentialReverse,
  ReverseOutOfRange,
  ReverseContainsReverse,
  ReverseContainsMeasure,
  ReverseContainsExpect,
  MultipleMeasure,
  StepAfterMeasure,
  ExpectNotTrailing,
  NonPermutation,
  NotInvertible,
  UnknownBuiltin,
  // Interpreters.
  FactorizationAssertFailed,
  EngineAssert,
  MissingRngStream,
  // Statistics.
  InvalidCounts,
  InvalidThreshold,
  // Protocol files.
  Syntax,
  NumericOverflow,
  // Host I/O.
  Io,
};

const char* error_code_name(ErrorCode code);

class SimError : public std::runtime_error {
 public:
  SimError(ErrorCode code, const std::string& message);
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

/// Location of a token in a protocol file. Line and column are 1-based;
/// offset is the 0-based byte position.
struct SourceSpan {
  int line = 1;
  int column = 1;
  std::size_t offset = 0;
  bool operator==(const SourceSpan&) const = default;
};

class ParseError : public SimError {
 public:
  ParseError(ErrorCode code, SourceSpan span, const std::string& message);
  const SourceSpan& span() const { return span_; }
  /// The diagnostic without the line:column prefix that what() carries.
  const std::string& message() const { return message_; }

 private:
  SourceSpan span_;
  std::string message_;
};

/// One validation failure. step_index is 1-based; 0 marks protocol-level
/// issues (layout, init). The span is present when the protocol came from
/// a file.
struct ValidationIssue {
  int step_index = 0;
  ErrorCode code = ErrorCode::Syntax;
  std::string message;
  std::optional<SourceSpan> span;
};

class ValidationError : public SimError {
 public:
  explicit ValidationError(std::vector<ValidationIssue> issues);
  const std::vector<ValidationIssue>& issues() const { return issues_; }

 private:
  std::vector<ValidationIssue> issues_;
};

}  // namespace wignersim
