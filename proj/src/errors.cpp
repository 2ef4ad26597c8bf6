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

#include "wignersim/errors.hpp"

namespace wignersim {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidName: return "InvalidName";
    case ErrorCode::DuplicateRegister: return "DuplicateRegister";
    case ErrorCode::EmptyLayout: return "EmptyLayout";
    case ErrorCode::ValueOutOfRange: return "ValueOutOfRange";
    case ErrorCode::UnknownRegister: return "UnknownRegister";
    case ErrorCode::MissingRegister: return "MissingRegister";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonUnitaryMatrix: return "NonUnitaryMatrix";
    case ErrorCode::LayoutMismatch: return "LayoutMismatch";
    case ErrorCode::InvalidPartition: return "InvalidPartition";
    case ErrorCode::DegenerateState: return "DegenerateState";
    case ErrorCode::SystemTooLarge: return "SystemTooLarge";
    case ErrorCode::SystemTooLargeForOracle: return "SystemTooLargeForOracle";
    case ErrorCode::SystemTooLargeForTrace: return "SystemTooLargeForTrace";
    case ErrorCode::SelfReferentialReverse: return "SelfReferentialReverse";
    case ErrorCode::ReverseOutOfRange: return "ReverseOutOfRange";
    case ErrorCode::ReverseContainsReverse: return "ReverseContainsReverse";
    case ErrorCode::ReverseContainsMeasure: return "ReverseContainsMeasure";
    case ErrorCode::ReverseContainsExpect: return "ReverseContainsExpect";
    case ErrorCode::MultipleMeasure: return "MultipleMeasure";
    case ErrorCode::StepAfterMeasure: return "StepAfterMeasure";
    case ErrorCode::ExpectNotTrailing: return "ExpectNotTrailing";
    case ErrorCode::NonPermutation: return "NonPermutation";
    case ErrorCode::NotInvertible: return "NotInvertible";
    case ErrorCode::UnknownBuiltin: return "UnknownBuiltin";
    case ErrorCode::FactorizationAssertFailed: return "FactorizationAssertFailed";
    case ErrorCode::EngineAssert: return "EngineAssert";
    case ErrorCode::MissingRngStream: return "MissingRngStream";
    case ErrorCode::InvalidCounts: return "InvalidCounts";
    case ErrorCode::InvalidThreshold: return "InvalidThreshold";
    case ErrorCode::Syntax: return "Syntax";
    case ErrorCode::NumericOverflow: return "NumericOverflow";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

SimError::SimError(ErrorCode code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

ParseError::ParseError(ErrorCode code, SourceSpan span, const std::string& message)
    : SimError(code, std::to_string(span.line) + ":" + std::to_string(span.column) +
                         ": " + message),
      span_(span),
      message_(message) {}

namespace {
std::string summarize(const std::vector<ValidationIssue>& issues) {
  if (issues.empty()) return "validation failed";
  std::string out = "step " + std::to_string(issues.front().step_index) + ": " +
                    issues.front().message;
  if (issues.size() > 1) {
    out += " (+" + std::to_string(issues.size() - 1) + " more)";
  }
  return out;
}
}  // namespace

ValidationError::ValidationError(std::vector<ValidationIssue> issues)
    : SimError(issues.empty() ? ErrorCode::Syntax : issues.front().code,
               summarize(issues)),
      issues_(std::move(issues)) {}

}  // namespace wignersim
