/*
 * Copyright 2026 The trajeval Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "trajeval/error.hpp"

namespace trajeval {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedXml: return "MalformedXml";
    case ErrorCode::MalformedBounds: return "MalformedBounds";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownAttribute: return "UnknownAttribute";
    case ErrorCode::UnknownFunction: return "UnknownFunction";
    case ErrorCode::UnknownActionKind: return "UnknownActionKind";
    case ErrorCode::MissingField: return "MissingField";
    case ErrorCode::MalformedPoint: return "MalformedPoint";
    case ErrorCode::MalformedAction: return "MalformedAction";
    case ErrorCode::NoActionFound: return "NoActionFound";
    case ErrorCode::UnknownTranslator: return "UnknownTranslator";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::EmptyResultSet: return "EmptyResultSet";
    case ErrorCode::InsufficientRuns: return "InsufficientRuns";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NoTemplatePages: return "NoTemplatePages";
    case ErrorCode::DanglingResetRef: return "DanglingResetRef";
    case ErrorCode::UnknownTaskId: return "UnknownTaskId";
    case ErrorCode::AdapterFailure: return "AdapterFailure";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Error";
}

ParseError::ParseError(ErrorCode code, const std::string& message,
                       std::size_t offset, int line, int column)
    : Error(code, message + " (line " + std::to_string(line) + ", column " +
                      std::to_string(column) + ")"),
      offset_(offset),
      line_(line),
      column_(column) {}

}  // namespace trajeval
