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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace trajeval {

/// Machine-checkable failure categories. Every throwing operation in the
/// library raises Error with one of these codes; tests assert on the code,
/// messages are for humans.
enum class ErrorCode {
  MalformedXml,
  MalformedBounds,
  SyntaxError,
  UnknownAttribute,
  UnknownFunction,
  UnknownActionKind,
  MissingField,
  MalformedPoint,
  MalformedAction,
  NoActionFound,
  UnknownTranslator,
  IoError,
  SchemaError,
  InvariantViolation,
  EmptyResultSet,
  InsufficientRuns,
  LengthMismatch,
  NoTemplatePages,
  DanglingResetRef,
  UnknownTaskId,
  AdapterFailure,
  ConfigError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

/// Position-carrying variant for the text parsers (XML, condition language,
/// action grammar). Offsets are 0-based byte offsets into the input; line
/// and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(ErrorCode code, const std::string& message, std::size_t offset,
             int line, int column);

  std::size_t offset() const { return offset_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  std::size_t offset_;
  int line_;
  int column_;
};

}  // namespace trajeval
