// Copyright 2026 The llrkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LLRKIT_ERRORS_HPP
#define LLRKIT_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace llrkit {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two score objects both provide a score for the same trial.
class OverlapError : public Error {
 public:
  using Error::Error;
};

/// A selection left no (model, segment) pairs.
class EmptySelection : public Error {
 public:
  using Error::Error;
};

/// Malformed binary container (magic, version, kind, truncation).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// A cell byte outside the allowed set for the container kind.
class InvalidCellValue : public FormatError {
 public:
  using FormatError::FormatError;
};

/// Errors tied to a line of a text input.  Line numbers are 1-based.
class LineError : public Error {
 public:
  LineError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ParseError : public LineError {
 public:
  using LineError::LineError;
};

class DuplicateTrial : public LineError {
 public:
  using LineError::LineError;
};

/// An operation needs at least one target and one non-target (or similar).
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

/// Subsystem score stacks disagree on trial count or order.
class AlignmentError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// The objective returned a non-finite value or gradient.
class OracleFailure : public Error {
 public:
  using Error::Error;
};

/// Argument outside its documented domain (probability not in (0,1), r <= 0, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Violated type invariant at construction time (duplicate names, bad shape).
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace llrkit

#endif  // LLRKIT_ERRORS_HPP
