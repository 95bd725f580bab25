// Copyright 2026 The grlin Authors
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

#ifndef GRLIN_DIAGNOSTIC_H_
#define GRLIN_DIAGNOSTIC_H_

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace grlin {

class Grade;

// Source location. Line and column are 1-based; 0 means "unknown".
struct Position {
  std::string file;
  int line = 0;
  int col = 0;

  bool known() const { return line > 0; }
};

std::string format_position(const Position& pos);

// Stable diagnostic codes. The string forms are part of the command-line
// contract and are matched by the negative test corpus.
enum class Code {
  kTypeMismatch,
  kLinearity,
  kGradeExceeded,
  kPromoteLinear,
  kWildcardWeaken,
  kMatchUsage,
  kNoUpperBound,
  kMeetUndefined,
  kNeedsAnnotation,
  kMixedSemiring,
  kUnknownVar,
  kDuplicateDef,
  kSyntax,
  // Derivation failures.
  kPolymorphicDrop,
  kNotDroppable,
  kBoxInSubject,
  kFunInSubject,
  kSideCondition,
  // Running programs.
  kNoMain,
};

std::string_view code_name(Code code);
std::optional<Code> parse_code(std::string_view name);

struct Diagnostic {
  Code code;
  std::string message;
  Position pos;
};

// `file:line:col: CODE: message`
std::string format_diagnostic(const Diagnostic& d);

// Every rejection in the library is raised as an Error carrying exactly one
// diagnostic.
class Error : public std::runtime_error {
 public:
  Error(Code code, std::string message, Position pos = {});

  const Diagnostic& diagnostic() const { return diag_; }
  Code code() const { return diag_.code; }
  const Position& position() const { return diag_.pos; }

  // Attaches a position if the error does not carry one yet.
  Error with_position(const Position& pos) const;

 private:
  Diagnostic diag_;
};

}  // namespace grlin

#endif  // GRLIN_DIAGNOSTIC_H_
