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

#include "grlin/diagnostic.h"

#include <array>
#include <utility>

#include <fmt/format.h>

namespace grlin {
namespace {

constexpr std::array<std::pair<Code, std::string_view>, 19> kCodeNames = {{
    {Code::kTypeMismatch, "TYPE_MISMATCH"},
    {Code::kLinearity, "LINEARITY"},
    {Code::kGradeExceeded, "GRADE_EXCEEDED"},
    {Code::kPromoteLinear, "PROMOTE_LINEAR"},
    {Code::kWildcardWeaken, "WILDCARD_WEAKEN"},
    {Code::kMatchUsage, "MATCH_USAGE"},
    {Code::kNoUpperBound, "NO_UPPER_BOUND"},
    {Code::kMeetUndefined, "MEET_UNDEFINED"},
    {Code::kNeedsAnnotation, "NEEDS_ANNOTATION"},
    {Code::kMixedSemiring, "MIXED_SEMIRING"},
    {Code::kUnknownVar, "UNKNOWN_VAR"},
    {Code::kDuplicateDef, "DUPLICATE_DEF"},
    {Code::kSyntax, "SYNTAX"},
    {Code::kPolymorphicDrop, "POLYMORPHIC_DROP"},
    {Code::kNotDroppable, "NOT_DROPPABLE"},
    {Code::kBoxInSubject, "BOX_IN_SUBJECT"},
    {Code::kFunInSubject, "FUN_IN_SUBJECT"},
    {Code::kSideCondition, "SIDE_CONDITION"},
    {Code::kNoMain, "NO_MAIN"},
}};

}  // namespace

std::string format_position(const Position& pos) {
  std::string file = pos.file.empty() ? "<input>" : pos.file;
  return fmt::format("{}:{}:{}", file, pos.line, pos.col);
}

std::string_view code_name(Code code) {
  for (const auto& [c, name] : kCodeNames) {
    if (c == code) return name;
  }
  return "UNKNOWN";
}

std::optional<Code> parse_code(std::string_view name) {
  for (const auto& [c, n] : kCodeNames) {
    if (n == name) return c;
  }
  return std::nullopt;
}

std::string format_diagnostic(const Diagnostic& d) {
  return fmt::format("{}: {}: {}", format_position(d.pos), code_name(d.code),
                     d.message);
}

Error::Error(Code code, std::string message, Position pos)
    : std::runtime_error(message),
      diag_{code, std::move(message), std::move(pos)} {}

Error Error::with_position(const Position& pos) const {
  if (diag_.pos.known()) return *this;
  return Error(diag_.code, diag_.message, pos);
}

}  // namespace grlin
