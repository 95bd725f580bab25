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

#ifndef GRLIN_PARSER_H_
#define GRLIN_PARSER_H_

#include <string>
#include <string_view>
#include <vector>

#include "grlin/grades.h"
#include "grlin/syntax.h"

namespace grlin {

struct Decl {
  std::string name;
  Type type;
  Term body;
  Position pos;  // of the signature
};

struct Program {
  std::string file;
  SemiringId semiring = SemiringId::kNatExact;
  std::vector<Decl> decls;
};

// All parse functions throw Error(kSyntax) positioned inside the input.
// Grade literals use the semiring selected by the `#semiring` pragma (or the
// `sr` argument).
Program parse_program(std::string_view text, std::string file = "");
Type parse_type(std::string_view text,
                SemiringId sr = SemiringId::kNatExact);
Term parse_term(std::string_view text,
                SemiringId sr = SemiringId::kNatExact);
Pattern parse_pattern(std::string_view text);

}  // namespace grlin

#endif  // GRLIN_PARSER_H_
