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

#ifndef GRLIN_DERIVING_H_
#define GRLIN_DERIVING_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "grlin/grades.h"
#include "grlin/syntax.h"

namespace grlin {

struct DeriveRequest {
  DeriveKind kind = DeriveKind::kPush;
  Type type;
  SemiringId semiring = SemiringId::kNatExact;
  // push: r. fmap: the grade g of the boxed function. pull: the result
  // grade for subjects without parameters, and the fallback for parameters
  // missing from `grades`.
  std::optional<Grade> grade;
  // pull: grade per parameter (type variable name, or "Int" / "Res").
  std::map<std::string, Grade> grades;
  // fmap: the mapped type variable (default: the unique one) and the name
  // of its image (default: fresh).
  std::string var;
  std::string result_var;
};

struct DerivedCombinator {
  DeriveRequest request;
  std::string key;  // kind@type@semiring@grades
  Term term;        // closed
  Type type;        // concluded scheme
  std::vector<std::string> side_conditions;
  std::vector<std::string> trace;  // one line per derivation case
};

// Memoized and thread-safe. Every result has been checked against its
// concluded type. Throws Error with a derivation code on failure.
DerivedCombinator derive(const DeriveRequest& req);

DerivedCombinator derive_push(const Type& t, const Grade& r);
DerivedCombinator derive_pull(const Type& t,
                              const std::map<std::string, Grade>& rs,
                              std::optional<Grade> result = std::nullopt);
DerivedCombinator derive_drop(const Type& t,
                              SemiringId sr = SemiringId::kNatExact);
DerivedCombinator derive_copyshape(const Type& t,
                                   SemiringId sr = SemiringId::kNatExact);
DerivedCombinator derive_fmap(const Type& t, const Grade& g,
                              std::string var = "",
                              std::string result_var = "");

std::string derive_key(const DeriveRequest& req);

// Parameters of a subject: type variables in order of first occurrence,
// followed by "Int" / "Res" when those base types occur.
std::vector<std::string> type_parameters(const Type& t);
// Replaces each parameter p by Box(grade(p), p).
Type box_parameters(const Type& t, const std::map<std::string, Grade>& g);
// Whether push at `t` needs 1 ⊑ r.
bool push_requires_one(const Type& t);
// How often fmap's function is applied, per element of `t`; nullopt when
// the semiring cannot express it.
std::optional<Grade> fmap_occurrences(const Type& t, const std::string& var,
                                      SemiringId sr);

// ε : □_1 A ⊸ A and δ : □_{r*s} A ⊸ □_r □_s A.
Term comonad_eps();
Term comonad_delta();
Type comonad_eps_type(const Type& a, SemiringId sr);
Type comonad_delta_type(const Type& a, const Grade& r, const Grade& s);

size_t derive_cache_size();
void derive_cache_clear();

}  // namespace grlin

#endif  // GRLIN_DERIVING_H_
