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

#ifndef GRLIN_TYPECHECK_H_
#define GRLIN_TYPECHECK_H_

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "grlin/diagnostic.h"
#include "grlin/grades.h"
#include "grlin/parser.h"
#include "grlin/syntax.h"

namespace grlin {

enum class AssumptionKind { kLinear, kGraded };

struct Assumption {
  AssumptionKind kind = AssumptionKind::kLinear;
  Type type;
  std::optional<Grade> grade;  // kGraded only

  static Assumption linear(Type a) {
    return {AssumptionKind::kLinear, std::move(a), std::nullopt};
  }
  static Assumption graded(Type a, Grade r) {
    return {AssumptionKind::kGraded, std::move(a), r};
  }
};

// Ordered binder environment. Later entries shadow earlier ones.
struct TypingCtx {
  std::vector<std::pair<std::string, Assumption>> entries;

  TypingCtx& add(std::string x, Assumption a) {
    entries.emplace_back(std::move(x), std::move(a));
    return *this;
  }
  const Assumption* find(const std::string& x) const;
};

// How often a binder has been consumed so far.
struct Usage {
  int linear = 0;               // linear binders
  std::optional<Grade> graded;  // graded binders; absent means 0

  friend bool operator==(const Usage&, const Usage&) = default;
};

using UsageMap = std::map<std::string, Usage>;

// Final accounting for one binder introduced inside a checked term. Used by
// tests and by the usage cross-check against the instrumented evaluator.
struct BinderRecord {
  std::string name;
  Position pos;
  const PatNode* site = nullptr;  // pattern variable, if bound by a pattern
  AssumptionKind kind = AssumptionKind::kLinear;
  std::optional<Grade> declared;  // graded binders
  Usage used;
};

// Closed definitions visible by name, plus the results of elaborating the
// derive nodes met during checking.
struct CheckEnv {
  SemiringId semiring = SemiringId::kNatExact;
  std::map<std::string, Type> globals;
  // Derive node -> elaborated closed term (filled while checking).
  std::unordered_map<const TermNode*, Term> elaborated;
  std::vector<BinderRecord> binders;
};

// Checking mode. Returns the usages of the context variables; binders
// introduced inside `t` are discharged (and recorded in env.binders).
UsageMap check_term(const TypingCtx& ctx, const Term& t, const Type& expected,
                    CheckEnv& env);
// Synthesis mode.
std::pair<Type, UsageMap> synth_term(const TypingCtx& ctx, const Term& t,
                                     CheckEnv& env);

// check_term followed by discharging every context variable: linear
// variables exactly once, graded ones with usage ⊑ declared grade.
UsageMap check_judgement(const TypingCtx& ctx, const Term& t,
                         const Type& expected, CheckEnv& env);

// Pattern typing under an optional enclosing grade. Returns the binders.
TypingCtx check_pattern(const std::optional<Grade>& enc, const Pattern& p,
                        const Type& a);

// Joins per-branch usages: graded variables by least upper bound, linear
// ones must agree. Throws Error(kNoUpperBound / kLinearity).
UsageMap merge_branch_usages(const std::vector<UsageMap>& branches,
                             SemiringId sr);

struct CheckedProgram {
  Program source;
  std::vector<Diagnostic> diagnostics;
  // Bodies with derive nodes replaced by their elaborations (drop at Int
  // stays primitive). Only meaningful when diagnostics is empty.
  std::map<std::string, Term> bodies;
  std::vector<BinderRecord> binders;
};

CheckedProgram check_program_full(const Program& p);
std::vector<Diagnostic> check_program(const Program& p);

// Replaces derive nodes using env.elaborated.
Term elaborate(const Term& t, const CheckEnv& env);

}  // namespace grlin

#endif  // GRLIN_TYPECHECK_H_
