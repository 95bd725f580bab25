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

#ifndef GRLIN_SYNTAX_H_
#define GRLIN_SYNTAX_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "grlin/diagnostic.h"
#include "grlin/grades.h"

namespace grlin {

// ---------------------------------------------------------------------------
// Types

enum class BaseKind : uint8_t { kInt, kRes };

// Int admits weakening (it has a primitive drop); Res is linear-only.
bool base_droppable(BaseKind b);
std::string_view base_name(BaseKind b);

enum class TypeKind : uint8_t {
  kFun,
  kTensor,
  kSum,
  kUnit,
  kBox,
  kVar,     // type variable α (lower-case)
  kRecVar,  // recursion variable X (upper-case), bound by kMu
  kMu,
  kBase,
};

struct TypeNode;
using Type = std::shared_ptr<const TypeNode>;

struct TypeNode {
  TypeKind kind;
  Type a;  // Fun/Tensor/Sum left, Box payload, Mu body
  Type b;  // Fun/Tensor/Sum right
  std::optional<Grade> grade;  // Box
  std::string name;            // Var, RecVar, Mu binder
  BaseKind base = BaseKind::kInt;
};

Type ty_fun(Type a, Type b);
Type ty_tensor(Type a, Type b);
Type ty_sum(Type a, Type b);
Type ty_unit();
Type ty_box(Grade r, Type a);
Type ty_var(std::string name);
Type ty_recvar(std::string name);
Type ty_mu(std::string name, Type body);
Type ty_base(BaseKind b);
inline Type ty_int() { return ty_base(BaseKind::kInt); }

// Structural equality up to renaming of μ binders.
bool type_alpha_eq(const Type& a, const Type& b);
// Equi-recursive equality: like type_alpha_eq but a μ type also equals its
// unrolling.
bool type_equiv(const Type& a, const Type& b);

// Substitutes body[μX.body / X]. Throws std::invalid_argument if `mu` is
// not a kMu node.
Type unroll_mu(const Type& mu);

// Capture-avoiding substitution of a recursion variable.
Type subst_recvar(const Type& t, const std::string& x, const Type& s);
// Substitution of type variables (α ↦ S). Type variables have no binders.
Type subst_tyvars(const Type& t, const std::map<std::string, Type>& s);

// Free type variables in order of first occurrence (left to right).
std::vector<std::string> free_tyvars(const Type& t);
std::vector<std::string> free_recvars(const Type& t);

bool contains_kind(const Type& t, TypeKind k);
bool contains_base(const Type& t, BaseKind b);

// Every recursion variable is bound, no μ body is a bare recursion variable,
// and all box grades share `sr`. Throws Error(kSyntax / kMixedSemiring).
void check_type_wf(const Type& t, std::optional<SemiringId> sr,
                   const Position& pos = {});

// |A| > 1, computed as a least fixed point over {0, 1, 2+}.
bool multi_constructor(const Type& t);
// The saturated constructor count itself (0, 1 or 2).
int constructor_count(const Type& t);

// ---------------------------------------------------------------------------
// Patterns

enum class ConKind : uint8_t { kUnit, kPair, kInl, kInr };

std::string_view con_name(ConKind c);
// Number of arguments each data constructor takes.
int con_arity(ConKind c);

enum class PatKind : uint8_t { kVar, kWild, kBox, kCon, kInt };

struct PatNode;
using Pattern = std::shared_ptr<const PatNode>;

struct PatNode {
  PatKind kind;
  std::string name;             // kVar
  ConKind con = ConKind::kUnit;  // kCon
  std::vector<Pattern> subs;    // kBox: 1, kCon: arity
  int64_t value = 0;            // kInt
  Position pos;
};

Pattern p_var(std::string name, Position pos = {});
Pattern p_wild(Position pos = {});
Pattern p_box(Pattern p, Position pos = {});
Pattern p_con(ConKind c, std::vector<Pattern> subs, Position pos = {});
Pattern p_int(int64_t n, Position pos = {});

// Bound variables in left-to-right order (duplicates preserved).
std::vector<std::string> pattern_vars(const Pattern& p);
// No box patterns nested anywhere: variables, wildcards, literals and
// constructors only.
bool pattern_is_linear(const Pattern& p);

// ---------------------------------------------------------------------------
// Terms

enum class DeriveKind : uint8_t { kPush, kPull, kDrop, kCopyShape, kFmap };

std::string_view derive_name(DeriveKind k);
std::optional<DeriveKind> parse_derive_kind(std::string_view name);

enum class TermKind : uint8_t {
  kVar,
  kApp,
  kLam,
  kPromote,
  kCon,
  kCase,
  kLetRec,
  kDerive,
  kInt,
  kAnn,  // (t : A)
  kUse,  // instrumentation wrapper, see evaluator count_uses
};

struct TermNode;
using Term = std::shared_ptr<const TermNode>;

struct Branch {
  Pattern pat;
  Term body;
};

using VarSet = std::vector<std::string>;  // sorted, unique

struct TermNode {
  TermKind kind;
  std::string name;  // Var; Lam and LetRec binder
  Term t1;           // App fn, Lam body, Promote, Case scrutinee, LetRec
                     // binding, Ann, Use; Con first argument
  Term t2;           // App arg, LetRec body; Con second argument
  ConKind con = ConKind::kUnit;
  std::vector<Branch> branches;
  DeriveKind derive = DeriveKind::kPush;
  Type type;  // Derive, Ann
  int64_t value = 0;  // Int literal
  int site = 0;       // Use: pattern-variable site
  int instance = 0;   // Use: β_case firing
  Position pos;
  VarSet free;  // free term variables

  bool is_free(std::string_view x) const;
};

Term t_var(std::string x, Position pos = {});
Term t_app(Term f, Term a, Position pos = {});
Term t_lam(std::string x, Term body, Position pos = {});
Term t_promote(Term t, Position pos = {});
Term t_unit(Position pos = {});
Term t_pair(Term a, Term b, Position pos = {});
Term t_inl(Term a, Position pos = {});
Term t_inr(Term a, Position pos = {});
Term t_con(ConKind c, Term a, Term b, Position pos = {});
Term t_case(Term scrut, std::vector<Branch> branches, Position pos = {});
Term t_letrec(std::string x, Term bound, Term body, Position pos = {});
Term t_derive(DeriveKind k, Type at, Position pos = {});
Term t_int(int64_t n, Position pos = {});
Term t_ann(Term t, Type a, Position pos = {});
Term t_use(Term t, int site, int instance, Position pos = {});

// Capture-avoiding simultaneous substitution. Bound variables that would
// capture a free variable of the substituted terms are renamed.
Term subst(const Term& t, const std::map<std::string, Term>& s);
Term subst1(const Term& t, const std::string& x, const Term& s);

// A name based on `base` that is not in `avoid`.
std::string fresh_name(const std::string& base, const VarSet& avoid);

// Equality up to consistent renaming of bound variables. Types inside
// annotations and derive nodes are compared with type_alpha_eq.
bool alpha_eq(const Term& a, const Term& b);

// Removes every Ann and Use wrapper.
Term erase_annotations(const Term& t);

// Number of nodes; used to bound generators.
size_t term_size(const Term& t);

}  // namespace grlin

#endif  // GRLIN_SYNTAX_H_
