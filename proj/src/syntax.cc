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

#include "grlin/syntax.h"

#include <algorithm>
#include <cctype>
#include <functional>
#include <stdexcept>

#include <fmt/format.h>

namespace grlin {

// ---------------------------------------------------------------------------
// Types

bool base_droppable(BaseKind b) { return b == BaseKind::kInt; }

std::string_view base_name(BaseKind b) {
  return b == BaseKind::kInt ? "Int" : "Res";
}

namespace {

Type make_type(TypeKind k, Type a = nullptr, Type b = nullptr) {
  auto n = std::make_shared<TypeNode>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

using NameStack = std::vector<std::pair<std::string, std::string>>;

bool alpha_rec(const Type& a, const Type& b, NameStack& env) {
  if (a == b && env.empty()) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case TypeKind::kFun:
    case TypeKind::kTensor:
    case TypeKind::kSum:
      return alpha_rec(a->a, b->a, env) && alpha_rec(a->b, b->b, env);
    case TypeKind::kUnit:
      return true;
    case TypeKind::kBox:
      return *a->grade == *b->grade && alpha_rec(a->a, b->a, env);
    case TypeKind::kVar:
      return a->name == b->name;
    case TypeKind::kBase:
      return a->base == b->base;
    case TypeKind::kRecVar: {
      int ia = -1;
      int ib = -1;
      for (int i = static_cast<int>(env.size()) - 1; i >= 0; --i) {
        if (ia < 0 && env[i].first == a->name) ia = i;
        if (ib < 0 && env[i].second == b->name) ib = i;
      }
      if (ia < 0 && ib < 0) return a->name == b->name;
      return ia == ib;
    }
    case TypeKind::kMu: {
      env.emplace_back(a->name, b->name);
      bool r = alpha_rec(a->a, b->a, env);
      env.pop_back();
      return r;
    }
  }
  return false;
}

bool equiv_rec(const Type& a, const Type& b,
               std::vector<std::pair<Type, Type>>& assumed) {
  if (type_alpha_eq(a, b)) return true;
  for (const auto& [x, y] : assumed) {
    if (type_alpha_eq(x, a) && type_alpha_eq(y, b)) return true;
  }
  if (a->kind == TypeKind::kMu || b->kind == TypeKind::kMu) {
    assumed.emplace_back(a, b);
    Type ua = a->kind == TypeKind::kMu ? unroll_mu(a) : a;
    Type ub = b->kind == TypeKind::kMu ? unroll_mu(b) : b;
    return equiv_rec(ua, ub, assumed);
  }
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case TypeKind::kFun:
    case TypeKind::kTensor:
    case TypeKind::kSum:
      return equiv_rec(a->a, b->a, assumed) && equiv_rec(a->b, b->b, assumed);
    case TypeKind::kBox:
      return *a->grade == *b->grade && equiv_rec(a->a, b->a, assumed);
    default:
      return false;  // leaves were decided by type_alpha_eq
  }
}

void collect_names(const Type& t, TypeKind want, std::vector<std::string>& out,
                   std::vector<std::string>& bound) {
  switch (t->kind) {
    case TypeKind::kVar:
      if (want == TypeKind::kVar &&
          std::find(out.begin(), out.end(), t->name) == out.end()) {
        out.push_back(t->name);
      }
      return;
    case TypeKind::kRecVar:
      if (want == TypeKind::kRecVar &&
          std::find(bound.begin(), bound.end(), t->name) == bound.end() &&
          std::find(out.begin(), out.end(), t->name) == out.end()) {
        out.push_back(t->name);
      }
      return;
    case TypeKind::kMu:
      bound.push_back(t->name);
      collect_names(t->a, want, out, bound);
      bound.pop_back();
      return;
    default:
      if (t->a) collect_names(t->a, want, out, bound);
      if (t->b) collect_names(t->b, want, out, bound);
  }
}

std::string fresh_type_name(const std::string& base,
                            const std::vector<std::string>& avoid) {
  for (int i = 1;; ++i) {
    std::string cand = base + std::to_string(i);
    if (std::find(avoid.begin(), avoid.end(), cand) == avoid.end()) {
      return cand;
    }
  }
}

Type subst_recvar_rec(const Type& t, const std::string& x, const Type& s,
                      const std::vector<std::string>& s_free) {
  switch (t->kind) {
    case TypeKind::kRecVar:
      return t->name == x ? s : t;
    case TypeKind::kUnit:
    case TypeKind::kVar:
    case TypeKind::kBase:
      return t;
    case TypeKind::kBox: {
      Type a = subst_recvar_rec(t->a, x, s, s_free);
      return a == t->a ? t : ty_box(*t->grade, a);
    }
    case TypeKind::kMu: {
      if (t->name == x) return t;
      std::vector<std::string> body_free = free_recvars(t->a);
      if (std::find(body_free.begin(), body_free.end(), x) ==
          body_free.end()) {
        return t;
      }
      std::string y = t->name;
      Type body = t->a;
      if (std::find(s_free.begin(), s_free.end(), y) != s_free.end()) {
        std::vector<std::string> avoid = s_free;
        avoid.insert(avoid.end(), body_free.begin(), body_free.end());
        avoid.push_back(x);
        std::string y2 = fresh_type_name(y, avoid);
        body = subst_recvar_rec(body, y, ty_recvar(y2), {y2});
        y = y2;
      }
      return ty_mu(y, subst_recvar_rec(body, x, s, s_free));
    }
    default: {
      Type a = subst_recvar_rec(t->a, x, s, s_free);
      Type b = subst_recvar_rec(t->b, x, s, s_free);
      if (a == t->a && b == t->b) return t;
      return make_type(t->kind, a, b);
    }
  }
}

void wf_rec(const Type& t, std::optional<SemiringId> sr, const Position& pos,
            std::vector<std::string>& bound) {
  switch (t->kind) {
    case TypeKind::kRecVar:
      if (std::find(bound.begin(), bound.end(), t->name) == bound.end()) {
        throw Error(Code::kSyntax,
                    fmt::format("recursion variable {} is not bound by mu",
                                t->name),
                    pos);
      }
      return;
    case TypeKind::kMu:
      if (t->a->kind == TypeKind::kRecVar) {
        throw Error(Code::kSyntax,
                    fmt::format("recursion variable {} is not guarded",
                                t->a->name),
                    pos);
      }
      bound.push_back(t->name);
      wf_rec(t->a, sr, pos, bound);
      bound.pop_back();
      return;
    case TypeKind::kBox:
      if (sr && t->grade->semiring() != *sr) {
        throw Error(Code::kMixedSemiring,
                    fmt::format("grade {} is not in the {} semiring",
                                show_grade(*t->grade), semiring_name(*sr)),
                    pos);
      }
      wf_rec(t->a, sr, pos, bound);
      return;
    default:
      if (t->a) wf_rec(t->a, sr, pos, bound);
      if (t->b) wf_rec(t->b, sr, pos, bound);
  }
}

int count_rec(const Type& t, std::vector<std::pair<std::string, int>>& env) {
  switch (t->kind) {
    case TypeKind::kFun:
    case TypeKind::kUnit:
    case TypeKind::kVar:
      return 1;
    case TypeKind::kBase:
      return t->base == BaseKind::kInt ? 2 : 1;
    case TypeKind::kBox:
      return count_rec(t->a, env);
    case TypeKind::kTensor:
      return std::min(2, count_rec(t->a, env) * count_rec(t->b, env));
    case TypeKind::kSum:
      return std::min(2, 2 * (count_rec(t->a, env) + count_rec(t->b, env)));
    case TypeKind::kRecVar:
      for (auto it = env.rbegin(); it != env.rend(); ++it) {
        if (it->first == t->name) return it->second;
      }
      return 0;
    case TypeKind::kMu: {
      // Ascending Kleene iteration from 0; the lattice has height 2.
      int v = 0;
      for (;;) {
        env.emplace_back(t->name, v);
        int next = count_rec(t->a, env);
        env.pop_back();
        if (next == v) return v;
        v = next;
      }
    }
  }
  return 0;
}

}  // namespace

Type ty_fun(Type a, Type b) {
  return make_type(TypeKind::kFun, std::move(a), std::move(b));
}
Type ty_tensor(Type a, Type b) {
  return make_type(TypeKind::kTensor, std::move(a), std::move(b));
}
Type ty_sum(Type a, Type b) {
  return make_type(TypeKind::kSum, std::move(a), std::move(b));
}
Type ty_unit() {
  static const Type unit = make_type(TypeKind::kUnit);
  return unit;
}
Type ty_box(Grade r, Type a) {
  auto n = std::make_shared<TypeNode>();
  n->kind = TypeKind::kBox;
  n->a = std::move(a);
  n->grade = r;
  return n;
}
Type ty_var(std::string name) {
  auto n = std::make_shared<TypeNode>();
  n->kind = TypeKind::kVar;
  n->name = std::move(name);
  return n;
}
Type ty_recvar(std::string name) {
  auto n = std::make_shared<TypeNode>();
  n->kind = TypeKind::kRecVar;
  n->name = std::move(name);
  return n;
}
Type ty_mu(std::string name, Type body) {
  auto n = std::make_shared<TypeNode>();
  n->kind = TypeKind::kMu;
  n->name = std::move(name);
  n->a = std::move(body);
  return n;
}
Type ty_base(BaseKind b) {
  auto n = std::make_shared<TypeNode>();
  n->kind = TypeKind::kBase;
  n->base = b;
  return n;
}

bool type_alpha_eq(const Type& a, const Type& b) {
  NameStack env;
  return alpha_rec(a, b, env);
}

bool type_equiv(const Type& a, const Type& b) {
  std::vector<std::pair<Type, Type>> assumed;
  return equiv_rec(a, b, assumed);
}

Type unroll_mu(const Type& mu) {
  if (mu->kind != TypeKind::kMu) {
    throw std::invalid_argument("unroll_mu: not a mu type");
  }
  return subst_recvar(mu->a, mu->name, mu);
}

Type subst_recvar(const Type& t, const std::string& x, const Type& s) {
  return subst_recvar_rec(t, x, s, free_recvars(s));
}

Type subst_tyvars(const Type& t, const std::map<std::string, Type>& s) {
  if (s.empty()) return t;
  switch (t->kind) {
    case TypeKind::kVar: {
      auto it = s.find(t->name);
      return it == s.end() ? t : it->second;
    }
    case TypeKind::kUnit:
    case TypeKind::kRecVar:
    case TypeKind::kBase:
      return t;
    case TypeKind::kBox:
      return ty_box(*t->grade, subst_tyvars(t->a, s));
    case TypeKind::kMu:
      return ty_mu(t->name, subst_tyvars(t->a, s));
    default:
      return make_type(t->kind, subst_tyvars(t->a, s), subst_tyvars(t->b, s));
  }
}

std::vector<std::string> free_tyvars(const Type& t) {
  std::vector<std::string> out;
  std::vector<std::string> bound;
  collect_names(t, TypeKind::kVar, out, bound);
  return out;
}

std::vector<std::string> free_recvars(const Type& t) {
  std::vector<std::string> out;
  std::vector<std::string> bound;
  collect_names(t, TypeKind::kRecVar, out, bound);
  return out;
}

bool contains_kind(const Type& t, TypeKind k) {
  if (t->kind == k) return true;
  return (t->a && contains_kind(t->a, k)) || (t->b && contains_kind(t->b, k));
}

bool contains_base(const Type& t, BaseKind b) {
  if (t->kind == TypeKind::kBase && t->base == b) return true;
  return (t->a && contains_base(t->a, b)) || (t->b && contains_base(t->b, b));
}

void check_type_wf(const Type& t, std::optional<SemiringId> sr,
                   const Position& pos) {
  std::vector<std::string> bound;
  wf_rec(t, sr, pos, bound);
}

int constructor_count(const Type& t) {
  std::vector<std::pair<std::string, int>> env;
  return count_rec(t, env);
}

bool multi_constructor(const Type& t) { return constructor_count(t) > 1; }

// ---------------------------------------------------------------------------
// Patterns

std::string_view con_name(ConKind c) {
  switch (c) {
    case ConKind::kUnit:
      return "unit";
    case ConKind::kPair:
      return "(,)";
    case ConKind::kInl:
      return "inl";
    case ConKind::kInr:
      return "inr";
  }
  return "?";
}

int con_arity(ConKind c) {
  switch (c) {
    case ConKind::kUnit:
      return 0;
    case ConKind::kPair:
      return 2;
    default:
      return 1;
  }
}

namespace {

Pattern make_pat(PatKind k, Position pos) {
  auto n = std::make_shared<PatNode>();
  n->kind = k;
  n->pos = std::move(pos);
  return n;
}

void pattern_vars_rec(const Pattern& p, std::vector<std::string>& out) {
  if (p->kind == PatKind::kVar) out.push_back(p->name);
  for (const auto& s : p->subs) pattern_vars_rec(s, out);
}

Pattern rename_pattern(const Pattern& p,
                       const std::map<std::string, std::string>& ren) {
  if (p->kind == PatKind::kVar) {
    auto it = ren.find(p->name);
    return it == ren.end() ? p : p_var(it->second, p->pos);
  }
  if (p->subs.empty()) return p;
  auto n = std::make_shared<PatNode>(*p);
  for (auto& s : n->subs) s = rename_pattern(s, ren);
  return n;
}

}  // namespace

Pattern p_var(std::string name, Position pos) {
  auto n = std::make_shared<PatNode>();
  n->kind = PatKind::kVar;
  n->name = std::move(name);
  n->pos = std::move(pos);
  return n;
}
Pattern p_wild(Position pos) { return make_pat(PatKind::kWild, pos); }
Pattern p_box(Pattern p, Position pos) {
  auto n = std::make_shared<PatNode>();
  n->kind = PatKind::kBox;
  n->subs.push_back(std::move(p));
  n->pos = std::move(pos);
  return n;
}
Pattern p_con(ConKind c, std::vector<Pattern> subs, Position pos) {
  if (static_cast<int>(subs.size()) != con_arity(c)) {
    throw std::invalid_argument("constructor pattern arity mismatch");
  }
  auto n = std::make_shared<PatNode>();
  n->kind = PatKind::kCon;
  n->con = c;
  n->subs = std::move(subs);
  n->pos = std::move(pos);
  return n;
}
Pattern p_int(int64_t v, Position pos) {
  auto n = std::make_shared<PatNode>();
  n->kind = PatKind::kInt;
  n->value = v;
  n->pos = std::move(pos);
  return n;
}

std::vector<std::string> pattern_vars(const Pattern& p) {
  std::vector<std::string> out;
  pattern_vars_rec(p, out);
  return out;
}

bool pattern_is_linear(const Pattern& p) {
  if (p->kind == PatKind::kBox) return false;
  return std::all_of(p->subs.begin(), p->subs.end(), pattern_is_linear);
}

// ---------------------------------------------------------------------------
// Terms

std::string_view derive_name(DeriveKind k) {
  switch (k) {
    case DeriveKind::kPush:
      return "push";
    case DeriveKind::kPull:
      return "pull";
    case DeriveKind::kDrop:
      return "drop";
    case DeriveKind::kCopyShape:
      return "copyShape";
    case DeriveKind::kFmap:
      return "fmap";
  }
  return "?";
}

std::optional<DeriveKind> parse_derive_kind(std::string_view name) {
  for (auto k : {DeriveKind::kPush, DeriveKind::kPull, DeriveKind::kDrop,
                 DeriveKind::kCopyShape, DeriveKind::kFmap}) {
    if (derive_name(k) == name) return k;
  }
  if (name == "copyshape") return DeriveKind::kCopyShape;
  return std::nullopt;
}

bool TermNode::is_free(std::string_view x) const {
  return std::binary_search(free.begin(), free.end(), x);
}

namespace {

VarSet set_union(const VarSet& a, const VarSet& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  VarSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                 std::back_inserter(out));
  return out;
}

VarSet set_minus(const VarSet& a, const std::vector<std::string>& remove) {
  VarSet out;
  out.reserve(a.size());
  for (const auto& x : a) {
    if (std::find(remove.begin(), remove.end(), x) == remove.end()) {
      out.push_back(x);
    }
  }
  return out;
}

std::shared_ptr<TermNode> make_term(TermKind k, Position pos) {
  auto n = std::make_shared<TermNode>();
  n->kind = k;
  n->pos = std::move(pos);
  return n;
}

}  // namespace

Term t_var(std::string x, Position pos) {
  auto n = make_term(TermKind::kVar, std::move(pos));
  n->free = {x};
  n->name = std::move(x);
  return n;
}

Term t_app(Term f, Term a, Position pos) {
  auto n = make_term(TermKind::kApp, std::move(pos));
  n->free = set_union(f->free, a->free);
  n->t1 = std::move(f);
  n->t2 = std::move(a);
  return n;
}

Term t_lam(std::string x, Term body, Position pos) {
  auto n = make_term(TermKind::kLam, std::move(pos));
  n->free = set_minus(body->free, {x});
  n->name = std::move(x);
  n->t1 = std::move(body);
  return n;
}

Term t_promote(Term t, Position pos) {
  auto n = make_term(TermKind::kPromote, std::move(pos));
  n->free = t->free;
  n->t1 = std::move(t);
  return n;
}

Term t_con(ConKind c, Term a, Term b, Position pos) {
  int given = (a ? 1 : 0) + (b ? 1 : 0);
  if (given != con_arity(c)) {
    throw std::invalid_argument("constructor arity mismatch");
  }
  auto n = make_term(TermKind::kCon, std::move(pos));
  n->con = c;
  if (a) n->free = a->free;
  if (b) n->free = set_union(n->free, b->free);
  n->t1 = std::move(a);
  n->t2 = std::move(b);
  return n;
}

Term t_unit(Position pos) {
  return t_con(ConKind::kUnit, nullptr, nullptr, std::move(pos));
}
Term t_pair(Term a, Term b, Position pos) {
  return t_con(ConKind::kPair, std::move(a), std::move(b), std::move(pos));
}
Term t_inl(Term a, Position pos) {
  return t_con(ConKind::kInl, std::move(a), nullptr, std::move(pos));
}
Term t_inr(Term a, Position pos) {
  return t_con(ConKind::kInr, std::move(a), nullptr, std::move(pos));
}

Term t_case(Term scrut, std::vector<Branch> branches, Position pos) {
  if (branches.empty()) throw std::invalid_argument("case without branches");
  auto n = make_term(TermKind::kCase, std::move(pos));
  n->free = scrut->free;
  for (const auto& b : branches) {
    n->free = set_union(n->free, set_minus(b.body->free, pattern_vars(b.pat)));
  }
  n->t1 = std::move(scrut);
  n->branches = std::move(branches);
  return n;
}

Term t_letrec(std::string x, Term bound, Term body, Position pos) {
  auto n = make_term(TermKind::kLetRec, std::move(pos));
  n->free = set_minus(set_union(bound->free, body->free), {x});
  n->name = std::move(x);
  n->t1 = std::move(bound);
  n->t2 = std::move(body);
  return n;
}

Term t_derive(DeriveKind k, Type at, Position pos) {
  auto n = make_term(TermKind::kDerive, std::move(pos));
  n->derive = k;
  n->type = std::move(at);
  return n;
}

Term t_int(int64_t v, Position pos) {
  auto n = make_term(TermKind::kInt, std::move(pos));
  n->value = v;
  return n;
}

Term t_ann(Term t, Type a, Position pos) {
  auto n = make_term(TermKind::kAnn, std::move(pos));
  n->free = t->free;
  n->t1 = std::move(t);
  n->type = std::move(a);
  return n;
}

Term t_use(Term t, int site, int instance, Position pos) {
  auto n = make_term(TermKind::kUse, std::move(pos));
  n->free = t->free;
  n->t1 = std::move(t);
  n->site = site;
  n->instance = instance;
  return n;
}

std::string fresh_name(const std::string& base, const VarSet& avoid) {
  auto taken = [&](const std::string& s) {
    return std::binary_search(avoid.begin(), avoid.end(), s);
  };
  if (!base.empty() && !taken(base)) return base;
  std::string stem = base;
  while (!stem.empty() &&
         (std::isdigit(static_cast<unsigned char>(stem.back())) ||
          stem.back() == '\'')) {
    stem.pop_back();
  }
  if (stem.empty()) stem = "v";
  for (int i = 1;; ++i) {
    std::string cand = stem + std::to_string(i);
    if (!taken(cand)) return cand;
  }
}

namespace {

using Subst = std::map<std::string, Term>;

// Variables free in the substituted terms for the keys free in `t`.
VarSet range_free(const Subst& s) {
  VarSet out;
  for (const auto& [k, v] : s) out = set_union(out, v->free);
  return out;
}

Subst restrict_to(const Subst& s, const TermNode& t) {
  Subst out;
  for (const auto& [k, v] : s) {
    if (t.is_free(k)) out.emplace(k, v);
  }
  return out;
}

Term subst_rec(const Term& t, const Subst& s_in);

// Handles one binding scope: drops shadowed keys and renames binders that
// would capture. Returns the substitution to use inside the scope.
Subst enter_scope(const Subst& s, std::vector<std::string>& binders,
                  const VarSet& scope_free,
                  std::map<std::string, std::string>& renamed) {
  Subst inner = s;
  for (const auto& b : binders) inner.erase(b);
  if (inner.empty()) return inner;
  VarSet rf = range_free(inner);
  VarSet avoid = set_union(rf, scope_free);
  for (const auto& [k, v] : inner) avoid = set_union(avoid, {k});
  for (auto& b : binders) {
    if (std::binary_search(rf.begin(), rf.end(), b)) {
      std::string nb = fresh_name(b, avoid);
      avoid = set_union(avoid, {nb});
      renamed[b] = nb;
      inner[b] = t_var(nb);
      b = nb;
    }
  }
  return inner;
}

Term subst_rec(const Term& t, const Subst& s_in) {
  Subst s = restrict_to(s_in, *t);
  if (s.empty()) return t;
  switch (t->kind) {
    case TermKind::kVar:
      return s.at(t->name);
    case TermKind::kApp:
      return t_app(subst_rec(t->t1, s), subst_rec(t->t2, s), t->pos);
    case TermKind::kLam: {
      std::vector<std::string> binders = {t->name};
      std::map<std::string, std::string> ren;
      Subst inner = enter_scope(s, binders, t->t1->free, ren);
      return t_lam(binders[0], subst_rec(t->t1, inner), t->pos);
    }
    case TermKind::kPromote:
      return t_promote(subst_rec(t->t1, s), t->pos);
    case TermKind::kCon:
      return t_con(t->con, t->t1 ? subst_rec(t->t1, s) : nullptr,
                   t->t2 ? subst_rec(t->t2, s) : nullptr, t->pos);
    case TermKind::kCase: {
      std::vector<Branch> bs;
      bs.reserve(t->branches.size());
      for (const auto& br : t->branches) {
        std::vector<std::string> binders = pattern_vars(br.pat);
        std::map<std::string, std::string> ren;
        Subst inner = enter_scope(s, binders, br.body->free, ren);
        Pattern p = ren.empty() ? br.pat : rename_pattern(br.pat, ren);
        bs.push_back({p, subst_rec(br.body, inner)});
      }
      return t_case(subst_rec(t->t1, s), std::move(bs), t->pos);
    }
    case TermKind::kLetRec: {
      std::vector<std::string> binders = {t->name};
      std::map<std::string, std::string> ren;
      Subst inner = enter_scope(s, binders,
                                set_union(t->t1->free, t->t2->free), ren);
      return t_letrec(binders[0], subst_rec(t->t1, inner),
                      subst_rec(t->t2, inner), t->pos);
    }
    case TermKind::kAnn:
      return t_ann(subst_rec(t->t1, s), t->type, t->pos);
    case TermKind::kUse:
      return t_use(subst_rec(t->t1, s), t->site, t->instance, t->pos);
    case TermKind::kDerive:
    case TermKind::kInt:
      return t;
  }
  return t;
}

struct AlphaEnv {
  NameStack stack;

  bool same_var(const std::string& a, const std::string& b) const {
    int ia = -1;
    int ib = -1;
    for (int i = static_cast<int>(stack.size()) - 1; i >= 0; --i) {
      if (ia < 0 && stack[i].first == a) ia = i;
      if (ib < 0 && stack[i].second == b) ib = i;
      if (ia >= 0 && ib >= 0) break;
    }
    if (ia < 0 && ib < 0) return a == b;
    return ia == ib;
  }
};

bool pat_alpha(const Pattern& a, const Pattern& b, NameStack& binds) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case PatKind::kVar:
      binds.emplace_back(a->name, b->name);
      return true;
    case PatKind::kWild:
      return true;
    case PatKind::kInt:
      return a->value == b->value;
    case PatKind::kCon:
      if (a->con != b->con) return false;
      [[fallthrough]];
    case PatKind::kBox:
      for (size_t i = 0; i < a->subs.size(); ++i) {
        if (!pat_alpha(a->subs[i], b->subs[i], binds)) return false;
      }
      return true;
  }
  return false;
}

bool term_alpha(const Term& a, const Term& b, AlphaEnv& env) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case TermKind::kVar:
      return env.same_var(a->name, b->name);
    case TermKind::kApp:
      return term_alpha(a->t1, b->t1, env) && term_alpha(a->t2, b->t2, env);
    case TermKind::kLam: {
      env.stack.emplace_back(a->name, b->name);
      bool r = term_alpha(a->t1, b->t1, env);
      env.stack.pop_back();
      return r;
    }
    case TermKind::kPromote:
      return term_alpha(a->t1, b->t1, env);
    case TermKind::kCon:
      if (a->con != b->con) return false;
      if (a->t1 && !term_alpha(a->t1, b->t1, env)) return false;
      if (a->t2 && !term_alpha(a->t2, b->t2, env)) return false;
      return true;
    case TermKind::kCase: {
      if (a->branches.size() != b->branches.size()) return false;
      if (!term_alpha(a->t1, b->t1, env)) return false;
      for (size_t i = 0; i < a->branches.size(); ++i) {
        NameStack binds;
        if (!pat_alpha(a->branches[i].pat, b->branches[i].pat, binds)) {
          return false;
        }
        size_t mark = env.stack.size();
        env.stack.insert(env.stack.end(), binds.begin(), binds.end());
        bool r = term_alpha(a->branches[i].body, b->branches[i].body, env);
        env.stack.resize(mark);
        if (!r) return false;
      }
      return true;
    }
    case TermKind::kLetRec: {
      env.stack.emplace_back(a->name, b->name);
      bool r = term_alpha(a->t1, b->t1, env) && term_alpha(a->t2, b->t2, env);
      env.stack.pop_back();
      return r;
    }
    case TermKind::kDerive:
      return a->derive == b->derive && type_alpha_eq(a->type, b->type);
    case TermKind::kInt:
      return a->value == b->value;
    case TermKind::kAnn:
      return type_alpha_eq(a->type, b->type) && term_alpha(a->t1, b->t1, env);
    case TermKind::kUse:
      return a->site == b->site && a->instance == b->instance &&
             term_alpha(a->t1, b->t1, env);
  }
  return false;
}

}  // namespace

Term subst(const Term& t, const std::map<std::string, Term>& s) {
  return subst_rec(t, s);
}

Term subst1(const Term& t, const std::string& x, const Term& s) {
  if (!t->is_free(x)) return t;
  return subst_rec(t, Subst{{x, s}});
}

bool alpha_eq(const Term& a, const Term& b) {
  AlphaEnv env;
  return term_alpha(a, b, env);
}

Term erase_annotations(const Term& t) {
  switch (t->kind) {
    case TermKind::kAnn:
    case TermKind::kUse:
      return erase_annotations(t->t1);
    case TermKind::kVar:
    case TermKind::kDerive:
    case TermKind::kInt:
      return t;
    case TermKind::kApp:
      return t_app(erase_annotations(t->t1), erase_annotations(t->t2), t->pos);
    case TermKind::kLam:
      return t_lam(t->name, erase_annotations(t->t1), t->pos);
    case TermKind::kPromote:
      return t_promote(erase_annotations(t->t1), t->pos);
    case TermKind::kCon:
      return t_con(t->con, t->t1 ? erase_annotations(t->t1) : nullptr,
                   t->t2 ? erase_annotations(t->t2) : nullptr, t->pos);
    case TermKind::kCase: {
      std::vector<Branch> bs;
      for (const auto& b : t->branches) {
        bs.push_back({b.pat, erase_annotations(b.body)});
      }
      return t_case(erase_annotations(t->t1), std::move(bs), t->pos);
    }
    case TermKind::kLetRec:
      return t_letrec(t->name, erase_annotations(t->t1),
                      erase_annotations(t->t2), t->pos);
  }
  return t;
}

size_t term_size(const Term& t) {
  size_t n = 1;
  if (t->t1) n += term_size(t->t1);
  if (t->t2) n += term_size(t->t2);
  for (const auto& b : t->branches) n += term_size(b.body);
  return n;
}

}  // namespace grlin
