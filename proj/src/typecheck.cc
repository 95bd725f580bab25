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

#include "grlin/typecheck.h"

#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "grlin/deriving.h"
#include "grlin/pretty.h"

namespace grlin {

const Assumption* TypingCtx::find(const std::string& x) const {
  for (auto it = entries.rbegin(); it != entries.rend(); ++it) {
    if (it->first == x) return &it->second;
  }
  return nullptr;
}

namespace {

enum class EntryKind { kLinear, kGraded, kUnrestricted, kHole };

struct Entry {
  std::string name;
  int id;
  EntryKind kind;
  Type type;  // null for an unfilled hole
  std::optional<Grade> grade;
  Position pos;
  const PatNode* site = nullptr;
};

using Uses = std::map<int, Usage>;

struct PatBinder {
  std::string name;
  Assumption assumption;
  const PatNode* site;
};

Type expose(Type t) {
  while (t->kind == TypeKind::kMu) t = unroll_mu(t);
  return t;
}

void pattern_binders(const std::optional<Grade>& enc, const Pattern& p,
                     const Type& a_in, std::vector<PatBinder>& out) {
  switch (p->kind) {
    case PatKind::kVar:
      for (const auto& b : out) {
        if (b.name == p->name) {
          throw Error(Code::kLinearity,
                      fmt::format("variable '{}' is bound twice in one "
                                  "pattern",
                                  p->name),
                      p->pos);
        }
      }
      out.push_back({p->name,
                     enc ? Assumption::graded(a_in, *enc)
                         : Assumption::linear(a_in),
                     p.get()});
      return;
    case PatKind::kWild: {
      if (!enc) {
        throw Error(Code::kWildcardWeaken,
                    fmt::format("wildcard discards a linear value of type "
                                "{}; it must appear under a box pattern",
                                pretty(a_in)),
                    p->pos);
      }
      Grade zero = Grade::zero(enc->semiring());
      if (!sr_leq(zero, *enc)) {
        throw Error(Code::kWildcardWeaken,
                    fmt::format("wildcard under grade {} needs 0 ⊑ {}",
                                show_grade(*enc), show_grade(*enc)),
                    p->pos);
      }
      return;
    }
    case PatKind::kBox: {
      Type a = expose(a_in);
      if (a->kind != TypeKind::kBox) {
        throw Error(Code::kTypeMismatch,
                    fmt::format("box pattern cannot match a value of type {}",
                                pretty(a_in)),
                    p->pos);
      }
      Grade r = enc ? sr_mul(*enc, *a->grade) : *a->grade;
      pattern_binders(r, p->subs[0], a->a, out);
      return;
    }
    case PatKind::kInt: {
      Type a = expose(a_in);
      if (a->kind != TypeKind::kBase || a->base != BaseKind::kInt) {
        throw Error(Code::kTypeMismatch,
                    fmt::format("integer pattern cannot match a value of "
                                "type {}",
                                pretty(a_in)),
                    p->pos);
      }
      if (enc && !sr_leq(Grade::one(enc->semiring()), *enc)) {
        throw Error(Code::kMatchUsage,
                    fmt::format("matching an Int literal under grade {} "
                                "needs 1 ⊑ {}",
                                show_grade(*enc), show_grade(*enc)),
                    p->pos);
      }
      return;
    }
    case PatKind::kCon: {
      Type a = expose(a_in);
      TypeKind want = TypeKind::kUnit;
      if (p->con == ConKind::kPair) want = TypeKind::kTensor;
      if (p->con == ConKind::kInl || p->con == ConKind::kInr) {
        want = TypeKind::kSum;
      }
      if (a->kind != want) {
        throw Error(Code::kTypeMismatch,
                    fmt::format("pattern {} cannot match a value of type {}",
                                pretty(p), pretty(a_in)),
                    p->pos);
      }
      if (enc && multi_constructor(a) &&
          !sr_leq(Grade::one(enc->semiring()), *enc)) {
        throw Error(Code::kMatchUsage,
                    fmt::format("matching on {} under grade {} inspects a "
                                "constructor and needs 1 ⊑ {}",
                                pretty(a_in), show_grade(*enc),
                                show_grade(*enc)),
                    p->pos);
      }
      switch (p->con) {
        case ConKind::kUnit:
          return;
        case ConKind::kPair:
          pattern_binders(enc, p->subs[0], a->a, out);
          pattern_binders(enc, p->subs[1], a->b, out);
          return;
        case ConKind::kInl:
          pattern_binders(enc, p->subs[0], a->a, out);
          return;
        case ConKind::kInr:
          pattern_binders(enc, p->subs[0], a->b, out);
          return;
      }
    }
  }
}

class Checker {
 public:
  explicit Checker(CheckEnv& env) : env_(env), sr_(env.semiring) {}

  int bind_ctx(const std::string& name, const Assumption& a) {
    Entry e;
    e.name = name;
    e.id = next_id_++;
    e.kind = a.kind == AssumptionKind::kLinear ? EntryKind::kLinear
                                                : EntryKind::kGraded;
    e.type = a.type;
    e.grade = a.grade;
    scope_.push_back(e);
    return e.id;
  }

  Uses check(const Term& t, const Type& expected);
  Uses synth(const Term& t, Type& out);

  void discharge(const Entry& e, Uses& u);

  const std::vector<Entry>& scope() const { return scope_; }

 private:
  Grade one() const { return Grade::one(sr_); }

  Uses check_app(const Term& t, const Type& expected);
  Uses check_case(const Term& t, const Type* expected, Type& out);
  Uses check_letrec(const Term& t, const Type* expected, Type& out);
  Uses check_derive(const Term& t, const Type& expected);
  Uses derive_app(const Term& t, const Type* expected, Type& out);

  bool can_synth(const Term& t) const;
  Entry* lookup(const std::string& x);
  void add(Uses& into, const Uses& from) const;
  void require_equiv(const Type& got, const Type& want, const Term& t) const;
  DerivedCombinator run_derive(const Term& node, DeriveRequest req);

  CheckEnv& env_;
  SemiringId sr_;
  std::vector<Entry> scope_;
  int next_id_ = 0;
};

Entry* Checker::lookup(const std::string& x) {
  for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
    if (it->name == x) return &*it;
  }
  return nullptr;
}

void Checker::add(Uses& into, const Uses& from) const {
  for (const auto& [id, u] : from) {
    Usage& d = into[id];
    d.linear += u.linear;
    if (u.graded) d.graded = d.graded ? sr_add(*d.graded, *u.graded) : u.graded;
  }
}

void Checker::require_equiv(const Type& got, const Type& want,
                            const Term& t) const {
  if (!type_equiv(got, want)) {
    throw Error(Code::kTypeMismatch,
                fmt::format("expected type {}, but the term has type {}",
                            pretty(want), pretty(got)),
                t->pos);
  }
}

void Checker::discharge(const Entry& e, Uses& u) {
  auto it = u.find(e.id);
  Usage used = it == u.end() ? Usage{} : it->second;
  if (it != u.end()) u.erase(it);
  BinderRecord rec;
  rec.name = e.name;
  rec.pos = e.pos;
  rec.site = e.site;
  rec.used = used;
  if (e.kind == EntryKind::kLinear) {
    rec.kind = AssumptionKind::kLinear;
    env_.binders.push_back(rec);
    if (used.linear != 1) {
      throw Error(Code::kLinearity,
                  fmt::format("linear variable '{}' must be used exactly "
                              "once, but is used {} times",
                              e.name, used.linear),
                  e.pos);
    }
  } else if (e.kind == EntryKind::kGraded) {
    rec.kind = AssumptionKind::kGraded;
    rec.declared = e.grade;
    env_.binders.push_back(rec);
    Grade g = used.graded ? *used.graded : Grade::zero(e.grade->semiring());
    if (!sr_leq(g, *e.grade)) {
      throw Error(Code::kGradeExceeded,
                  fmt::format("variable '{}' is used at grade {}, which is "
                              "not approximated by its grade {}",
                              e.name, show_grade(g), show_grade(*e.grade)),
                  e.pos);
    }
  }
}

bool Checker::can_synth(const Term& t) const {
  switch (t->kind) {
    case TermKind::kVar: {
      for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
        if (it->name == t->name) return it->type != nullptr;
      }
      return true;
    }
    case TermKind::kApp:
      if (t->t1->kind == TermKind::kDerive &&
          (t->t1->derive == DeriveKind::kPush ||
           t->t1->derive == DeriveKind::kPull ||
           t->t1->derive == DeriveKind::kFmap)) {
        return can_synth(t->t2);
      }
      return can_synth(t->t1);
    case TermKind::kInt:
    case TermKind::kAnn:
      return true;
    case TermKind::kCon:
      if (t->con == ConKind::kUnit) return true;
      if (t->con == ConKind::kPair) {
        return can_synth(t->t1) && can_synth(t->t2);
      }
      return false;
    case TermKind::kCase:
      if (!can_synth(t->t1)) return false;
      return std::any_of(t->branches.begin(), t->branches.end(),
                         [&](const Branch& b) { return can_synth(b.body); });
    case TermKind::kLetRec:
      return t->t1->kind == TermKind::kAnn && can_synth(t->t2);
    case TermKind::kDerive:
      return t->derive == DeriveKind::kDrop ||
             t->derive == DeriveKind::kCopyShape;
    case TermKind::kUse:
      return can_synth(t->t1);
    case TermKind::kLam:
    case TermKind::kPromote:
      return false;
  }
  return false;
}

Uses Checker::check(const Term& t, const Type& expected) {
  switch (t->kind) {
    case TermKind::kLam: {
      Type a = expose(expected);
      if (a->kind != TypeKind::kFun) {
        throw Error(Code::kTypeMismatch,
                    fmt::format("a function cannot have type {}",
                                pretty(expected)),
                    t->pos);
      }
      Entry e{t->name, next_id_++, EntryKind::kLinear, a->a, std::nullopt,
              t->pos, nullptr};
      scope_.push_back(e);
      Uses u = check(t->t1, a->b);
      scope_.pop_back();
      discharge(e, u);
      return u;
    }
    case TermKind::kPromote: {
      Type a = expose(expected);
      if (a->kind != TypeKind::kBox) {
        throw Error(Code::kTypeMismatch,
                    fmt::format("a promotion cannot have type {}",
                                pretty(expected)),
                    t->pos);
      }
      Uses u = check(t->t1, a->a);
      for (auto& [id, use] : u) {
        if (use.linear > 0) {
          std::string name = "?";
          for (const auto& e : scope_) {
            if (e.id == id) name = e.name;
          }
          throw Error(Code::kPromoteLinear,
                      fmt::format("linear variable '{}' is used inside a "
                                  "promotion",
                                  name),
                      t->pos);
        }
        if (use.graded) use.graded = sr_mul(*use.graded, *a->grade);
      }
      return u;
    }
    case TermKind::kCon: {
      if (t->con == ConKind::kUnit) break;
      Type a = expose(expected);
      if (t->con == ConKind::kPair) {
        if (a->kind != TypeKind::kTensor) break;
        Uses u = check(t->t1, a->a);
        add(u, check(t->t2, a->b));
        return u;
      }
      if (a->kind != TypeKind::kSum) {
        throw Error(Code::kTypeMismatch,
                    fmt::format("{} cannot construct a value of type {}",
                                con_name(t->con), pretty(expected)),
                    t->pos);
      }
      return check(t->t1, t->con == ConKind::kInl ? a->a : a->b);
    }
    case TermKind::kCase: {
      Type out;
      return check_case(t, &expected, out);
    }
    case TermKind::kLetRec: {
      Type out;
      return check_letrec(t, &expected, out);
    }
    case TermKind::kDerive:
      return check_derive(t, expected);
    case TermKind::kApp:
      return check_app(t, expected);
    case TermKind::kVar: {
      Entry* e = lookup(t->name);
      if (e && e->kind == EntryKind::kHole && !e->type) {
        e->type = expected;
        return {};
      }
      break;
    }
    case TermKind::kUse:
      return check(t->t1, expected);
    default:
      break;
  }
  Type got;
  Uses u = synth(t, got);
  require_equiv(got, expected, t);
  return u;
}

Uses Checker::check_app(const Term& t, const Type& expected) {
  const Term& head = t->t1;
  if (head->kind == TermKind::kDerive &&
      (head->derive == DeriveKind::kPush ||
       head->derive == DeriveKind::kPull ||
       head->derive == DeriveKind::kFmap) &&
      can_synth(t->t2)) {
    Type out;
    return derive_app(t, &expected, out);
  }
  if (head->kind == TermKind::kVar) {
    Entry* e = lookup(head->name);
    if (e && e->kind == EntryKind::kHole && !e->type && can_synth(t->t2)) {
      Type arg;
      Uses u = synth(t->t2, arg);
      e->type = ty_fun(arg, expected);
      return u;
    }
  }
  if (can_synth(head)) {
    Type got;
    Uses u = synth(t, got);
    require_equiv(got, expected, t);
    return u;
  }
  if (can_synth(t->t2)) {
    Type arg;
    Uses u = synth(t->t2, arg);
    add(u, check(head, ty_fun(arg, expected)));
    return u;
  }
  throw Error(Code::kNeedsAnnotation,
              "cannot determine the type of this application; annotate the "
              "function or its argument",
              t->pos);
}

Uses Checker::synth(const Term& t, Type& out) {
  switch (t->kind) {
    case TermKind::kVar: {
      Entry* e = lookup(t->name);
      if (!e) {
        auto g = env_.globals.find(t->name);
        if (g == env_.globals.end()) {
          throw Error(Code::kUnknownVar,
                      fmt::format("unknown variable '{}'", t->name), t->pos);
        }
        out = g->second;
        return {};
      }
      if (!e->type) {
        throw Error(Code::kNeedsAnnotation,
                    fmt::format("the type of recursive binding '{}' is not "
                                "known here; annotate it",
                                t->name),
                    t->pos);
      }
      out = e->type;
      Uses u;
      if (e->kind == EntryKind::kLinear) u[e->id].linear = 1;
      if (e->kind == EntryKind::kGraded) u[e->id].graded = one();
      return u;
    }
    case TermKind::kApp: {
      const Term& head = t->t1;
      if (head->kind == TermKind::kDerive &&
          (head->derive == DeriveKind::kPush ||
           head->derive == DeriveKind::kPull ||
           head->derive == DeriveKind::kFmap)) {
        return derive_app(t, nullptr, out);
      }
      if (!can_synth(head)) {
        throw Error(Code::kNeedsAnnotation,
                    "cannot infer the type of the applied function; "
                    "annotate it",
                    head->pos);
      }
      Type ft;
      Uses u = synth(head, ft);
      Type f = expose(ft);
      if (f->kind != TypeKind::kFun) {
        throw Error(Code::kTypeMismatch,
                    fmt::format("applying a term of non-function type {}",
                                pretty(ft)),
                    t->pos);
      }
      add(u, check(t->t2, f->a));
      out = f->b;
      return u;
    }
    case TermKind::kInt:
      out = ty_int();
      return {};
    case TermKind::kCon:
      if (t->con == ConKind::kUnit) {
        out = ty_unit();
        return {};
      }
      if (t->con == ConKind::kPair) {
        Type a;
        Type b;
        Uses u = synth(t->t1, a);
        add(u, synth(t->t2, b));
        out = ty_tensor(a, b);
        return u;
      }
      throw Error(Code::kNeedsAnnotation,
                  fmt::format("the type of '{}' needs an annotation: the "
                              "other summand is unknown",
                              con_name(t->con)),
                  t->pos);
    case TermKind::kCase:
      return check_case(t, nullptr, out);
    case TermKind::kLetRec:
      return check_letrec(t, nullptr, out);
    case TermKind::kAnn: {
      check_type_wf(t->type, sr_, t->pos);
      out = t->type;
      return check(t->t1, t->type);
    }
    case TermKind::kUse:
      return synth(t->t1, out);
    case TermKind::kDerive: {
      if (t->derive == DeriveKind::kDrop &&
          t->type->kind == TypeKind::kBase &&
          t->type->base == BaseKind::kInt) {
        out = ty_fun(ty_int(), ty_unit());
        return {};
      }
      if (t->derive == DeriveKind::kDrop ||
          t->derive == DeriveKind::kCopyShape) {
        DeriveRequest req;
        req.kind = t->derive;
        req.type = t->type;
        DerivedCombinator d = run_derive(t, req);
        out = d.type;
        return {};
      }
      throw Error(Code::kNeedsAnnotation,
                  fmt::format("{} @{} needs its grades from the context; "
                              "annotate it",
                              derive_name(t->derive), pretty(t->type)),
                  t->pos);
    }
    case TermKind::kLam:
      throw Error(Code::kNeedsAnnotation,
                  "the type of a lambda cannot be inferred; annotate it",
                  t->pos);
    case TermKind::kPromote:
      throw Error(Code::kNeedsAnnotation,
                  "the grade of a promotion cannot be inferred; annotate it",
                  t->pos);
  }
  throw Error(Code::kNeedsAnnotation, "cannot infer a type", t->pos);
}

Uses Checker::check_case(const Term& t, const Type* expected, Type& out) {
  Type scrut_type;
  if (!can_synth(t->t1)) {
    throw Error(Code::kNeedsAnnotation,
                "the type of the case scrutinee cannot be inferred; annotate "
                "it",
                t->t1->pos);
  }
  Uses total = synth(t->t1, scrut_type);

  std::vector<size_t> order(t->branches.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  Type result = expected ? *expected : nullptr;
  if (!result) {
    auto first = std::find_if(order.begin(), order.end(), [&](size_t i) {
      return can_synth(t->branches[i].body);
    });
    if (first == order.end()) {
      throw Error(Code::kNeedsAnnotation,
                  "cannot infer the type of any case branch; annotate the "
                  "case",
                  t->pos);
    }
    std::rotate(order.begin(), first, first + 1);
  }

  std::vector<Uses> per_branch(t->branches.size());
  for (size_t i : order) {
    const Branch& br = t->branches[i];
    std::vector<PatBinder> binders;
    pattern_binders(std::nullopt, br.pat, scrut_type, binders);
    size_t mark = scope_.size();
    for (const auto& b : binders) {
      Entry e;
      e.name = b.name;
      e.id = next_id_++;
      e.kind = b.assumption.kind == AssumptionKind::kLinear
                   ? EntryKind::kLinear
                   : EntryKind::kGraded;
      e.type = b.assumption.type;
      e.grade = b.assumption.grade;
      e.pos = b.site->pos;
      e.site = b.site;
      scope_.push_back(e);
    }
    Uses u;
    if (result) {
      u = check(br.body, result);
    } else {
      u = synth(br.body, result);
    }
    std::vector<Entry> bound(scope_.begin() + mark, scope_.end());
    scope_.resize(mark);
    for (const auto& e : bound) discharge(e, u);
    per_branch[i] = std::move(u);
  }

  // Merge: graded by lub (absent = 0), linear must agree.
  std::set<int> ids;
  for (const auto& u : per_branch) {
    for (const auto& [id, use] : u) ids.insert(id);
  }
  Uses merged;
  for (int id : ids) {
    const Entry* e = nullptr;
    for (const auto& s : scope_) {
      if (s.id == id) e = &s;
    }
    Usage m;
    bool first = true;
    for (size_t i = 0; i < per_branch.size(); ++i) {
      auto it = per_branch[i].find(id);
      Usage u = it == per_branch[i].end() ? Usage{} : it->second;
      bool graded = e && e->kind == EntryKind::kGraded;
      if (graded) {
        Grade g = u.graded ? *u.graded : Grade::zero(sr_);
        if (first) {
          m.graded = g;
        } else {
          auto j = sr_join(*m.graded, g);
          if (!j) {
            throw Error(Code::kNoUpperBound,
                        fmt::format("case branches use '{}' at grades {} "
                                    "and {}, which have no upper bound",
                                    e->name, show_grade(*m.graded),
                                    show_grade(g)),
                        t->pos);
          }
          m.graded = *j;
        }
      } else {
        if (!first && u.linear != m.linear) {
          throw Error(Code::kLinearity,
                      fmt::format("linear variable '{}' is used {} times in "
                                  "one case branch and {} times in another",
                                  e ? e->name : "?", m.linear, u.linear),
                      t->pos);
        }
        m.linear = u.linear;
      }
      first = false;
    }
    merged[id] = m;
  }
  add(total, merged);
  out = result;
  return total;
}

Uses Checker::check_letrec(const Term& t, const Type* expected, Type& out) {
  Entry e;
  e.name = t->name;
  e.id = next_id_++;
  e.pos = t->pos;
  bool hole = false;
  if (t->t1->kind == TermKind::kAnn) {
    e.kind = EntryKind::kUnrestricted;
    e.type = t->t1->type;
    check_type_wf(e.type, sr_, t->t1->pos);
  } else if (expected) {
    e.kind = EntryKind::kHole;
    hole = true;
  } else {
    throw Error(Code::kNeedsAnnotation,
                fmt::format("annotate the recursive binding '{}' with its "
                            "type",
                            t->name),
                t->pos);
  }
  scope_.push_back(e);
  size_t slot = scope_.size() - 1;
  Uses bound_uses;
  Uses body_uses;
  if (hole) {
    body_uses = check(t->t2, *expected);
    out = *expected;
    if (!scope_[slot].type) {
      throw Error(Code::kNeedsAnnotation,
                  fmt::format("cannot infer the type of recursive binding "
                              "'{}'; annotate it",
                              t->name),
                  t->pos);
    }
    scope_[slot].kind = EntryKind::kUnrestricted;
    bound_uses = check(t->t1, scope_[slot].type);
  } else {
    Type ignored;
    bound_uses = synth(t->t1, ignored);
    if (expected) {
      body_uses = check(t->t2, *expected);
      out = *expected;
    } else {
      body_uses = synth(t->t2, out);
    }
  }
  scope_.pop_back();

  std::optional<Grade> omega = sr_omega(sr_);
  for (auto& [id, use] : bound_uses) {
    std::string name = "?";
    for (const auto& s : scope_) {
      if (s.id == id) name = s.name;
    }
    if (use.linear > 0) {
      throw Error(Code::kLinearity,
                  fmt::format("recursive binding '{}' may run any number of "
                              "times and cannot use linear variable '{}'",
                              t->name, name),
                  t->pos);
    }
    if (use.graded) {
      if (omega) {
        use.graded = sr_mul(*use.graded, *omega);
      } else if (*use.graded != Grade::zero(sr_)) {
        throw Error(Code::kGradeExceeded,
                    fmt::format("recursive binding '{}' uses '{}', but the "
                                "{} semiring has no grade for unbounded use",
                                t->name, name, semiring_name(sr_)),
                    t->pos);
      }
    }
  }
  add(bound_uses, body_uses);
  return bound_uses;
}

DerivedCombinator Checker::run_derive(const Term& node, DeriveRequest req) {
  req.semiring = sr_;
  try {
    DerivedCombinator d = derive(req);
    env_.elaborated[node.get()] = d.term;
    return d;
  } catch (const Error& e) {
    throw e.with_position(node->pos);
  }
}

std::string param_key(const Type& t) {
  return t->kind == TypeKind::kVar ? t->name : std::string(base_name(t->base));
}

// Reads the grades a pull subject's parameters carry in `d`, which should be
// the subject type with each parameter boxed.
void match_params(const Type& t, const Type& d,
                  std::map<std::string, Grade>& rs) {
  switch (t->kind) {
    case TypeKind::kVar:
    case TypeKind::kBase:
      if (d->kind == TypeKind::kBox && type_alpha_eq(d->a, t)) {
        rs.emplace(param_key(t), *d->grade);
      }
      return;
    case TypeKind::kFun:
    case TypeKind::kTensor:
    case TypeKind::kSum:
      if (d->kind == t->kind) {
        match_params(t->a, d->a, rs);
        match_params(t->b, d->b, rs);
      }
      return;
    case TypeKind::kMu:
    case TypeKind::kBox:
      if (d->kind == t->kind) match_params(t->a, d->a, rs);
      return;
    default:
      return;
  }
}

Uses Checker::check_derive(const Term& t, const Type& expected) {
  DeriveRequest req;
  req.kind = t->derive;
  req.type = t->type;
  Type e = expose(expected);
  auto need = [&]() -> Error {
    return Error(Code::kNeedsAnnotation,
                 fmt::format("cannot read the grades of {} @{} from the "
                             "expected type {}",
                             derive_name(t->derive), pretty(t->type),
                             pretty(expected)),
                 t->pos);
  };
  switch (t->derive) {
    case DeriveKind::kDrop:
    case DeriveKind::kCopyShape: {
      Type got;
      synth(t, got);
      require_equiv(got, expected, t);
      return {};
    }
    case DeriveKind::kPush:
      if (e->kind != TypeKind::kFun || e->a->kind != TypeKind::kBox) {
        throw need();
      }
      req.grade = *e->a->grade;
      break;
    case DeriveKind::kPull:
      if (e->kind != TypeKind::kFun) throw need();
      match_params(t->type, e->a, req.grades);
      if (e->b->kind == TypeKind::kBox) req.grade = *e->b->grade;
      if (req.grades.empty() && !req.grade) throw need();
      break;
    case DeriveKind::kFmap: {
      if (e->kind != TypeKind::kFun || e->a->kind != TypeKind::kBox) {
        throw need();
      }
      req.grade = *e->a->grade;
      Type f = e->a->a;
      if (f->kind == TypeKind::kFun && f->a->kind == TypeKind::kVar &&
          f->b->kind == TypeKind::kVar) {
        req.var = f->a->name;
        req.result_var = f->b->name;
      }
      break;
    }
  }
  DerivedCombinator d = run_derive(t, req);
  require_equiv(d.type, expected, t);
  return {};
}

Uses Checker::derive_app(const Term& t, const Type* expected, Type& out) {
  const Term& head = t->t1;
  Type arg;
  Uses u = synth(t->t2, arg);
  Type a = expose(arg);
  DeriveRequest req;
  req.kind = head->derive;
  req.type = head->type;
  switch (head->derive) {
    case DeriveKind::kPush:
      if (a->kind != TypeKind::kBox) {
        throw Error(Code::kTypeMismatch,
                    fmt::format("push @{} expects a boxed argument, not {}",
                                pretty(head->type), pretty(arg)),
                    t->t2->pos);
      }
      req.grade = *a->grade;
      break;
    case DeriveKind::kPull:
      match_params(head->type, a, req.grades);
      if (expected) {
        Type e = expose(*expected);
        if (e->kind == TypeKind::kBox) req.grade = *e->grade;
      }
      break;
    case DeriveKind::kFmap:
      if (a->kind != TypeKind::kBox) {
        throw Error(Code::kTypeMismatch,
                    fmt::format("fmap @{} expects a boxed function, not {}",
                                pretty(head->type), pretty(arg)),
                    t->t2->pos);
      }
      req.grade = *a->grade;
      if (a->a->kind == TypeKind::kFun && a->a->a->kind == TypeKind::kVar &&
          a->a->b->kind == TypeKind::kVar) {
        req.var = a->a->a->name;
        req.result_var = a->a->b->name;
      }
      break;
    default:
      break;
  }
  DerivedCombinator d = run_derive(head, req);
  require_equiv(arg, d.type->a, t->t2);
  out = d.type->b;
  if (expected) require_equiv(out, *expected, t);
  return u;
}

}  // namespace

UsageMap check_term(const TypingCtx& ctx, const Term& t, const Type& expected,
                    CheckEnv& env) {
  check_type_wf(expected, env.semiring, t->pos);
  Checker c(env);
  std::map<int, std::string> names;
  for (const auto& [x, a] : ctx.entries) names[c.bind_ctx(x, a)] = x;
  Uses u = c.check(t, expected);
  UsageMap out;
  for (const auto& [id, use] : u) out[names.at(id)] = use;
  return out;
}

std::pair<Type, UsageMap> synth_term(const TypingCtx& ctx, const Term& t,
                                     CheckEnv& env) {
  Checker c(env);
  std::map<int, std::string> names;
  for (const auto& [x, a] : ctx.entries) names[c.bind_ctx(x, a)] = x;
  Type out;
  Uses u = c.synth(t, out);
  UsageMap m;
  for (const auto& [id, use] : u) m[names.at(id)] = use;
  return {out, m};
}

UsageMap check_judgement(const TypingCtx& ctx, const Term& t,
                         const Type& expected, CheckEnv& env) {
  check_type_wf(expected, env.semiring, t->pos);
  Checker c(env);
  std::map<int, std::string> names;
  for (const auto& [x, a] : ctx.entries) names[c.bind_ctx(x, a)] = x;
  Uses u = c.check(t, expected);
  UsageMap out;
  for (const auto& [id, use] : u) out[names.at(id)] = use;
  std::vector<Entry> entries = c.scope();
  for (auto it = entries.rbegin(); it != entries.rend(); ++it) {
    c.discharge(*it, u);
  }
  return out;
}

TypingCtx check_pattern(const std::optional<Grade>& enc, const Pattern& p,
                        const Type& a) {
  std::vector<PatBinder> binders;
  pattern_binders(enc, p, a, binders);
  TypingCtx ctx;
  for (auto& b : binders) ctx.add(b.name, b.assumption);
  return ctx;
}

UsageMap merge_branch_usages(const std::vector<UsageMap>& branches,
                             SemiringId sr) {
  if (branches.empty()) {
    throw std::invalid_argument("merge_branch_usages: no branches");
  }
  std::map<std::string, bool> graded;
  for (const auto& b : branches) {
    for (const auto& [x, u] : b) graded[x] = graded[x] || u.graded.has_value();
  }
  UsageMap out;
  for (const auto& [x, is_graded] : graded) {
    Usage m;
    for (size_t i = 0; i < branches.size(); ++i) {
      auto it = branches[i].find(x);
      Usage u = it == branches[i].end() ? Usage{} : it->second;
      if (is_graded) {
        Grade g = u.graded ? *u.graded : Grade::zero(sr);
        if (i == 0) {
          m.graded = g;
          continue;
        }
        auto j = sr_join(*m.graded, g);
        if (!j) {
          throw Error(Code::kNoUpperBound,
                      fmt::format("case branches use '{}' at grades {} and "
                                  "{}, which have no upper bound",
                                  x, show_grade(*m.graded), show_grade(g)));
        }
        m.graded = *j;
      } else {
        if (i > 0 && u.linear != m.linear) {
          throw Error(Code::kLinearity,
                      fmt::format("linear variable '{}' is used {} times in "
                                  "one case branch and {} times in another",
                                  x, m.linear, u.linear));
        }
        m.linear = u.linear;
      }
    }
    out[x] = m;
  }
  return out;
}

Term elaborate(const Term& t, const CheckEnv& env) {
  switch (t->kind) {
    case TermKind::kDerive: {
      auto it = env.elaborated.find(t.get());
      return it == env.elaborated.end() ? t : it->second;
    }
    case TermKind::kVar:
    case TermKind::kInt:
      return t;
    case TermKind::kApp:
      return t_app(elaborate(t->t1, env), elaborate(t->t2, env), t->pos);
    case TermKind::kLam:
      return t_lam(t->name, elaborate(t->t1, env), t->pos);
    case TermKind::kPromote:
      return t_promote(elaborate(t->t1, env), t->pos);
    case TermKind::kCon:
      return t_con(t->con, t->t1 ? elaborate(t->t1, env) : nullptr,
                   t->t2 ? elaborate(t->t2, env) : nullptr, t->pos);
    case TermKind::kCase: {
      std::vector<Branch> bs;
      for (const auto& b : t->branches) {
        bs.push_back({b.pat, elaborate(b.body, env)});
      }
      return t_case(elaborate(t->t1, env), std::move(bs), t->pos);
    }
    case TermKind::kLetRec:
      return t_letrec(t->name, elaborate(t->t1, env), elaborate(t->t2, env),
                      t->pos);
    case TermKind::kAnn:
      return t_ann(elaborate(t->t1, env), t->type, t->pos);
    case TermKind::kUse:
      return t_use(elaborate(t->t1, env), t->site, t->instance, t->pos);
  }
  return t;
}

CheckedProgram check_program_full(const Program& p) {
  CheckedProgram out;
  out.source = p;
  std::map<std::string, Type> globals;
  std::vector<const Decl*> unique;
  for (const auto& d : p.decls) {
    if (globals.count(d.name)) {
      out.diagnostics.push_back(
          {Code::kDuplicateDef,
           fmt::format("'{}' is already defined", d.name), d.pos});
      continue;
    }
    globals[d.name] = d.type;
    unique.push_back(&d);
  }
  for (const Decl* d : unique) {
    CheckEnv env;
    env.semiring = p.semiring;
    env.globals = globals;
    try {
      check_judgement({}, d->body, d->type, env);
      out.bodies[d->name] = elaborate(d->body, env);
      out.binders.insert(out.binders.end(), env.binders.begin(),
                         env.binders.end());
    } catch (const Error& e) {
      Diagnostic diag = e.with_position(d->pos).diagnostic();
      if (diag.pos.file.empty()) diag.pos.file = p.file;
      out.diagnostics.push_back(diag);
    }
  }
  return out;
}

std::vector<Diagnostic> check_program(const Program& p) {
  return check_program_full(p).diagnostics;
}

}  // namespace grlin
