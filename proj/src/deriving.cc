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

#include "grlin/deriving.h"

#include <algorithm>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

#include <fmt/format.h>

#include "grlin/pretty.h"
#include "grlin/typecheck.h"

namespace grlin {

std::vector<std::string> type_parameters(const Type& t) {
  std::vector<std::string> out = free_tyvars(t);
  if (contains_base(t, BaseKind::kInt)) out.emplace_back("Int");
  if (contains_base(t, BaseKind::kRes)) out.emplace_back("Res");
  return out;
}

namespace {

bool is_param(const Type& t) {
  return t->kind == TypeKind::kVar || t->kind == TypeKind::kBase;
}

std::string param_name(const Type& t) {
  return t->kind == TypeKind::kVar ? t->name : std::string(base_name(t->base));
}

template <typename F>
Type map_params(const Type& t, const F& f) {
  switch (t->kind) {
    case TypeKind::kVar:
    case TypeKind::kBase:
      return f(t);
    case TypeKind::kUnit:
    case TypeKind::kRecVar:
      return t;
    case TypeKind::kBox:
      return ty_box(*t->grade, map_params(t->a, f));
    case TypeKind::kMu:
      return ty_mu(t->name, map_params(t->a, f));
    case TypeKind::kFun:
      return ty_fun(map_params(t->a, f), map_params(t->b, f));
    case TypeKind::kTensor:
      return ty_tensor(map_params(t->a, f), map_params(t->b, f));
    case TypeKind::kSum:
      return ty_sum(map_params(t->a, f), map_params(t->b, f));
  }
  return t;
}

Type shape_of(const Type& t) {
  return map_params(t, [](const Type&) { return ty_unit(); });
}

using MuEnv = std::vector<std::pair<std::string, Type>>;

// Replaces the recursion variables bound by enclosing μs.
Type close_type(Type t, const MuEnv& env) {
  for (auto it = env.rbegin(); it != env.rend(); ++it) {
    t = subst_recvar(t, it->first, it->second);
  }
  return t;
}

bool requires_one(const Type& t, MuEnv& env) {
  switch (t->kind) {
    case TypeKind::kSum:
      return true;
    case TypeKind::kTensor:
      return multi_constructor(close_type(t, env)) || requires_one(t->a, env) ||
             requires_one(t->b, env);
    case TypeKind::kFun:
      return requires_one(t->b, env);
    case TypeKind::kMu: {
      env.emplace_back(t->name, close_type(t, env));
      bool r = requires_one(t->a, env);
      env.pop_back();
      return r;
    }
    default:
      return false;
  }
}

// Builds derived terms. Bound names are numbered so every binder in one
// derivation is distinct.
class Builder {
 public:
  Builder(DeriveKind kind, SemiringId sr) : kind_(kind), sr_(sr) {}

  std::string fresh(const std::string& base) {
    return base + std::to_string(++counter_);
  }

  void note(const Type& t, std::string_view what) {
    trace_.push_back(fmt::format("{} @{} : {}", derive_name(kind_),
                                 pretty(t), what));
  }

  std::vector<std::string> take_trace() { return std::move(trace_); }

  // Scrutinees must synthesize; annotate anything else.
  static Term scrut(Term t, const Type& a) {
    if (t->kind == TermKind::kVar || t->kind == TermKind::kApp) return t;
    return t_ann(std::move(t), a);
  }

  // ---- push ----------------------------------------------------------

  Term push(const Type& t, const Term& s, const Grade& r, MuEnv& env,
            std::map<std::string, std::string>& sigma) {
    Type subject = ty_box(r, close_type(t, env));
    switch (t->kind) {
      case TypeKind::kBox:
        throw Error(Code::kBoxInSubject,
                    fmt::format("push cannot be derived at {}: it is itself "
                                "a graded modality",
                                pretty(t)));
      case TypeKind::kUnit:
        note(t, "unbox and return unit");
        return t_case(scrut(s, subject),
                      {{p_box(p_con(ConKind::kUnit, {})), t_unit()}});
      case TypeKind::kVar:
      case TypeKind::kBase:
        note(t, "identity");
        return s;
      case TypeKind::kRecVar:
        note(t, "recursive call");
        return t_app(t_var(sigma.at(t->name)), s);
      case TypeKind::kSum: {
        note(t, "match [inl]/[inr], push the re-promoted payload");
        std::string x = fresh("x");
        std::string y = fresh("y");
        Term l = t_inl(push(t->a, t_promote(t_var(x)), r, env, sigma));
        Term rr = t_inr(push(t->b, t_promote(t_var(y)), r, env, sigma));
        return t_case(
            scrut(s, subject),
            {{p_box(p_con(ConKind::kInl, {p_var(x)})), l},
             {p_box(p_con(ConKind::kInr, {p_var(y)})), rr}});
      }
      case TypeKind::kTensor: {
        note(t, "match [(x, y)], push the re-promoted components");
        std::string x = fresh("x");
        std::string y = fresh("y");
        Term a = push(t->a, t_promote(t_var(x)), r, env, sigma);
        Term b = push(t->b, t_promote(t_var(y)), r, env, sigma);
        return t_case(scrut(s, subject),
                      {{p_box(p_con(ConKind::kPair, {p_var(x), p_var(y)})),
                        t_pair(a, b)}});
      }
      case TypeKind::kFun: {
        note(t, "contravariant pull on the domain, push on the codomain");
        if (!free_recvars(t->a).empty()) {
          throw Error(Code::kFunInSubject,
                      fmt::format("push cannot be derived at {}: a recursion "
                                  "variable occurs in a function domain",
                                  pretty(close_type(t, env))));
        }
        std::string y = fresh("y");
        std::string f = fresh("f");
        std::string u = fresh("u");
        std::map<std::string, Grade> rs;
        for (const auto& p : type_parameters(t->a)) rs.emplace(p, r);
        Builder inner(DeriveKind::kPull, sr_);
        inner.counter_ = counter_;
        MuEnv pull_env;
        std::map<std::string, std::string> pull_sigma;
        Term pulled = inner.pull(t->a, t_var(y), rs, r, pull_env, pull_sigma);
        counter_ = inner.counter_;
        for (auto& line : inner.trace_) trace_.push_back(std::move(line));
        Term body = push(t->b, t_promote(t_app(t_var(f), t_var(u))), r, env,
                         sigma);
        Term inner_case =
            t_case(scrut(pulled, ty_box(r, t->a)), {{p_box(p_var(u)), body}});
        return t_lam(y, t_case(scrut(s, subject),
                               {{p_box(p_var(f)), inner_case}}));
      }
      case TypeKind::kMu: {
        note(t, "letrec over the unrolled body");
        Type closed = close_type(t, env);
        std::map<std::string, Grade> rs;
        for (const auto& p : type_parameters(closed)) rs.emplace(p, r);
        Type fn = ty_fun(ty_box(r, closed), box_parameters(closed, rs));
        std::string f = fresh("f");
        std::string w = fresh("w");
        env.emplace_back(t->name, closed);
        std::string saved = sigma.count(t->name) ? sigma[t->name] : "";
        sigma[t->name] = f;
        Term body = push(t->a, t_var(w), r, env, sigma);
        env.pop_back();
        if (saved.empty()) {
          sigma.erase(t->name);
        } else {
          sigma[t->name] = saved;
        }
        return t_letrec(f, t_ann(t_lam(w, body), fn), t_app(t_var(f), s));
      }
    }
    return s;
  }

  // ---- pull ----------------------------------------------------------

  // Type of pull's result for a sub-subject.
  Type pull_result(const Type& t, const std::map<std::string, Grade>& rs,
                   const Grade& g, const MuEnv& env) {
    if (is_param(t)) return ty_box(rs.at(param_name(t)), t);
    return ty_box(g, close_type(t, env));
  }

  Term pull(const Type& t, const Term& s,
            const std::map<std::string, Grade>& rs, const Grade& g,
            MuEnv& env, std::map<std::string, std::string>& sigma) {
    switch (t->kind) {
      case TypeKind::kBox:
        throw Error(Code::kBoxInSubject,
                    fmt::format("pull cannot be derived at {}: it is itself "
                                "a graded modality",
                                pretty(t)));
      case TypeKind::kFun:
        throw Error(Code::kFunInSubject,
                    fmt::format("pull cannot be derived at {}: it contains a "
                                "function type",
                                pretty(close_type(t, env))));
      case TypeKind::kUnit:
        note(t, "match unit, return [unit]");
        return t_case(scrut(s, ty_unit()),
                      {{p_con(ConKind::kUnit, {}), t_promote(t_unit())}});
      case TypeKind::kVar:
      case TypeKind::kBase:
        note(t, "identity");
        return s;
      case TypeKind::kRecVar:
        note(t, "recursive call");
        return t_app(t_var(sigma.at(t->name)), s);
      case TypeKind::kSum: {
        note(t, "match inl/inr, pull the payload, re-box the injection");
        std::string x = fresh("x");
        std::string y = fresh("y");
        std::string u = fresh("u");
        std::string v = fresh("v");
        Term l = t_case(scrut(pull(t->a, t_var(x), rs, g, env, sigma),
                              pull_result(t->a, rs, g, env)),
                        {{p_box(p_var(u)), t_promote(t_inl(t_var(u)))}});
        Term r = t_case(scrut(pull(t->b, t_var(y), rs, g, env, sigma),
                              pull_result(t->b, rs, g, env)),
                        {{p_box(p_var(v)), t_promote(t_inr(t_var(v)))}});
        return t_case(s, {{p_con(ConKind::kInl, {p_var(x)}), l},
                          {p_con(ConKind::kInr, {p_var(y)}), r}});
      }
      case TypeKind::kTensor: {
        note(t, "match the pair, pull both sides, re-box the pair");
        std::string x = fresh("x");
        std::string y = fresh("y");
        std::string u = fresh("u");
        std::string v = fresh("v");
        Term a = scrut(pull(t->a, t_var(x), rs, g, env, sigma),
                       pull_result(t->a, rs, g, env));
        Term b = scrut(pull(t->b, t_var(y), rs, g, env, sigma),
                       pull_result(t->b, rs, g, env));
        Term inner = t_case(
            t_pair(a, b),
            {{p_con(ConKind::kPair, {p_box(p_var(u)), p_box(p_var(v))}),
              t_promote(t_pair(t_var(u), t_var(v)))}});
        return t_case(s, {{p_con(ConKind::kPair, {p_var(x), p_var(y)}),
                           inner}});
      }
      case TypeKind::kMu: {
        note(t, "letrec over the unrolled body");
        Type closed = close_type(t, env);
        Type fn = ty_fun(box_parameters(closed, rs), ty_box(g, closed));
        std::string f = fresh("f");
        std::string w = fresh("w");
        env.emplace_back(t->name, closed);
        std::string saved = sigma.count(t->name) ? sigma[t->name] : "";
        sigma[t->name] = f;
        Term body = pull(t->a, t_var(w), rs, g, env, sigma);
        env.pop_back();
        if (saved.empty()) {
          sigma.erase(t->name);
        } else {
          sigma[t->name] = saved;
        }
        return t_letrec(f, t_ann(t_lam(w, body), fn), t_app(t_var(f), s));
      }
    }
    return s;
  }

  // ---- drop ----------------------------------------------------------

  Term drop(const Type& t, const Term& s, MuEnv& env,
            std::map<std::string, std::string>& sigma) {
    switch (t->kind) {
      case TypeKind::kVar:
        throw Error(Code::kPolymorphicDrop,
                    fmt::format("drop cannot be derived at type variable {}: "
                                "it may stand for a linear-only type",
                                t->name));
      case TypeKind::kBase:
        if (!base_droppable(t->base)) {
          throw Error(Code::kNotDroppable,
                      fmt::format("{} values cannot be discarded",
                                  base_name(t->base)));
        }
        note(t, "built-in drop");
        return t_app(t_derive(DeriveKind::kDrop, t), s);
      case TypeKind::kFun:
      case TypeKind::kBox:
        throw Error(Code::kNotDroppable,
                    fmt::format("drop cannot be derived at {}",
                                pretty(close_type(t, env))));
      case TypeKind::kUnit:
        note(t, "match unit");
        return t_case(s, {{p_con(ConKind::kUnit, {}), t_unit()}});
      case TypeKind::kRecVar:
        note(t, "recursive call");
        return t_app(t_var(sigma.at(t->name)), s);
      case TypeKind::kSum: {
        note(t, "drop either payload");
        std::string x = fresh("x");
        std::string y = fresh("y");
        Term l = drop(t->a, t_var(x), env, sigma);
        Term r = drop(t->b, t_var(y), env, sigma);
        return t_case(s, {{p_con(ConKind::kInl, {p_var(x)}), l},
                          {p_con(ConKind::kInr, {p_var(y)}), r}});
      }
      case TypeKind::kTensor: {
        note(t, "drop both components in sequence");
        std::string x = fresh("x");
        std::string y = fresh("y");
        Term a = scrut(drop(t->a, t_var(x), env, sigma), ty_unit());
        Term b = scrut(drop(t->b, t_var(y), env, sigma), ty_unit());
        Term body = t_case(
            a, {{p_con(ConKind::kUnit, {}),
                 t_case(b, {{p_con(ConKind::kUnit, {}), t_unit()}})}});
        return t_case(s, {{p_con(ConKind::kPair, {p_var(x), p_var(y)}),
                           body}});
      }
      case TypeKind::kMu: {
        note(t, "letrec over the unrolled body");
        Type closed = close_type(t, env);
        std::string f = fresh("f");
        std::string w = fresh("w");
        env.emplace_back(t->name, closed);
        std::string saved = sigma.count(t->name) ? sigma[t->name] : "";
        sigma[t->name] = f;
        Term body = drop(t->a, t_var(w), env, sigma);
        env.pop_back();
        if (saved.empty()) {
          sigma.erase(t->name);
        } else {
          sigma[t->name] = saved;
        }
        return t_letrec(f, t_ann(t_lam(w, body), ty_fun(closed, ty_unit())),
                        t_app(t_var(f), s));
      }
    }
    return s;
  }

  // ---- copyShape -----------------------------------------------------

  Term copy_shape(const Type& t, const Term& s, MuEnv& env,
                  std::map<std::string, std::string>& sigma) {
    auto result_type = [&](const Type& a) {
      Type c = close_type(a, env);
      return ty_tensor(shape_of(c), c);
    };
    switch (t->kind) {
      case TypeKind::kBox:
        throw Error(Code::kBoxInSubject,
                    fmt::format("copyShape cannot be derived at {}: it is "
                                "itself a graded modality",
                                pretty(t)));
      case TypeKind::kFun:
        throw Error(Code::kFunInSubject,
                    fmt::format("copyShape cannot be derived at {}: it "
                                "contains a function type",
                                pretty(close_type(t, env))));
      case TypeKind::kVar:
      case TypeKind::kBase:
        note(t, "unit shape, keep the value");
        return t_pair(t_unit(), s);
      case TypeKind::kUnit:
        note(t, "match unit");
        return t_case(s, {{p_con(ConKind::kUnit, {}),
                           t_pair(t_unit(), t_unit())}});
      case TypeKind::kRecVar:
        note(t, "recursive call");
        return t_app(t_var(sigma.at(t->name)), s);
      case TypeKind::kSum: {
        note(t, "copy the payload, inject shape and value");
        std::string x = fresh("x");
        std::string y = fresh("y");
        std::string s1 = fresh("s");
        std::string x1 = fresh("x");
        std::string s2 = fresh("s");
        std::string y1 = fresh("y");
        Term l = t_case(
            scrut(copy_shape(t->a, t_var(x), env, sigma), result_type(t->a)),
            {{p_con(ConKind::kPair, {p_var(s1), p_var(x1)}),
              t_pair(t_inl(t_var(s1)), t_inl(t_var(x1)))}});
        Term r = t_case(
            scrut(copy_shape(t->b, t_var(y), env, sigma), result_type(t->b)),
            {{p_con(ConKind::kPair, {p_var(s2), p_var(y1)}),
              t_pair(t_inr(t_var(s2)), t_inr(t_var(y1)))}});
        return t_case(s, {{p_con(ConKind::kInl, {p_var(x)}), l},
                          {p_con(ConKind::kInr, {p_var(y)}), r}});
      }
      case TypeKind::kTensor: {
        note(t, "copy both components, pair shapes and values");
        std::string x = fresh("x");
        std::string y = fresh("y");
        std::string s1 = fresh("s");
        std::string x1 = fresh("x");
        std::string s2 = fresh("s");
        std::string y1 = fresh("y");
        Term inner = t_case(
            scrut(copy_shape(t->b, t_var(y), env, sigma), result_type(t->b)),
            {{p_con(ConKind::kPair, {p_var(s2), p_var(y1)}),
              t_pair(t_pair(t_var(s1), t_var(s2)),
                     t_pair(t_var(x1), t_var(y1)))}});
        Term outer = t_case(
            scrut(copy_shape(t->a, t_var(x), env, sigma), result_type(t->a)),
            {{p_con(ConKind::kPair, {p_var(s1), p_var(x1)}), inner}});
        return t_case(s, {{p_con(ConKind::kPair, {p_var(x), p_var(y)}),
                           outer}});
      }
      case TypeKind::kMu: {
        note(t, "letrec over the unrolled body");
        Type closed = close_type(t, env);
        std::string f = fresh("f");
        std::string w = fresh("w");
        env.emplace_back(t->name, closed);
        std::string saved = sigma.count(t->name) ? sigma[t->name] : "";
        sigma[t->name] = f;
        Term body = copy_shape(t->a, t_var(w), env, sigma);
        env.pop_back();
        if (saved.empty()) {
          sigma.erase(t->name);
        } else {
          sigma[t->name] = saved;
        }
        Type fn = ty_fun(closed, ty_tensor(shape_of(closed), closed));
        return t_letrec(f, t_ann(t_lam(w, body), fn), t_app(t_var(f), s));
      }
    }
    return s;
  }

  // ---- fmap ----------------------------------------------------------

  // Whether `t` (under the recursion variables in `mapping`) contains the
  // mapped variable.
  static bool mentions(const Type& t, const std::string& var,
                       const std::map<std::string, std::string>& sigma) {
    switch (t->kind) {
      case TypeKind::kVar:
        return t->name == var;
      case TypeKind::kRecVar:
        return sigma.count(t->name) > 0;
      case TypeKind::kUnit:
      case TypeKind::kBase:
        return false;
      default:
        return (t->a && mentions(t->a, var, sigma)) ||
               (t->b && mentions(t->b, var, sigma));
    }
  }

  Term fmap(const Type& t, const Term& s, const Term& f,
            const std::string& var, const std::string& result_var,
            MuEnv& env, std::map<std::string, std::string>& sigma) {
    if (t->kind == TypeKind::kBox) {
      throw Error(Code::kBoxInSubject,
                  fmt::format("fmap cannot be derived at {}: it is itself a "
                              "graded modality",
                              pretty(t)));
    }
    if (t->kind == TypeKind::kFun) {
      throw Error(Code::kFunInSubject,
                  fmt::format("fmap cannot be derived at {}: it contains a "
                              "function type",
                              pretty(close_type(t, env))));
    }
    if (!mentions(t, var, sigma)) {
      note(t, "no occurrence, keep the value");
      return s;
    }
    switch (t->kind) {
      case TypeKind::kVar:
        note(t, "apply the function");
        return t_app(f, s);
      case TypeKind::kRecVar:
        note(t, "recursive call");
        return t_app(t_var(sigma.at(t->name)), s);
      case TypeKind::kSum: {
        note(t, "map inside either injection");
        std::string x = fresh("x");
        std::string y = fresh("y");
        Term l = t_inl(fmap(t->a, t_var(x), f, var, result_var, env, sigma));
        Term r = t_inr(fmap(t->b, t_var(y), f, var, result_var, env, sigma));
        return t_case(s, {{p_con(ConKind::kInl, {p_var(x)}), l},
                          {p_con(ConKind::kInr, {p_var(y)}), r}});
      }
      case TypeKind::kTensor: {
        note(t, "map both components");
        std::string x = fresh("x");
        std::string y = fresh("y");
        Term a = fmap(t->a, t_var(x), f, var, result_var, env, sigma);
        Term b = fmap(t->b, t_var(y), f, var, result_var, env, sigma);
        return t_case(s, {{p_con(ConKind::kPair, {p_var(x), p_var(y)}),
                           t_pair(a, b)}});
      }
      case TypeKind::kMu: {
        note(t, "letrec over the unrolled body");
        Type closed = close_type(t, env);
        Type image = subst_tyvars(closed, {{var, ty_var(result_var)}});
        std::string g = fresh("g");
        std::string w = fresh("w");
        env.emplace_back(t->name, closed);
        std::string saved = sigma.count(t->name) ? sigma[t->name] : "";
        sigma[t->name] = g;
        Term body = fmap(t->a, t_var(w), f, var, result_var, env, sigma);
        env.pop_back();
        if (saved.empty()) {
          sigma.erase(t->name);
        } else {
          sigma[t->name] = saved;
        }
        return t_letrec(g, t_ann(t_lam(w, body), ty_fun(closed, image)),
                        t_app(t_var(g), s));
      }
      default:
        return s;
    }
  }

 private:
  DeriveKind kind_;
  SemiringId sr_;
  int counter_ = 0;
  std::vector<std::string> trace_;
};

// Usage of fmap's function in the derived term, mirroring the checker:
// branches join, pairs add, recursive bindings scale by ω.
std::optional<Grade> occurrences(const Type& t, const std::string& var,
                                 SemiringId sr,
                                 std::map<std::string, std::string>& sigma) {
  if (!Builder::mentions(t, var, sigma)) return Grade::zero(sr);
  switch (t->kind) {
    case TypeKind::kVar:
      return Grade::one(sr);
    case TypeKind::kRecVar:
      return Grade::zero(sr);
    case TypeKind::kSum: {
      auto a = occurrences(t->a, var, sr, sigma);
      auto b = occurrences(t->b, var, sr, sigma);
      if (!a || !b) return std::nullopt;
      return sr_join(*a, *b);
    }
    case TypeKind::kTensor: {
      auto a = occurrences(t->a, var, sr, sigma);
      auto b = occurrences(t->b, var, sr, sigma);
      if (!a || !b) return std::nullopt;
      return sr_add(*a, *b);
    }
    case TypeKind::kMu: {
      sigma[t->name] = "rec";
      auto body = occurrences(t->a, var, sr, sigma);
      sigma.erase(t->name);
      if (!body) return std::nullopt;
      if (*body == Grade::zero(sr)) return body;
      auto omega = sr_omega(sr);
      if (!omega) return std::nullopt;
      return sr_mul(*body, *omega);
    }
    default:
      return Grade::zero(sr);
  }
}

std::string grades_key(const DeriveRequest& req) {
  std::string out;
  if (req.grade) out += show_grade(*req.grade);
  for (const auto& [k, g] : req.grades) {
    out += fmt::format(",{}={}", k, show_grade(g));
  }
  if (!req.var.empty() || !req.result_var.empty()) {
    out += fmt::format(";{}->{}", req.var, req.result_var);
  }
  return out;
}

void check_subject(const Type& t, SemiringId sr) {
  if (!free_recvars(t).empty()) {
    throw Error(Code::kSyntax,
                fmt::format("type {} has unbound recursion variables",
                            pretty(t)));
  }
  check_type_wf(t, sr);
}

struct Built {
  Term term;
  Type type;
  std::vector<std::string> side;
};

Built build_push(const DeriveRequest& req, Builder& b) {
  if (!req.grade) {
    throw Error(Code::kNeedsAnnotation,
                fmt::format("push @{} needs a grade", pretty(req.type)));
  }
  const Grade& r = *req.grade;
  if (contains_kind(req.type, TypeKind::kBox)) {
    throw Error(Code::kBoxInSubject,
                fmt::format("push cannot be derived at {}: it contains a "
                            "graded modality",
                            pretty(req.type)));
  }
  Built out;
  if (push_requires_one(req.type)) {
    if (!sr_leq(Grade::one(r.semiring()), r)) {
      throw Error(Code::kSideCondition,
                  fmt::format("push @{} matches on constructors under the "
                              "box and needs 1 ⊑ {}",
                              pretty(req.type), show_grade(r)));
    }
    out.side.push_back(fmt::format("1 ⊑ {}", show_grade(r)));
  }
  MuEnv env;
  std::map<std::string, std::string> sigma;
  out.term = t_lam("z", b.push(req.type, t_var("z"), r, env, sigma));
  std::map<std::string, Grade> rs;
  for (const auto& p : type_parameters(req.type)) rs.emplace(p, r);
  out.type = ty_fun(ty_box(r, req.type), box_parameters(req.type, rs));
  return out;
}

Built build_pull(const DeriveRequest& req, Builder& b) {
  if (contains_kind(req.type, TypeKind::kBox)) {
    throw Error(Code::kBoxInSubject,
                fmt::format("pull cannot be derived at {}: it contains a "
                            "graded modality",
                            pretty(req.type)));
  }
  if (contains_kind(req.type, TypeKind::kFun)) {
    throw Error(Code::kFunInSubject,
                fmt::format("pull cannot be derived at {}: it contains a "
                            "function type",
                            pretty(req.type)));
  }
  std::map<std::string, Grade> rs;
  for (const auto& p : type_parameters(req.type)) {
    auto it = req.grades.find(p);
    if (it != req.grades.end()) {
      rs.emplace(p, it->second);
    } else if (req.grade) {
      rs.emplace(p, *req.grade);
    } else {
      throw Error(Code::kNeedsAnnotation,
                  fmt::format("pull @{} needs a grade for parameter {}",
                              pretty(req.type), p));
    }
  }
  std::optional<Grade> g;
  const std::string* first_key = nullptr;
  for (const auto& p : type_parameters(req.type)) {
    const Grade& r = rs.at(p);
    if (!g) {
      g = r;
      first_key = &p;
      continue;
    }
    auto m = sr_meet(*g, r);
    if (!m) {
      throw Error(Code::kMeetUndefined,
                  fmt::format("pull @{}: grades {} ({}) and {} ({}) have no "
                              "greatest lower bound",
                              pretty(req.type), show_grade(*g), *first_key,
                              show_grade(r), p));
    }
    g = *m;
  }
  if (!g) {
    if (!req.grade) {
      throw Error(Code::kNeedsAnnotation,
                  fmt::format("pull @{} has no parameters; give the result "
                              "grade explicitly",
                              pretty(req.type)));
    }
    g = *req.grade;
  }
  Built out;
  MuEnv env;
  std::map<std::string, std::string> sigma;
  out.term = t_lam("z", b.pull(req.type, t_var("z"), rs, *g, env, sigma));
  out.type = ty_fun(box_parameters(req.type, rs), ty_box(*g, req.type));
  out.side.push_back(fmt::format("meet = {}", show_grade(*g)));
  return out;
}

Built build_drop(const DeriveRequest& req, Builder& b) {
  Built out;
  MuEnv env;
  std::map<std::string, std::string> sigma;
  if (!free_tyvars(req.type).empty()) {
    throw Error(Code::kPolymorphicDrop,
                fmt::format("drop cannot be derived at {}: type variable {} "
                            "may stand for a linear-only type",
                            pretty(req.type), free_tyvars(req.type)[0]));
  }
  out.term = t_lam("z", b.drop(req.type, t_var("z"), env, sigma));
  out.type = ty_fun(req.type, ty_unit());
  return out;
}

Built build_copy_shape(const DeriveRequest& req, Builder& b) {
  Built out;
  MuEnv env;
  std::map<std::string, std::string> sigma;
  out.term = t_lam("z", b.copy_shape(req.type, t_var("z"), env, sigma));
  out.type = ty_fun(req.type, ty_tensor(shape_of(req.type), req.type));
  return out;
}

Built build_fmap(const DeriveRequest& req, Builder& b) {
  if (!req.grade) {
    throw Error(Code::kNeedsAnnotation,
                fmt::format("fmap @{} needs the grade of its function",
                            pretty(req.type)));
  }
  std::vector<std::string> vars = free_tyvars(req.type);
  std::string var = req.var;
  if (var.empty()) {
    if (vars.size() > 1) {
      throw Error(Code::kNeedsAnnotation,
                  fmt::format("fmap @{} has several type variables; choose "
                              "the one to map",
                              pretty(req.type)));
    }
    var = vars.empty() ? "a" : vars[0];
  }
  std::string result_var = req.result_var;
  if (result_var.empty()) {
    result_var = "b";
    for (int i = 1; std::find(vars.begin(), vars.end(), result_var) !=
                    vars.end() || result_var == var;
         ++i) {
      result_var = "b" + std::to_string(i);
    }
  }
  const Grade& g = *req.grade;
  std::map<std::string, std::string> scratch;
  auto count = occurrences(req.type, var, g.semiring(), scratch);
  if (!count || !sr_leq(*count, g)) {
    throw Error(Code::kSideCondition,
                fmt::format("fmap @{} uses its function {} times, which "
                            "grade {} does not cover",
                            pretty(req.type),
                            count ? show_grade(*count) : "unboundedly",
                            show_grade(g)));
  }
  Built out;
  out.side.push_back(fmt::format("{} ⊑ {}", show_grade(*count),
                                 show_grade(g)));
  MuEnv env;
  std::map<std::string, std::string> sigma;
  Term body = b.fmap(req.type, t_var("z"), t_var("f"), var, result_var, env,
                     sigma);
  out.term = t_lam(
      "bf", t_lam("z", t_case(t_var("bf"), {{p_box(p_var("f")), body}})));
  Type image = subst_tyvars(req.type, {{var, ty_var(result_var)}});
  out.type = ty_fun(ty_box(g, ty_fun(ty_var(var), ty_var(result_var))),
                    ty_fun(req.type, image));
  return out;
}

struct Cache {
  std::mutex mu;
  std::unordered_map<std::string, DerivedCombinator> entries;
};

Cache& cache() {
  static Cache c;
  return c;
}

DerivedCombinator compute(const DeriveRequest& req, const std::string& key) {
  check_subject(req.type, req.semiring);
  Builder b(req.kind, req.semiring);
  Built built;
  switch (req.kind) {
    case DeriveKind::kPush:
      built = build_push(req, b);
      break;
    case DeriveKind::kPull:
      built = build_pull(req, b);
      break;
    case DeriveKind::kDrop:
      built = build_drop(req, b);
      break;
    case DeriveKind::kCopyShape:
      built = build_copy_shape(req, b);
      break;
    case DeriveKind::kFmap:
      built = build_fmap(req, b);
      break;
  }
  CheckEnv env;
  env.semiring = req.semiring;
  try {
    check_judgement({}, built.term, built.type, env);
  } catch (const Error& e) {
    throw std::logic_error(
        fmt::format("derived {} is ill-typed: {}\n  term: {}\n  type: {}", key,
                    format_diagnostic(e.diagnostic()), pretty(built.term),
                    pretty(built.type)));
  }
  DerivedCombinator d;
  d.request = req;
  d.key = key;
  d.term = built.term;
  d.type = built.type;
  d.side_conditions = std::move(built.side);
  d.trace = b.take_trace();
  return d;
}

}  // namespace

Type box_parameters(const Type& t, const std::map<std::string, Grade>& g) {
  return map_params(t, [&](const Type& p) {
    auto it = g.find(param_name(p));
    return it == g.end() ? p : ty_box(it->second, p);
  });
}

bool push_requires_one(const Type& t) {
  MuEnv env;
  return requires_one(t, env);
}

std::optional<Grade> fmap_occurrences(const Type& t, const std::string& var,
                                      SemiringId sr) {
  std::map<std::string, std::string> sigma;
  return occurrences(t, var, sr, sigma);
}

std::string derive_key(const DeriveRequest& req) {
  return fmt::format("{}@{}@{}@{}", derive_name(req.kind), pretty(req.type),
                     semiring_name(req.semiring), grades_key(req));
}

DerivedCombinator derive(const DeriveRequest& req) {
  std::string key = derive_key(req);
  Cache& c = cache();
  {
    std::lock_guard<std::mutex> lock(c.mu);
    auto it = c.entries.find(key);
    if (it != c.entries.end()) return it->second;
  }
  DerivedCombinator d = compute(req, key);
  std::lock_guard<std::mutex> lock(c.mu);
  return c.entries.emplace(key, std::move(d)).first->second;
}

DerivedCombinator derive_push(const Type& t, const Grade& r) {
  DeriveRequest req;
  req.kind = DeriveKind::kPush;
  req.type = t;
  req.semiring = r.semiring();
  req.grade = r;
  return derive(req);
}

DerivedCombinator derive_pull(const Type& t,
                              const std::map<std::string, Grade>& rs,
                              std::optional<Grade> result) {
  DeriveRequest req;
  req.kind = DeriveKind::kPull;
  req.type = t;
  req.grades = rs;
  req.grade = result;
  if (result) {
    req.semiring = result->semiring();
  } else if (!rs.empty()) {
    req.semiring = rs.begin()->second.semiring();
  }
  for (const auto& [k, g] : rs) {
    if (g.semiring() != req.semiring) {
      throw Error(Code::kMixedSemiring,
                  fmt::format("grade {} for {} is not in the {} semiring",
                              show_grade(g), k, semiring_name(req.semiring)));
    }
  }
  return derive(req);
}

DerivedCombinator derive_drop(const Type& t, SemiringId sr) {
  DeriveRequest req;
  req.kind = DeriveKind::kDrop;
  req.type = t;
  req.semiring = sr;
  return derive(req);
}

DerivedCombinator derive_copyshape(const Type& t, SemiringId sr) {
  DeriveRequest req;
  req.kind = DeriveKind::kCopyShape;
  req.type = t;
  req.semiring = sr;
  return derive(req);
}

DerivedCombinator derive_fmap(const Type& t, const Grade& g, std::string var,
                              std::string result_var) {
  DeriveRequest req;
  req.kind = DeriveKind::kFmap;
  req.type = t;
  req.semiring = g.semiring();
  req.grade = g;
  req.var = std::move(var);
  req.result_var = std::move(result_var);
  return derive(req);
}

Term comonad_eps() {
  return t_lam("x", t_case(t_var("x"), {{p_box(p_var("z")), t_var("z")}}));
}

Term comonad_delta() {
  return t_lam("x", t_case(t_var("x"), {{p_box(p_var("z")),
                                         t_promote(t_promote(t_var("z")))}}));
}

Type comonad_eps_type(const Type& a, SemiringId sr) {
  return ty_fun(ty_box(Grade::one(sr), a), a);
}

Type comonad_delta_type(const Type& a, const Grade& r, const Grade& s) {
  return ty_fun(ty_box(sr_mul(r, s), a), ty_box(r, ty_box(s, a)));
}

size_t derive_cache_size() {
  Cache& c = cache();
  std::lock_guard<std::mutex> lock(c.mu);
  return c.entries.size();
}

void derive_cache_clear() {
  Cache& c = cache();
  std::lock_guard<std::mutex> lock(c.mu);
  c.entries.clear();
}

}  // namespace grlin
