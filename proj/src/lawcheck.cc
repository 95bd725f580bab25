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

#include "grlin/lawcheck.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <thread>

#include <fmt/format.h>

#include "grlin/deriving.h"
#include "grlin/evaluator.h"
#include "grlin/pretty.h"
#include "grlin/typecheck.h"

namespace grlin {

std::string_view suite_name(Suite s) {
  switch (s) {
    case Suite::kInverses:
      return "inverses";
    case Suite::kNaturality:
      return "naturality";
    case Suite::kComonad:
      return "comonad";
    case Suite::kEquational:
      return "equational";
    case Suite::kSoundness:
      return "soundness";
  }
  return "?";
}

std::optional<Suite> parse_suite(std::string_view name) {
  for (Suite s : kAllSuites) {
    if (suite_name(s) == name) return s;
  }
  return std::nullopt;
}

int default_cases(Suite s) {
  switch (s) {
    case Suite::kInverses:
      return 500;
    case Suite::kSoundness:
      return 300;
    default:
      return 200;
  }
}

Rng::Rng(uint64_t seed, uint64_t stream, uint64_t index) {
  std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                    static_cast<uint32_t>(stream), static_cast<uint32_t>(index),
                    static_cast<uint32_t>(index >> 32)};
  eng_.seed(seq);
}

namespace {

const std::vector<SemiringId> kSemirings(std::begin(kAllSemirings),
                                         std::end(kAllSemirings));

Type gen_leaf(const TypeGenConfig& cfg, Rng& rng) {
  std::vector<Type> opts{ty_unit()};
  for (int i = 0; i < cfg.tyvars; ++i) {
    opts.push_back(ty_var(std::string(1, static_cast<char>('a' + i))));
  }
  if (cfg.allow_int) opts.push_back(ty_int());
  return rng.pick(opts);
}

Type gen_rec(const TypeGenConfig& cfg, Rng& rng, int depth, bool mu_ok,
             bool fun_ok) {
  if (depth <= 1 || rng.below(4) == 0) return gen_leaf(cfg, rng);
  std::vector<int> kinds{0, 1};
  if (mu_ok && cfg.allow_mu) kinds.push_back(2);
  if (fun_ok && cfg.allow_fun) kinds.push_back(3);
  switch (rng.pick(kinds)) {
    case 0:
      return ty_tensor(gen_rec(cfg, rng, depth - 1, mu_ok, fun_ok),
                       gen_rec(cfg, rng, depth - 1, mu_ok, fun_ok));
    case 1:
      return ty_sum(gen_rec(cfg, rng, depth - 1, mu_ok, fun_ok),
                    gen_rec(cfg, rng, depth - 1, mu_ok, fun_ok));
    case 2: {
      Type elem = gen_rec(cfg, rng, depth - 1, false, false);
      Type x = ty_recvar("X");
      if (rng.coin()) return ty_mu("X", ty_sum(ty_unit(), ty_tensor(elem, x)));
      return ty_mu("X", ty_sum(elem, ty_tensor(x, x)));
    }
    default:
      return ty_fun(gen_rec(cfg, rng, depth - 1, mu_ok, false),
                    gen_rec(cfg, rng, depth - 1, mu_ok, fun_ok));
  }
}

// Whether every value of `t` needs another μ unrolling.
bool needs_unroll(const Type& t) {
  switch (t->kind) {
    case TypeKind::kMu:
      return true;
    case TypeKind::kTensor:
      return needs_unroll(t->a) || needs_unroll(t->b);
    case TypeKind::kSum:
      return needs_unroll(t->a) && needs_unroll(t->b);
    case TypeKind::kBox:
      return needs_unroll(t->a);
    default:
      return false;
  }
}

}  // namespace

Type gen_type(const TypeGenConfig& cfg, Rng& rng) {
  return gen_rec(cfg, rng, cfg.max_depth, true, true);
}

Term gen_value(const Type& t, Rng& rng, int budget) {
  switch (t->kind) {
    case TypeKind::kUnit:
      return t_unit();
    case TypeKind::kVar:
      return t_int(static_cast<int64_t>(rng.below(10)));
    case TypeKind::kBase:
      if (t->base != BaseKind::kInt) {
        throw std::invalid_argument("no values of type Res can be generated");
      }
      return t_int(static_cast<int64_t>(rng.below(10)));
    case TypeKind::kBox:
      return t_promote(gen_value(t->a, rng, budget));
    case TypeKind::kTensor:
      return t_pair(gen_value(t->a, rng, budget),
                    gen_value(t->b, rng, budget));
    case TypeKind::kSum: {
      bool left;
      if (budget > 0) {
        left = rng.coin();
      } else if (needs_unroll(t->a) != needs_unroll(t->b)) {
        left = !needs_unroll(t->a);
      } else {
        left = rng.coin();
      }
      return left ? t_inl(gen_value(t->a, rng, budget))
                  : t_inr(gen_value(t->b, rng, budget));
    }
    case TypeKind::kMu:
      return gen_value(unroll_mu(t), rng, budget - 1);
    case TypeKind::kFun:
    case TypeKind::kRecVar:
      break;
  }
  throw std::invalid_argument(
      fmt::format("cannot generate a value of type {}", pretty(t)));
}

Type instantiate_int(const Type& t) {
  std::map<std::string, Type> s;
  for (const auto& v : free_tyvars(t)) s.emplace(v, ty_int());
  return subst_tyvars(t, s);
}

namespace {

// A case that does not hold. Exceptions thrown by a case are failures too.
struct Mismatch {
  std::string lhs;
  std::string rhs;
};

class Case {
 public:
  Case(Suite s, uint64_t seed, int index, int max_depth)
      : rng(seed, static_cast<uint64_t>(s), static_cast<uint64_t>(index)),
        max_depth(max_depth) {}

  Rng rng;
  int max_depth;
  std::vector<std::string> notes;
  std::optional<Mismatch> mismatch;

  void note(std::string s) { notes.push_back(std::move(s)); }

  SemiringId semiring() { return rng.pick(kSemirings); }

  Grade grade(SemiringId sr, bool need_one) {
    std::vector<Grade> gs;
    for (const auto& g : sample_grades(sr, 3)) {
      if (!need_one || sr_leq(Grade::one(sr), g)) gs.push_back(g);
    }
    return rng.pick(gs);
  }

  Type type(int tyvars, bool allow_fun = false) {
    TypeGenConfig c;
    c.max_depth = max_depth;
    c.tyvars = tyvars;
    c.allow_fun = allow_fun;
    return gen_type(c, rng);
  }

  // A generated value, checked at its instantiated type first.
  Term value(const Type& t, SemiringId sr) {
    Term v = gen_value(t, rng);
    CheckEnv env;
    env.semiring = sr;
    check_judgement({}, v, instantiate_int(t), env);
    return v;
  }

  // Compares deep normal forms; records the first disagreement.
  bool same(const std::string& what, const Term& lhs, const Term& rhs) {
    if (mismatch) return false;
    Term a = normalize(lhs);
    Term b = normalize(rhs);
    if (alpha_eq(a, b)) return true;
    mismatch = Mismatch{fmt::format("{}: {}", what, pretty(a)),
                        fmt::format("{}: {}", what, pretty(b))};
    return false;
  }
};

Term app(Term f, Term a) { return t_app(std::move(f), std::move(a)); }

// □_r f = λx. case x of [y] -> [f y]
Term box_map(const Term& f) {
  return t_lam("x", t_case(t_var("x"),
                           {{p_box(p_var("y")), t_promote(app(f, t_var("y")))}}));
}

std::map<std::string, Grade> uniform(const Type& t, const Grade& r) {
  std::map<std::string, Grade> rs;
  for (const auto& p : type_parameters(t)) rs.emplace(p, r);
  return rs;
}

const Grade& unbounded() {
  static const Grade g = Grade::interval(0, kInf);
  return g;
}

// F h, mapping h over every parameter position of `t`.
Term map_all(const Type& t, const Term& h) {
  std::function<Type(const Type&)> go = [&](const Type& a) -> Type {
    switch (a->kind) {
      case TypeKind::kVar:
      case TypeKind::kBase:
        return ty_var("p");
      case TypeKind::kTensor:
        return ty_tensor(go(a->a), go(a->b));
      case TypeKind::kSum:
        return ty_sum(go(a->a), go(a->b));
      case TypeKind::kMu:
        return ty_mu(a->name, go(a->a));
      default:
        return a;
    }
  };
  auto d = derive_fmap(go(t), unbounded(), "p", "q");
  return app(d.term, t_promote(h));
}

// f : Int ⊸ Int as a finite table with an identity default.
Term int_table(Rng& rng) {
  std::vector<Branch> bs;
  for (int i = 0; i < 10; ++i) {
    bs.push_back({p_int(i), t_int(static_cast<int64_t>(rng.below(20)))});
  }
  bs.push_back({p_var("n"), t_var("n")});
  return t_lam("k", t_case(t_var("k"), std::move(bs)));
}

void case_inverses(Case& c) {
  SemiringId sr = c.semiring();
  Type t = c.type(2);
  Grade r = c.grade(sr, push_requires_one(t));
  c.note(fmt::format("T = {}, r = {} ({})", pretty(t), show_grade(r),
                     semiring_name(sr)));
  auto push = derive_push(t, r);
  auto pull = derive_pull(t, uniform(t, r), r);
  Term v = t_promote(c.value(t, sr));
  c.note(fmt::format("v = {}", pretty(v)));
  c.same("pull (push v)", app(pull.term, app(push.term, v)), v);
  Term w = c.value(box_parameters(t, uniform(t, r)), sr);
  c.note(fmt::format("w = {}", pretty(w)));
  c.same("push (pull w)", app(push.term, app(pull.term, w)), w);
}

void case_naturality(Case& c) {
  SemiringId sr = c.semiring();
  Type t = c.type(1);
  Grade r = c.grade(sr, push_requires_one(t));
  Term f = int_table(c.rng);
  c.note(fmt::format("T = {}, r = {} ({}), f = {}", pretty(t), show_grade(r),
                     semiring_name(sr), pretty(f)));
  auto push = derive_push(t, r);
  auto pull = derive_pull(t, uniform(t, r), r);
  Term fmap = derive_fmap(t, unbounded(), "a", "b").term;
  Term ff = app(fmap, t_promote(f));
  Term fbox = app(fmap, t_promote(box_map(f)));
  Term v = t_promote(c.value(t, sr));
  c.note(fmt::format("v = {}", pretty(v)));
  c.same("push", app(fbox, app(push.term, v)),
         app(push.term, app(box_map(ff), v)));
  Term w = c.value(box_parameters(t, uniform(t, r)), sr);
  c.note(fmt::format("w = {}", pretty(w)));
  c.same("pull", app(box_map(ff), app(pull.term, w)),
         app(pull.term, app(fbox, w)));
}

void case_comonad(Case& c) {
  SemiringId sr = c.semiring();
  Type t = c.type(2);
  bool need = push_requires_one(t);
  Grade one = Grade::one(sr);
  Grade r = one;
  Grade s = one;
  for (int tries = 0; tries < 16; ++tries) {
    Grade r1 = c.grade(sr, need);
    Grade s1 = c.grade(sr, need);
    if (!need || sr_leq(one, sr_mul(r1, s1))) {
      r = r1;
      s = s1;
      break;
    }
  }
  Grade rs = sr_mul(r, s);
  c.note(fmt::format("T = {}, r = {}, s = {} ({})", pretty(t), show_grade(r),
                     show_grade(s), semiring_name(sr)));
  Term eps = comonad_eps();
  Term delta = comonad_delta();
  Term f_eps = map_all(t, eps);
  Term f_delta = map_all(t, delta);

  auto push1 = derive_push(t, one);
  auto pull1 = derive_pull(t, uniform(t, one), one);
  Term v = t_promote(c.value(t, sr));
  c.note(fmt::format("v = {}", pretty(v)));
  c.same("push eps", app(f_eps, app(push1.term, v)), app(eps, v));
  Term w = c.value(box_parameters(t, uniform(t, one)), sr);
  c.note(fmt::format("w = {}", pretty(w)));
  c.same("pull eps", app(eps, app(pull1.term, w)), app(f_eps, w));

  auto push_rs = derive_push(t, rs);
  auto push_r = derive_push(t, r);
  auto push_s = derive_push(t, s);
  auto pull_rs = derive_pull(t, uniform(t, rs), rs);
  auto pull_r = derive_pull(t, uniform(t, r), r);
  auto pull_s = derive_pull(t, uniform(t, s), s);
  Term v2 = t_promote(c.value(t, sr));
  c.note(fmt::format("v' = {}", pretty(v2)));
  c.same("push delta", app(f_delta, app(push_rs.term, v2)),
         app(push_r.term, app(box_map(push_s.term), app(delta, v2))));
  Term w2 = c.value(box_parameters(t, uniform(t, rs)), sr);
  c.note(fmt::format("w' = {}", pretty(w2)));
  c.same("pull delta", app(delta, app(pull_rs.term, w2)),
         app(box_map(pull_s.term), app(pull_r.term, app(f_delta, w2))));
}

// Patterns covering one layer of `t`, with the matching terms.
std::vector<std::pair<Pattern, Term>> cover(const Type& t) {
  switch (t->kind) {
    case TypeKind::kUnit:
      return {{p_con(ConKind::kUnit, {}), t_unit()}};
    case TypeKind::kTensor:
      return {{p_con(ConKind::kPair, {p_var("x1"), p_var("x2")}),
               t_pair(t_var("x1"), t_var("x2"))}};
    case TypeKind::kSum:
      return {{p_con(ConKind::kInl, {p_var("x1")}), t_inl(t_var("x1"))},
              {p_con(ConKind::kInr, {p_var("x2")}), t_inr(t_var("x2"))}};
    case TypeKind::kMu:
      return cover(unroll_mu(t));
    case TypeKind::kVar:
    case TypeKind::kBase:
      return {{p_int(0), t_int(0)}, {p_var("x1"), t_var("x1")}};
    default:
      return {{p_var("x1"), t_var("x1")}};
  }
}

Term fun_template(Rng& rng, const Type& t) {
  switch (rng.below(3)) {
    case 0:
      return t_lam("w", t_pair(t_var("w"),
                               t_int(static_cast<int64_t>(rng.below(10)))));
    case 1:
      return t_lam("w", t_inl(t_var("w")));
    default:
      return derive_copyshape(t).term;
  }
}

Type list_of(const Type& elem) {
  return ty_mu("X", ty_sum(ty_unit(), ty_tensor(elem, ty_recvar("X"))));
}

void case_equational(Case& c, int index) {
  SemiringId sr = c.semiring();
  switch (index % 7) {
    case 0: {  // η
      Type t = c.type(2);
      Term f = derive_copyshape(t).term;
      c.note(fmt::format("eta, t = copyShape @{}", pretty(t)));
      Term lhs = t_lam("x", app(f, t_var("x")));
      for (int i = 0; i < 8; ++i) {
        Term a = c.value(t, sr);
        c.same(fmt::format("sample {}", pretty(a)), app(lhs, a), app(f, a));
      }
      return;
    }
    case 1: {  // η_case
      Type t = c.type(2);
      Term v = app(t_lam("i", t_var("i")), c.value(t, sr));
      Term body = app(fun_template(c.rng, t), t_var("z"));
      c.note(fmt::format("eta_case, t1 = {}, t2 = {}", pretty(v),
                         pretty(body)));
      std::vector<Branch> bs;
      for (const auto& [p, pt] : cover(t)) {
        bs.push_back({p, subst1(body, "z", pt)});
      }
      c.same("eta_case", t_case(v, std::move(bs)), subst1(body, "z", v));
      return;
    }
    case 2: {  // CaseAssoc
      Type a = c.type(2);
      Type b = c.type(2);
      Term t = c.rng.coin() ? t_inl(c.value(a, sr)) : t_inr(c.value(b, sr));
      int64_t k1 = static_cast<int64_t>(c.rng.below(10));
      int64_t k2 = static_cast<int64_t>(c.rng.below(10));
      std::vector<Branch> inner{
          {p_con(ConKind::kInl, {p_var("x")}),
           t_inl(t_pair(t_var("x"), t_int(k1)))},
          {p_con(ConKind::kInr, {p_var("y")}),
           t_inr(t_pair(t_var("y"), t_int(k2)))}};
      std::vector<Branch> outer{
          {p_con(ConKind::kInl,
                 {p_con(ConKind::kPair, {p_var("u"), p_var("n")})}),
           t_pair(t_var("n"), t_inl(t_var("u")))},
          {p_con(ConKind::kInr,
                 {p_con(ConKind::kPair, {p_var("v"), p_var("m")})}),
           t_pair(t_var("m"), t_inr(t_var("v")))}};
      c.note(fmt::format("CaseAssoc, t = {}", pretty(t)));
      std::vector<Branch> nested;
      for (const auto& br : inner) {
        nested.push_back({br.pat, t_case(br.body, outer)});
      }
      c.same("CaseAssoc", t_case(t_case(t, inner), outer),
             t_case(t, std::move(nested)));
      return;
    }
    case 3: {  // [CaseAssoc]
      Term t = t_int(static_cast<int64_t>(c.rng.below(3)));
      std::vector<Branch> inner{
          {p_int(0), t_inl(t_unit())},
          {p_var("x"), t_inr(t_var("x"))}};
      std::vector<Branch> outer{
          {p_box(p_con(ConKind::kInl, {p_var("u")})), t_inl(t_var("u"))},
          {p_box(p_con(ConKind::kInr, {p_var("v")})),
           t_inr(t_promote(t_var("v")))}};
      c.note(fmt::format("[CaseAssoc], t = {}", pretty(t)));
      std::vector<Branch> nested;
      for (const auto& br : inner) {
        nested.push_back({p_box(br.pat), t_case(t_promote(br.body), outer)});
      }
      c.same("[CaseAssoc]", t_case(t_promote(t_case(t, inner)), outer),
             t_case(t_promote(t), std::move(nested)));
      return;
    }
    case 4: {  // CaseDistrib
      Type a = c.type(2);
      Type b = c.type(2);
      Term t = c.rng.coin() ? t_inl(c.value(a, sr)) : t_inr(c.value(b, sr));
      Term f = derive_copyshape(ty_sum(b, a)).term;
      c.note(fmt::format("CaseDistrib, t = {}, f = copyShape @{}", pretty(t),
                         pretty(ty_sum(b, a))));
      std::vector<Branch> bs{
          {p_con(ConKind::kInl, {p_var("x")}), t_inr(t_var("x"))},
          {p_con(ConKind::kInr, {p_var("y")}), t_inl(t_var("y"))}};
      std::vector<Branch> distributed;
      for (const auto& br : bs) {
        distributed.push_back({br.pat, app(f, br.body)});
      }
      c.same("CaseDistrib", app(f, t_case(t, bs)),
             t_case(t, std::move(distributed)));
      return;
    }
    case 5: {  // LetRecDistrib
      TypeGenConfig cfg;
      cfg.max_depth = std::max(1, c.max_depth - 1);
      cfg.allow_mu = false;
      Type t = list_of(gen_type(cfg, c.rng));
      auto d = derive_copyshape(t);  // λz. letrec f = t1 in f z
      Term lr = subst1(d.term->t1, d.term->name, c.value(t, sr));
      Term g = fun_template(c.rng, d.type->b);
      c.note(fmt::format("LetRecDistrib, T = {}, f = {}", pretty(t),
                         pretty(g)));
      c.same("LetRecDistrib", app(g, lr),
             t_letrec(lr->name, lr->t1, app(g, lr->t2)));
      return;
    }
    default: {  // CaseGen
      Type t = c.type(2);
      Term v = c.value(t, sr);
      std::vector<Branch> bs;
      for (const auto& [p, pt] : cover(t)) {
        bs.push_back({p_box(p), t_promote(pt)});
      }
      c.note(fmt::format("CaseGen, t = [{}]", pretty(v)));
      c.same("CaseGen", t_case(t_promote(v), std::move(bs)), t_promote(v));
      return;
    }
  }
}

void case_soundness(Case& c) {
  for (int attempt = 0; attempt < 32; ++attempt) {
    SemiringId sr = c.semiring();
    DeriveRequest req;
    req.semiring = sr;
    switch (c.rng.below(5)) {
      case 0:
        req.kind = DeriveKind::kPush;
        req.type = c.type(2, true);
        req.grade = c.grade(sr, push_requires_one(req.type));
        break;
      case 1: {
        req.kind = DeriveKind::kPull;
        req.type = c.type(2);
        std::optional<Grade> g;
        bool ok = true;
        for (const auto& p : type_parameters(req.type)) {
          Grade r = c.grade(sr, false);
          req.grades.emplace(p, r);
          if (g) {
            auto m = sr_meet(*g, r);
            if (!m) ok = false;
            g = m ? *m : r;
          } else {
            g = r;
          }
        }
        if (!ok) continue;
        if (!g) req.grade = c.grade(sr, false);
        break;
      }
      case 2: {
        req.kind = DeriveKind::kDrop;
        TypeGenConfig cfg;
        cfg.max_depth = c.max_depth;
        cfg.tyvars = 0;
        req.type = gen_type(cfg, c.rng);
        break;
      }
      case 3:
        req.kind = DeriveKind::kCopyShape;
        req.type = c.type(2);
        break;
      default: {
        req.kind = DeriveKind::kFmap;
        req.type = c.type(1);
        req.var = "a";
        req.result_var = "b";
        auto count = fmap_occurrences(req.type, "a", sr);
        if (!count) continue;
        std::vector<Grade> gs;
        for (const auto& g : sample_grades(sr, 3)) {
          if (sr_leq(*count, g)) gs.push_back(g);
        }
        if (gs.empty()) continue;
        req.grade = c.rng.pick(gs);
        break;
      }
    }
    c.note(fmt::format("{} @{} ({}{})", derive_name(req.kind),
                       pretty(req.type), semiring_name(sr),
                       req.grade ? ", " + show_grade(*req.grade) : ""));
    DerivedCombinator d = derive(req);
    CheckEnv env;
    env.semiring = sr;
    check_judgement({}, d.term, d.type, env);
    return;
  }
  c.note("no derivable instance within 32 draws");
}

std::optional<LawFailure> run_case(Suite s, const LawConfig& cfg, int index) {
  Case c(s, cfg.seed, index, cfg.max_depth);
  std::string error;
  try {
    switch (s) {
      case Suite::kInverses:
        case_inverses(c);
        break;
      case Suite::kNaturality:
        case_naturality(c);
        break;
      case Suite::kComonad:
        case_comonad(c);
        break;
      case Suite::kEquational:
        case_equational(c, index);
        break;
      case Suite::kSoundness:
        case_soundness(c);
        break;
    }
  } catch (const Error& e) {
    error = format_diagnostic(e.diagnostic());
  } catch (const std::exception& e) {
    error = e.what();
  }
  if (!c.mismatch && error.empty()) return std::nullopt;
  LawFailure f;
  f.index = index;
  for (size_t i = 0; i < c.notes.size(); ++i) {
    if (i > 0) f.instance += "; ";
    f.instance += c.notes[i];
  }
  if (c.mismatch) {
    f.lhs = c.mismatch->lhs;
    f.rhs = c.mismatch->rhs;
  } else {
    f.lhs = "error: " + error;
  }
  f.repro = fmt::format("grlin laws --suite {} --seed {} --case {}",
                        suite_name(s), cfg.seed, index);
  return f;
}

}  // namespace

LawReport run_suite(Suite s, const LawConfig& cfg) {
  LawReport report;
  report.suite = s;
  std::vector<int> indices;
  if (cfg.only_case) {
    indices.push_back(*cfg.only_case);
  } else {
    int n = cfg.cases.value_or(default_cases(s));
    for (int i = 0; i < n; ++i) indices.push_back(i);
  }
  report.cases = static_cast<int>(indices.size());
  std::vector<std::optional<LawFailure>> results(indices.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < indices.size(); i = next++) {
      results[i] = run_case(s, cfg, indices[i]);
    }
  };
  unsigned n = cfg.threads != 0 ? cfg.threads
                                : std::max(1u, std::thread::hardware_concurrency());
  n = std::min<unsigned>(n, static_cast<unsigned>(indices.size()));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& r : results) {
    if (r) report.failures.push_back(std::move(*r));
  }
  return report;
}

std::string format_reports(const std::vector<LawReport>& reports) {
  std::string out =
      "note: comonad cases at subjects whose push needs 1 <= r also require "
      "1 <= r, 1 <= s and 1 <= r*s\n";
  out += fmt::format("{:<12} {:>6} {:>9}\n", "suite", "cases", "failures");
  for (const auto& r : reports) {
    out += fmt::format("{:<12} {:>6} {:>9}\n", suite_name(r.suite), r.cases,
                       r.failures.size());
  }
  for (const auto& r : reports) {
    for (const auto& f : r.failures) {
      out += fmt::format("FAIL {} #{}: {}\n", suite_name(r.suite), f.index,
                         f.instance);
      out += fmt::format("  lhs: {}\n", f.lhs);
      if (!f.rhs.empty()) out += fmt::format("  rhs: {}\n", f.rhs);
      out += fmt::format("  repro: {}\n", f.repro);
    }
  }
  return out;
}

}  // namespace grlin
