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

#include "grlin/evaluator.h"

#include <cstdlib>
#include <string>

#include <fmt/format.h>

#include "grlin/pretty.h"

namespace grlin {

uint64_t default_fuel() {
  const char* env = std::getenv("GRLIN_FUEL");
  if (env == nullptr) return kDefaultFuel;
  char* end = nullptr;
  unsigned long long v = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0' || v == 0) return kDefaultFuel;
  return v;
}

FuelExhausted::FuelExhausted(uint64_t steps)
    : std::runtime_error(fmt::format("fuel exhausted after {} steps", steps)),
      steps_(steps) {}

StuckTerm::StuckTerm(const Term& t)
    : std::runtime_error(fmt::format("stuck term: {}", pretty(t))) {}

namespace {

enum class Status { kMatch, kNoMatch, kBlocked };

bool is_value_head(const Term& t) {
  switch (t->kind) {
    case TermKind::kLam:
    case TermKind::kPromote:
    case TermKind::kCon:
    case TermKind::kInt:
    case TermKind::kDerive:
      return true;
    default:
      return false;
  }
}

bool is_drop_int(const Term& t) {
  return t->kind == TermKind::kDerive && t->derive == DeriveKind::kDrop &&
         t->type->kind == TypeKind::kBase && t->type->base == BaseKind::kInt;
}

// Decides a pattern against a term using only its syntactic shape.
// Anything that is not a constructor form blocks.
Status status(const Term& v, const Pattern& p) {
  switch (p->kind) {
    case PatKind::kVar:
    case PatKind::kWild:
      return Status::kMatch;
    case PatKind::kBox:
      if (v->kind == TermKind::kPromote) return status(v->t1, p->subs[0]);
      return is_value_head(v) ? Status::kNoMatch : Status::kBlocked;
    case PatKind::kInt:
      if (v->kind == TermKind::kInt) {
        return v->value == p->value ? Status::kMatch : Status::kNoMatch;
      }
      return is_value_head(v) ? Status::kNoMatch : Status::kBlocked;
    case PatKind::kCon: {
      if (v->kind != TermKind::kCon) {
        return is_value_head(v) ? Status::kNoMatch : Status::kBlocked;
      }
      if (v->con != p->con) return Status::kNoMatch;
      Status out = Status::kMatch;
      const Term args[2] = {v->t1, v->t2};
      for (size_t i = 0; i < p->subs.size(); ++i) {
        Status s = status(args[i], p->subs[i]);
        if (s == Status::kNoMatch) return s;
        if (s == Status::kBlocked) out = s;
      }
      return out;
    }
  }
  return Status::kBlocked;
}

bool collect_plain(const Term& v, const Pattern& p, Substitution& out) {
  switch (p->kind) {
    case PatKind::kVar:
      out[p->name] = v;
      return true;
    case PatKind::kWild:
      return true;
    case PatKind::kBox:
      return v->kind == TermKind::kPromote &&
             collect_plain(v->t1, p->subs[0], out);
    case PatKind::kInt:
      return v->kind == TermKind::kInt && v->value == p->value;
    case PatKind::kCon: {
      if (v->kind != TermKind::kCon || v->con != p->con) return false;
      const Term args[2] = {v->t1, v->t2};
      for (size_t i = 0; i < p->subs.size(); ++i) {
        if (!collect_plain(args[i], p->subs[i], out)) return false;
      }
      return true;
    }
  }
  return false;
}

Term rebuild_con(const Term& v, Term a, Term b) {
  if (a == v->t1 && b == v->t2) return v;
  return t_con(v->con, std::move(a), std::move(b), v->pos);
}

}  // namespace

std::optional<Substitution> match_pattern(const Term& v, const Pattern& p) {
  if (status(v, p) != Status::kMatch) return std::nullopt;
  Substitution out;
  collect_plain(v, p, out);
  return out;
}

Evaluator::Evaluator(uint64_t fuel) : fuel_(fuel) {}

void Evaluator::set_globals(std::map<std::string, Term> globals) {
  globals_ = std::move(globals);
}

void Evaluator::tick() {
  if (steps_ >= fuel_) throw FuelExhausted(steps_);
  ++steps_;
}

Term Evaluator::bind(const Term& v, const PatNode* site) {
  if (!counting_) return v;
  auto [it, inserted] = site_ids_.emplace(site, static_cast<int>(sites_.size()));
  if (inserted) sites_.push_back(site);
  return t_use(v, it->second, instance_);
}

bool Evaluator::collect(const Term& v, const Pattern& p, Substitution& out) {
  if (p->kind == PatKind::kVar) {
    out[p->name] = bind(v, p.get());
    return true;
  }
  if (p->kind == PatKind::kBox) {
    return v->kind == TermKind::kPromote && collect(v->t1, p->subs[0], out);
  }
  if (p->kind == PatKind::kCon) {
    if (v->kind != TermKind::kCon || v->con != p->con) return false;
    const Term args[2] = {v->t1, v->t2};
    for (size_t i = 0; i < p->subs.size(); ++i) {
      if (!collect(args[i], p->subs[i], out)) return false;
    }
    return true;
  }
  return collect_plain(v, p, out);
}

Term Evaluator::force(Term v, const Pattern& p) {
  switch (p->kind) {
    case PatKind::kVar:
    case PatKind::kWild:
      return v;
    case PatKind::kInt:
      return whnf(std::move(v));
    case PatKind::kBox: {
      v = whnf(std::move(v));
      if (v->kind != TermKind::kPromote) return v;
      Term payload = force(v->t1, p->subs[0]);
      return payload == v->t1 ? v : t_promote(std::move(payload), v->pos);
    }
    case PatKind::kCon: {
      v = whnf(std::move(v));
      if (v->kind != TermKind::kCon || v->con != p->con) return v;
      Term args[2] = {v->t1, v->t2};
      for (size_t i = 0; i < p->subs.size(); ++i) {
        args[i] = force(args[i], p->subs[i]);
        if (status(args[i], p->subs[i]) == Status::kNoMatch) break;
      }
      return rebuild_con(v, args[0], args[1]);
    }
  }
  return v;
}

Term Evaluator::whnf(Term t) {
  for (;;) {
    switch (t->kind) {
      case TermKind::kVar: {
        auto it = globals_.find(t->name);
        if (it == globals_.end()) return t;
        tick();
        t = it->second;
        continue;
      }
      case TermKind::kAnn:
        t = t->t1;
        continue;
      case TermKind::kUse:
        if (counting_ && t->site >= 0 &&
            static_cast<size_t>(t->site) < sites_.size()) {
          ++uses_.by_site[sites_[t->site]][t->instance];
        }
        t = t->t1;
        continue;
      case TermKind::kApp: {
        Term f = whnf(t->t1);
        if (f->kind == TermKind::kLam) {
          tick();
          t = subst1(f->t1, f->name, t->t2);
          continue;
        }
        if (is_drop_int(f)) {
          Term a = whnf(t->t2);
          if (a->kind == TermKind::kInt) {
            tick();
            return t_unit(t->pos);
          }
          if (is_value_head(a)) throw StuckTerm(t_app(f, a));
          return t_app(f, a, t->pos);
        }
        if (is_value_head(f)) throw StuckTerm(t_app(f, t->t2));
        return t_app(f, t->t2, t->pos);
      }
      case TermKind::kCase: {
        Term s = t->t1;
        bool fired = false;
        for (const auto& b : t->branches) {
          s = force(s, b.pat);
          Status st = status(s, b.pat);
          if (st == Status::kBlocked) {
            return t_case(s, t->branches, t->pos);
          }
          if (st == Status::kNoMatch) continue;
          tick();
          instance_ = ++next_instance_;
          Substitution sub;
          collect(s, b.pat, sub);
          t = subst(b.body, sub);
          fired = true;
          break;
        }
        if (!fired) throw StuckTerm(t_case(s, t->branches, t->pos));
        continue;
      }
      case TermKind::kLetRec:
        tick();
        t = subst1(t->t2, t->name, t_letrec(t->name, t->t1, t->t1, t->pos));
        continue;
      default:
        return t;
    }
  }
}

Term Evaluator::normalize(Term t) {
  t = whnf(std::move(t));
  switch (t->kind) {
    case TermKind::kPromote:
      return t_promote(normalize(t->t1), t->pos);
    case TermKind::kCon:
      return t_con(t->con, t->t1 ? normalize(t->t1) : nullptr,
                   t->t2 ? normalize(t->t2) : nullptr, t->pos);
    default:
      return t;
  }
}

Term normalize(const Term& t, uint64_t fuel) {
  Evaluator ev(fuel);
  return ev.normalize(t);
}

UseCounts count_uses(const Term& t, uint64_t fuel,
                     const std::map<std::string, Term>& globals) {
  Evaluator ev(fuel);
  ev.set_globals(globals);
  ev.enable_counting(true);
  ev.normalize(t);
  return ev.uses();
}

namespace {

Term admin(const Term& t, uint64_t& fuel) {
  auto step = [&] {
    if (fuel == 0) throw FuelExhausted(0);
    --fuel;
  };
  switch (t->kind) {
    case TermKind::kVar:
    case TermKind::kInt:
    case TermKind::kDerive:
      return t;
    case TermKind::kAnn:
    case TermKind::kUse:
      return admin(t->t1, fuel);
    case TermKind::kLam:
      return t_lam(t->name, admin(t->t1, fuel), t->pos);
    case TermKind::kPromote:
      return t_promote(admin(t->t1, fuel), t->pos);
    case TermKind::kCon:
      return t_con(t->con, t->t1 ? admin(t->t1, fuel) : nullptr,
                   t->t2 ? admin(t->t2, fuel) : nullptr, t->pos);
    case TermKind::kLetRec:
      return t_letrec(t->name, admin(t->t1, fuel), admin(t->t2, fuel),
                      t->pos);
    case TermKind::kApp: {
      Term f = admin(t->t1, fuel);
      Term a = admin(t->t2, fuel);
      if (f->kind == TermKind::kLam) {
        step();
        return admin(subst1(f->t1, f->name, a), fuel);
      }
      return t_app(f, a, t->pos);
    }
    case TermKind::kCase: {
      Term s = admin(t->t1, fuel);
      for (const auto& b : t->branches) {
        Status st = status(s, b.pat);
        if (st == Status::kBlocked) break;
        if (st == Status::kNoMatch) continue;
        step();
        Substitution sub;
        collect_plain(s, b.pat, sub);
        return admin(subst(b.body, sub), fuel);
      }
      std::vector<Branch> bs;
      for (const auto& b : t->branches) {
        bs.push_back({b.pat, admin(b.body, fuel)});
      }
      return t_case(s, std::move(bs), t->pos);
    }
  }
  return t;
}

}  // namespace

Term administrative_normalize(const Term& t, uint64_t fuel) {
  return admin(t, fuel);
}

RunResult run_main(const std::map<std::string, Term>& bodies, uint64_t fuel,
                   bool counting) {
  if (bodies.find("main") == bodies.end()) throw NoMain();
  Evaluator ev(fuel);
  ev.set_globals(bodies);
  ev.enable_counting(counting);
  RunResult out;
  out.value = ev.normalize(t_var("main"));
  out.steps = ev.steps();
  out.uses = ev.uses();
  return out;
}

}  // namespace grlin
