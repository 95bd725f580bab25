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

#include <gtest/gtest.h>

#include <cstdlib>
#include <map>
#include <string>
#include <vector>

#include "grlin/parser.h"
#include "grlin/pretty.h"
#include "grlin/typecheck.h"
#include "test_util.h"

namespace grlin {
namespace {

Term E(const char* text) { return parse_term(text); }
Pattern P(const char* text) { return parse_pattern(text); }

void expect_normal_form(const char* term, const char* want) {
  Term got = normalize(E(term));
  EXPECT_TRUE(alpha_eq(got, E(want))) << term << " gave " << pretty(got);
}

TEST(Match, Examples) {
  auto s = match_pattern(E("(1, [2])"), P("(x, [y])"));
  ASSERT_TRUE(s.has_value());
  EXPECT_TRUE(alpha_eq(s->at("x"), t_int(1)));
  EXPECT_TRUE(alpha_eq(s->at("y"), t_int(2)));
  EXPECT_FALSE(match_pattern(E("inl unit"), P("inr x")).has_value());
  EXPECT_FALSE(match_pattern(E("3"), P("4")).has_value());
  auto w = match_pattern(E("(unit, 5)"), P("(_, 5)"));
  ASSERT_TRUE(w.has_value());
  EXPECT_TRUE(w->empty());
}

TEST(Normalize, Beta) {
  expect_normal_form("(\\x -> x) unit", "unit");
  expect_normal_form("(\\f -> \\x -> f (f x)) (\\y -> inl y) 3",
                     "inl (inl 3)");
}

TEST(Normalize, CopyThroughABox) {
  expect_normal_form("(\\y -> case y of [x] -> (x, x)) [5]", "(5, 5)");
}

TEST(Normalize, NormalFormsAreFixedPoints) {
  for (const char* v : {"unit", "(1, inl [2])", "\\x -> x", "[[unit]]"}) {
    expect_normal_form(v, v);
  }
}

TEST(Normalize, AnnotationsAreTransparent) {
  expect_normal_form("((\\x -> x) : Int -o Int) 4", "4");
}

TEST(Normalize, RecursionUnrolls) {
  expect_normal_form(
      "letrec len = \\xs -> case xs of inl u -> inl u; "
      "inr p -> (case p of (h, t) -> inr (h, len t)) "
      "in len (inr (1, inr (2, inl unit)))",
      "inr (1, inr (2, inl unit))");
}

TEST(Normalize, DivergenceRunsOutOfFuel) {
  try {
    normalize(E("letrec f = \\x -> f x in f unit"), 100);
    ADD_FAILURE();
  } catch (const FuelExhausted& e) {
    EXPECT_EQ(e.steps(), 100u);
  }
}

TEST(Normalize, IllFormedTermsAreStuck) {
  EXPECT_THROW(normalize(E("unit unit")), StuckTerm);
  EXPECT_THROW(normalize(E("case inl unit of inr x -> x")), StuckTerm);
}

TEST(Normalize, DropAtIntIsPrimitive) {
  expect_normal_form("drop @Int 42", "unit");
}

// β_case fires the first branch whose pattern matches.
TEST(Case, FirstMatchingBranchWins) {
  expect_normal_form("case inl 1 of inr x -> 0; inl y -> y", "1");
  expect_normal_form("case 3 of n -> 0; 3 -> 1", "0");
  expect_normal_form("case 3 of 4 -> 0; 3 -> 1; n -> 2", "1");
  expect_normal_form("case (inr 2, 7) of (inl a, b) -> b; (inr a, b) -> a", "2");
}

TEST(Case, ScrutineesAreForcedOnlyAsFarAsNeeded) {
  const char* loop = "(letrec f = \\x -> f x in f unit)";
  std::string wild = std::string("case ") + loop + " of _ -> unit";
  EXPECT_TRUE(alpha_eq(normalize(E(wild.c_str()), 1000), t_unit()));
  std::string pair =
      std::string("case (1, ") + loop + ") of (0, _) -> 0; (n, _) -> n";
  EXPECT_TRUE(alpha_eq(normalize(E(pair.c_str()), 1000), t_int(1)));
}

TEST(Case, OpenScrutineesBlock) {
  Evaluator ev;
  Term t = ev.whnf(E("case z of inl x -> x; inr y -> y"));
  EXPECT_EQ(t->kind, TermKind::kCase);
}

TEST(Administrative, SimplifiesUnderBinders) {
  Term t = administrative_normalize(
      E("\\p -> case (p, (unit : Unit)) of (a, b) -> (\\k -> k) a"));
  EXPECT_TRUE(alpha_eq(t, E("\\p -> p"))) << pretty(t);
}

TEST(Administrative, KeepsRecursionFolded) {
  Term src = E("\\x -> letrec f = \\y -> f y in f x");
  EXPECT_TRUE(alpha_eq(administrative_normalize(src), src));
}

TEST(CountUses, Examples) {
  auto site_total = [](const UseCounts& u) {
    uint64_t n = 0;
    for (const auto& [site, inst] : u.by_site) {
      for (const auto& [i, c] : inst) n += c;
    }
    return n;
  };
  EXPECT_EQ(site_total(count_uses(E("(\\y -> case y of [x] -> (x, x)) [5]"))), 2u);
  EXPECT_EQ(site_total(count_uses(E("(\\y -> case y of [x] -> unit) [5]"))), 0u);
  auto u = count_uses(
      E("(\\bf -> case bf of [f] -> letrec m = \\xs -> case xs of "
        "inl u -> inl u; inr p -> (case p of (h, t) -> inr (f h, m t)) in "
        "m (inr (1, inr (2, inr (3, inl unit))))) [\\k -> k]"));
  uint64_t f_uses = 0;
  for (const auto& [site, inst] : u.by_site) {
    if (site->name == "f") {
      for (const auto& [i, c] : inst) f_uses += c;
    }
  }
  EXPECT_EQ(f_uses, 3u);
}

TEST(Run, NeedsMain) {
  EXPECT_THROW(run_main({{"x", E("unit")}}), NoMain);
  auto r = run_main({{"one", E("1")}, {"main", E("(one, one)")}});
  EXPECT_TRUE(alpha_eq(r.value, E("(1, 1)")));
  EXPECT_GT(r.steps, 0u);
}

TEST(Run, FuelComesFromTheEnvironment) {
  ::setenv("GRLIN_FUEL", "123", 1);
  EXPECT_EQ(default_fuel(), 123u);
  ::setenv("GRLIN_FUEL", "nonsense", 1);
  EXPECT_EQ(default_fuel(), kDefaultFuel);
  ::unsetenv("GRLIN_FUEL");
  EXPECT_EQ(default_fuel(), kDefaultFuel);
}

CheckedProgram load(const std::string& path) {
  CheckedProgram c =
      check_program_full(parse_program(testing::read_text(path), path));
  for (const auto& d : c.diagnostics) ADD_FAILURE() << format_diagnostic(d);
  return c;
}

std::vector<std::string> runnable_corpus() {
  std::vector<std::string> out = testing::corpus_files("usage");
  out.push_back(testing::corpus_path("motivating.grm"));
  out.push_back(testing::corpus_path("copyshape.grm"));
  return out;
}

TEST(Corpus, ExpectedOutputs) {
  auto value = [](const char* rel) {
    CheckedProgram c = load(testing::corpus_path(rel));
    return pretty(run_main(c.bodies).value);
  };
  EXPECT_EQ(value("motivating.grm"), "1");
  EXPECT_EQ(value("copyshape.grm"), "((unit, unit), (1, 2))");
  EXPECT_EQ(value("usage/copy.grm"), "(5, 5)");
  EXPECT_EQ(value("usage/nested.grm"), "(7, (7, (7, (7, (7, 7)))))");
}

// Every graded binder of the nat-exact corpus is consumed, at runtime,
// exactly as often as the checker accounted for.
TEST(Corpus, UsageCountsMatchCheckedGrades) {
  int compared = 0;
  for (const auto& f : testing::corpus_files("usage")) {
    CheckedProgram c = load(f);
    ASSERT_EQ(c.source.semiring, SemiringId::kNatExact) << f;
    auto r = run_main(c.bodies, default_fuel(), true);
    for (const auto& b : c.binders) {
      if (b.kind != AssumptionKind::kGraded || b.site == nullptr) continue;
      uint64_t want = b.used.graded ? b.used.graded->nat_value() : 0;
      auto it = r.uses.by_site.find(b.site);
      if (want == 0) {
        if (it == r.uses.by_site.end()) continue;
        for (const auto& [i, n] : it->second) {
          EXPECT_EQ(n, 0u) << f << " " << b.name;
        }
        continue;
      }
      ASSERT_NE(it, r.uses.by_site.end()) << f << " " << b.name;
      for (const auto& [i, n] : it->second) {
        EXPECT_EQ(n, want) << f << " " << b.name << " instance " << i;
        ++compared;
      }
    }
  }
  EXPECT_GT(compared, 5);
}

// Normal forms and weak head normal forms keep the type of main.
TEST(Corpus, SubjectReduction) {
  for (const auto& f : runnable_corpus()) {
    CheckedProgram c = load(f);
    std::map<std::string, Type> globals;
    Type main_type;
    for (const auto& d : c.source.decls) {
      globals.emplace(d.name, d.type);
      if (d.name == "main") main_type = d.type;
    }
    ASSERT_TRUE(main_type) << f;
    Evaluator ev;
    ev.set_globals(c.bodies);
    std::vector<Term> observed = {ev.whnf(c.bodies.at("main"))};
    observed.push_back(ev.normalize(c.bodies.at("main")));
    for (const auto& t : observed) {
      CheckEnv env;
      env.semiring = c.source.semiring;
      env.globals = globals;
      EXPECT_NO_THROW(check_judgement({}, t, main_type, env))
          << f << ": " << pretty(t);
    }
  }
}

}  // namespace
}  // namespace grlin
