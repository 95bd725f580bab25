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

#include <gtest/gtest.h>

#include <fmt/format.h>

#include <set>
#include <string>
#include <vector>

#include "grlin/parser.h"
#include "grlin/pretty.h"
#include "test_util.h"

namespace grlin {
namespace {

constexpr SemiringId kNE = SemiringId::kNatExact;
constexpr SemiringId kNL = SemiringId::kNatLe;
constexpr SemiringId kIV = SemiringId::kInterval;

// "OK" or the code of the first diagnostic.
std::string verdict_of_text(const std::string& text) {
  try {
    auto diags = check_program(parse_program(text, "t.grm"));
    return diags.empty() ? "OK" : std::string(code_name(diags.front().code));
  } catch (const Error& e) {
    return std::string(code_name(e.code()));
  }
}

std::string verdict_of_term(const TypingCtx& ctx, const std::string& term,
                            const std::string& type, SemiringId sr) {
  CheckEnv env;
  env.semiring = sr;
  try {
    check_judgement(ctx, parse_term(term, sr), parse_type(type, sr), env);
    return "OK";
  } catch (const Error& e) {
    return std::string(code_name(e.code()));
  }
}

std::string expected_verdict(const std::string& text) {
  const std::string tag = "-- expect: ";
  auto at = text.find(tag);
  if (at == std::string::npos) return "";
  auto end = text.find('\n', at);
  return text.substr(at + tag.size(), end - at - tag.size());
}

TEST(CheckTerm, CopyAtTwoIsAccepted) {
  CheckEnv env;
  env.semiring = kNE;
  check_judgement({}, parse_term("\\y -> case y of [x] -> (x, x)", kNE),
                  parse_type("(a [2]) -o (a * a)", kNE), env);
  bool found = false;
  for (const auto& b : env.binders) {
    if (b.name != "x") continue;
    found = true;
    EXPECT_EQ(b.kind, AssumptionKind::kGraded);
    ASSERT_TRUE(b.used.graded.has_value());
    EXPECT_EQ(*b.used.graded, Grade::nat(kNE, 2));
  }
  EXPECT_TRUE(found);
}

TEST(CheckTerm, CopyAtOneExceedsTheGrade) {
  EXPECT_EQ(verdict_of_term({}, "\\y -> case y of [x] -> (x, x)",
                            "(a [1]) -o (a * a)", kNE),
            "GRADE_EXCEEDED");
}

TEST(CheckTerm, IdentityUsesItsArgumentOnce) {
  CheckEnv env;
  auto u = check_term({}, parse_term("\\x -> x"), parse_type("a -o a"), env);
  EXPECT_TRUE(u.empty());
  ASSERT_EQ(env.binders.size(), 1u);
  EXPECT_EQ(env.binders[0].used.linear, 1);
}

TEST(CheckTerm, OpenTermsReportUsages) {
  TypingCtx ctx;
  ctx.add("x", Assumption::linear(ty_int()));
  ctx.add("g", Assumption::graded(ty_int(), Grade::nat(kNL, 5)));
  CheckEnv env;
  env.semiring = kNL;
  auto u = check_term(ctx, parse_term("(x, (g, g))", kNL),
                      parse_type("Int * (Int * Int)", kNL), env);
  EXPECT_EQ(u["x"].linear, 1);
  ASSERT_TRUE(u["g"].graded.has_value());
  EXPECT_EQ(*u["g"].graded, Grade::nat(kNL, 2));
}

TEST(SynthTerm, Variables) {
  TypingCtx ctx;
  ctx.add("x", Assumption::linear(ty_int()));
  CheckEnv env;
  auto [ty, u] = synth_term(ctx, t_var("x"), env);
  EXPECT_TRUE(type_equiv(ty, ty_int()));
  EXPECT_EQ(u["x"].linear, 1);
}

TEST(SynthTerm, PromotionAndInjectionsNeedAnnotations) {
  for (const char* text : {"[3]", "inl unit", "\\x -> x"}) {
    CheckEnv env;
    try {
      synth_term({}, parse_term(text), env);
      ADD_FAILURE() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Code::kNeedsAnnotation) << text;
    }
  }
  CheckEnv env;
  auto [ty, u] = synth_term({}, parse_term("(inl unit : Unit + Int)"), env);
  EXPECT_EQ(pretty(ty), "Unit + Int");
}

TEST(CheckPattern, SumUnderIntervalBox) {
  auto delta = check_pattern(Grade::interval(0, 1), parse_pattern("inl x"),
                             parse_type("a + b", kIV));
  ASSERT_EQ(delta.entries.size(), 1u);
  const Assumption* a = delta.find("x");
  ASSERT_NE(a, nullptr);
  EXPECT_EQ(a->kind, AssumptionKind::kGraded);
  EXPECT_EQ(*a->grade, Grade::interval(0, 1));
  EXPECT_EQ(pretty(a->type), "a");
}

TEST(CheckPattern, SumUnderZeroIntervalNeedsUsage) {
  try {
    check_pattern(Grade::interval(0, 0), parse_pattern("inl x"),
                  parse_type("a + b", kIV));
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Code::kMatchUsage);
  }
}

// Brute force: [Pcon] under lo..hi holds iff lo <= 1 <= hi.
TEST(CheckPattern, SumMatchAgreesWithTheIntervalOrder) {
  for (uint64_t lo = 0; lo <= 4; ++lo) {
    for (uint64_t hi = lo; hi <= 4; ++hi) {
      bool ok = true;
      try {
        check_pattern(Grade::interval(lo, hi), parse_pattern("inr y"),
                      parse_type("a + b", kIV));
      } catch (const Error& e) {
        EXPECT_EQ(e.code(), Code::kMatchUsage);
        ok = false;
      }
      EXPECT_EQ(ok, lo <= 1 && 1 <= hi) << lo << ".." << hi;
    }
  }
}

TEST(CheckPattern, WildcardNeedsZero) {
  try {
    check_pattern(Grade::nat(kNE, 2), parse_pattern("(x, _)"),
                  parse_type("a * b", kNE));
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Code::kWildcardWeaken);
  }
  try {
    check_pattern(std::nullopt, parse_pattern("_"), parse_type("a", kNE));
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Code::kWildcardWeaken);
  }
  auto delta = check_pattern(Grade::nat(kNL, 2), parse_pattern("(x, _)"),
                             parse_type("a * b", kNL));
  EXPECT_EQ(delta.entries.size(), 1u);
}

TEST(CheckPattern, BoxesSetTheEnclosingGrade) {
  auto lin = check_pattern(std::nullopt, parse_pattern("(x, [y])"),
                           parse_type("a * (b [3])", kNE));
  ASSERT_EQ(lin.entries.size(), 2u);
  EXPECT_EQ(lin.find("x")->kind, AssumptionKind::kLinear);
  EXPECT_EQ(lin.find("y")->kind, AssumptionKind::kGraded);
  EXPECT_EQ(*lin.find("y")->grade, Grade::nat(kNE, 3));
}

TEST(CheckPattern, MuScrutineesAreUnrolled) {
  auto delta = check_pattern(std::nullopt, parse_pattern("inr (h, t)"),
                             parse_type("mu X . Unit + (Int * X)", kNE));
  ASSERT_EQ(delta.entries.size(), 2u);
  EXPECT_EQ(pretty(delta.find("t")->type), "mu X . Unit + (Int * X)");
}

TEST(CheckPattern, ShapeMismatch) {
  try {
    check_pattern(std::nullopt, parse_pattern("(x, y)"),
                  parse_type("a + b", kNE));
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Code::kTypeMismatch);
  }
}

TEST(MergeBranches, NatLeTakesTheMaximum) {
  UsageMap a{{"x", Usage{0, Grade::nat(kNL, 1)}}};
  UsageMap b{{"x", Usage{0, Grade::nat(kNL, 3)}}};
  auto m = merge_branch_usages({a, b}, kNL);
  EXPECT_EQ(*m["x"].graded, Grade::nat(kNL, 3));
}

TEST(MergeBranches, NatExactHasNoJoins) {
  UsageMap a{{"x", Usage{0, Grade::nat(kNE, 1)}}};
  UsageMap b{{"x", Usage{0, Grade::nat(kNE, 2)}}};
  try {
    merge_branch_usages({a, b}, kNE);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Code::kNoUpperBound);
  }
}

TEST(MergeBranches, SingleBranchIsIdentity) {
  UsageMap a{{"x", Usage{0, Grade::nat(kNE, 2)}}, {"y", Usage{1, {}}}};
  EXPECT_EQ(merge_branch_usages({a}, kNE), a);
}

TEST(MergeBranches, LinearVariablesMustAgree) {
  UsageMap a{{"x", Usage{1, {}}}};
  UsageMap b;
  try {
    merge_branch_usages({a, b}, kNE);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Code::kLinearity);
  }
}

// Programs whose two branches use x u1 and u2 times under a box of grade
// r. The declarative rules accept exactly when some g has u1 ⊑ g, u2 ⊑ g
// and g ⊑ r (approximate each branch to a shared context, then the binder).
TEST(MergeBranches, AgreesWithTheDeclarativeOracle) {
  auto tuple = [](int uses) {
    std::string s;
    for (int i = 0; i < 4; ++i) {
      std::string c = i < uses ? "x" : "0";
      s += i < 3 ? "(" + c + ", " : c;
    }
    return s + ")))";
  };
  for (SemiringId sr : kAllSemirings) {
    auto sample = sample_grades(sr, 4);
    auto count = [&](int n) {
      Grade g = Grade::zero(sr);
      for (int i = 0; i < n; ++i) g = sr_add(g, Grade::one(sr));
      return g;
    };
    for (int u1 = 0; u1 <= 3; ++u1) {
      for (int u2 = 0; u2 <= 3; ++u2) {
        for (const Grade& r : sample) {
          bool oracle = false;
          for (const Grade& g : sample) {
            oracle = oracle || (sr_leq(count(u1), g) && sr_leq(count(u2), g) &&
                                sr_leq(g, r));
          }
          std::string text = fmt::format(
              "#semiring {}\n"
              "f : (Unit + Unit) -o (Int [{}]) -o (Int * (Int * (Int * Int)))\n"
              "f = \\c -> \\y -> case y of [x] -> (case c of\n"
              "  inl u -> (case u of unit -> {});\n"
              "  inr u -> (case u of unit -> {}))\n",
              semiring_name(sr), show_grade(r), tuple(u1), tuple(u2));
          std::string v = verdict_of_text(text);
          EXPECT_EQ(v == "OK", oracle) << text << v;
        }
      }
    }
  }
}

TEST(CheckProgram, DuplicateDefinition) {
  EXPECT_EQ(verdict_of_text("u : Unit\nu = unit\nu : Unit\nu = unit\n"),
            "DUPLICATE_DEF");
}

TEST(CheckProgram, FstDiscardsUnderZero) {
  EXPECT_EQ(verdict_of_text("#semiring nat-le\nfst : (a * (b [0])) -o a\n"
                            "fst = \\p -> case p of (x, [ _ ]) -> x\n"),
            "OK");
}

TEST(CheckProgram, MotivatingPipeline) {
  auto text = testing::read_text(testing::corpus_path("motivating.grm"));
  EXPECT_EQ(verdict_of_text(text), "OK");
}

TEST(CheckProgram, DiagnosticsArePositioned) {
  auto diags = check_program(
      parse_program("u : Unit\nu = unit\n\nf : a -o a\nf = \\x -> y\n", "p.grm"));
  ASSERT_EQ(diags.size(), 1u);
  EXPECT_EQ(diags[0].code, Code::kUnknownVar);
  EXPECT_EQ(diags[0].pos.file, "p.grm");
  EXPECT_EQ(diags[0].pos.line, 5);
  EXPECT_EQ(diags[0].pos.col, 11);
}

TEST(CheckProgram, TopLevelNamesAreReusable) {
  EXPECT_EQ(verdict_of_text("one : Int\none = 1\nb : Int * Int\nb = (one, one)\n"),
            "OK");
}

// The curated corpus records the verdict of the declarative rules in a
// header line.
TEST(Corpus, VerdictsMatchTheRecordedOnes) {
  auto files = testing::corpus_files("typing");
  int ok = 0;
  int bad = 0;
  for (const auto& f : files) {
    std::string text = testing::read_text(f);
    std::string want = expected_verdict(text);
    ASSERT_FALSE(want.empty()) << f;
    (want == "OK" ? ok : bad)++;
    EXPECT_EQ(verdict_of_text(text), want) << f;
  }
  EXPECT_GE(ok, 20);
  EXPECT_GE(bad, 20);
}

TEST(Corpus, EveryCheckerCodeIsCovered) {
  std::set<std::string> seen;
  for (const auto& f : testing::corpus_files("typing")) {
    seen.insert(expected_verdict(testing::read_text(f)));
  }
  for (const char* code :
       {"TYPE_MISMATCH", "LINEARITY", "GRADE_EXCEEDED", "PROMOTE_LINEAR",
        "WILDCARD_WEAKEN", "MATCH_USAGE", "NO_UPPER_BOUND", "MEET_UNDEFINED",
        "NEEDS_ANNOTATION", "UNKNOWN_VAR", "DUPLICATE_DEF", "SYNTAX",
        "POLYMORPHIC_DROP"}) {
    EXPECT_TRUE(seen.count(code)) << code;
  }
}

// Adding an unused 0-graded binder never changes a verdict.
TEST(Invariants, WeakeningByZeroGradedBinders) {
  for (const auto& f : testing::corpus_files("typing")) {
    Program p;
    try {
      p = parse_program(testing::read_text(f), f);
    } catch (const Error&) {
      continue;
    }
    std::map<std::string, Type> globals;
    for (const auto& d : p.decls) globals.emplace(d.name, d.type);
    for (const auto& d : p.decls) {
      auto run = [&](const TypingCtx& ctx) -> std::string {
        CheckEnv env;
        env.semiring = p.semiring;
        env.globals = globals;
        try {
          check_judgement(ctx, d.body, d.type, env);
          return "OK";
        } catch (const Error& e) {
          return std::string(code_name(e.code()));
        }
      };
      TypingCtx weak;
      weak.add("unused_w", Assumption::graded(ty_int(), Grade::zero(p.semiring)));
      EXPECT_EQ(run({}), run(weak)) << f << " " << d.name;
    }
  }
}

// Accepted with x linear implies accepted with x graded at 1.
TEST(Invariants, Dereliction) {
  const std::vector<std::pair<std::string, std::string>> cases = {
      {"x", "Int"},
      {"(x, unit)", "Int * Unit"},
      {"inl x", "Int + Unit"},
      {"(\\y -> y) x", "Int"},
      {"case x of (a, b) -> (b, a)", "Int * Int"},
      {"case x of 0 -> 1; n -> n", "Int"},
      {"letrec f = \\z -> z in f x", "Int"},
      {"drop @Int x", "Unit"},
  };
  const std::vector<std::string> arg_types = {"Int", "Int", "Int", "Int",
                                              "Int * Int", "Int", "Int",
                                              "Int"};
  for (SemiringId sr : {kNE, kNL}) {
    for (size_t i = 0; i < cases.size(); ++i) {
      Type a = parse_type(arg_types[i], sr);
      TypingCtx lin;
      lin.add("x", Assumption::linear(a));
      TypingCtx gr;
      gr.add("x", Assumption::graded(a, Grade::one(sr)));
      ASSERT_EQ(verdict_of_term(lin, cases[i].first, cases[i].second, sr), "OK")
          << cases[i].first;
      EXPECT_EQ(verdict_of_term(gr, cases[i].first, cases[i].second, sr), "OK")
          << cases[i].first;
    }
  }
}

TEST(Invariants, LinearBindersCannotBePromoted) {
  TypingCtx lin;
  lin.add("x", Assumption::linear(ty_int()));
  EXPECT_EQ(verdict_of_term(lin, "[x]", "Int [1]", kNE), "PROMOTE_LINEAR");
  TypingCtx gr;
  gr.add("x", Assumption::graded(ty_int(), Grade::nat(kNE, 3)));
  EXPECT_EQ(verdict_of_term(gr, "[x]", "Int [3]", kNE), "OK");
  EXPECT_EQ(verdict_of_term(gr, "[x]", "Int [1]", kNE), "GRADE_EXCEEDED");
}

}  // namespace
}  // namespace grlin
