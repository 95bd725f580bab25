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

#include <gtest/gtest.h>

#include <algorithm>
#include <string>
#include <vector>

#include "grlin/pretty.h"
#include "grlin/typecheck.h"

namespace grlin {
namespace {

int depth_of(const Type& t) {
  if (!t) return 0;
  return 1 + std::max(depth_of(t->a), depth_of(t->b));
}

class SuiteTest : public ::testing::TestWithParam<Suite> {};

TEST_P(SuiteTest, DefaultSizeHasNoFailures) {
  LawConfig cfg;
  LawReport r = run_suite(GetParam(), cfg);
  EXPECT_EQ(r.cases, default_cases(GetParam()));
  for (const auto& f : r.failures) {
    ADD_FAILURE() << f.instance << "\n  lhs: " << f.lhs << "\n  rhs: " << f.rhs
                  << "\n  " << f.repro;
  }
}

TEST_P(SuiteTest, OtherSeedsHaveNoFailures) {
  LawConfig cfg;
  cfg.seed = 20261017;
  cfg.cases = 100;
  LawReport r = run_suite(GetParam(), cfg);
  EXPECT_EQ(r.cases, 100);
  EXPECT_TRUE(r.failures.empty()) << format_reports({r});
}

TEST_P(SuiteTest, DeterministicAcrossThreadCounts) {
  LawConfig one;
  one.cases = 60;
  one.threads = 1;
  LawConfig many = one;
  many.threads = 4;
  EXPECT_EQ(format_reports({run_suite(GetParam(), one)}),
            format_reports({run_suite(GetParam(), many)}));
}

INSTANTIATE_TEST_SUITE_P(AllSuites, SuiteTest, ::testing::ValuesIn(kAllSuites),
                         [](const auto& info) {
                           return std::string(suite_name(info.param));
                         });

TEST(Suites, DefaultSizes) {
  EXPECT_EQ(default_cases(Suite::kInverses), 500);
  EXPECT_EQ(default_cases(Suite::kNaturality), 200);
  EXPECT_EQ(default_cases(Suite::kComonad), 200);
  EXPECT_EQ(default_cases(Suite::kEquational), 200);
  EXPECT_EQ(default_cases(Suite::kSoundness), 300);
}

TEST(Suites, NamesRoundTrip) {
  for (Suite s : kAllSuites) EXPECT_EQ(parse_suite(suite_name(s)), s);
  EXPECT_FALSE(parse_suite("bogus").has_value());
}

TEST(Suites, SingleCaseReplay) {
  LawConfig cfg;
  cfg.only_case = 17;
  LawReport r = run_suite(Suite::kEquational, cfg);
  EXPECT_EQ(r.cases, 1);
  EXPECT_TRUE(r.failures.empty());
}

TEST(Report, FailuresCarryAReproLine) {
  LawReport r;
  r.suite = Suite::kNaturality;
  r.cases = 3;
  r.failures.push_back({2, "T = a", "unit", "inl unit",
                        "repro: grlin laws --suite naturality --seed 7 --case 2"});
  std::string text = format_reports({r});
  EXPECT_NE(text.find("naturality"), std::string::npos);
  EXPECT_NE(text.find("FAIL naturality #2"), std::string::npos) << text;
  EXPECT_NE(text.find("repro: grlin laws --suite naturality --seed 7 --case 2"),
            std::string::npos);
}

TEST(Rng, StreamsAreReproducible) {
  Rng a(7, 1, 42);
  Rng b(7, 1, 42);
  Rng c(7, 1, 43);
  std::vector<uint64_t> xa, xb, xc;
  for (int i = 0; i < 8; ++i) {
    xa.push_back(a.below(1000));
    xb.push_back(b.below(1000));
    xc.push_back(c.below(1000));
  }
  EXPECT_EQ(xa, xb);
  EXPECT_NE(xa, xc);
}

TEST(GenType, RespectsItsConfiguration) {
  Rng rng(3);
  TypeGenConfig cfg;
  cfg.allow_fun = false;
  cfg.allow_mu = false;
  cfg.tyvars = 0;
  cfg.allow_int = false;
  cfg.max_depth = 4;
  for (int i = 0; i < 300; ++i) {
    Type t = gen_type(cfg, rng);
    EXPECT_FALSE(contains_kind(t, TypeKind::kFun)) << pretty(t);
    EXPECT_FALSE(contains_kind(t, TypeKind::kMu)) << pretty(t);
    EXPECT_FALSE(contains_kind(t, TypeKind::kVar)) << pretty(t);
    EXPECT_FALSE(contains_kind(t, TypeKind::kBase)) << pretty(t);
    EXPECT_FALSE(contains_kind(t, TypeKind::kBox)) << pretty(t);
  }
}

TEST(GenType, ClosedAndWellFormed) {
  Rng rng(4);
  TypeGenConfig cfg;
  cfg.allow_fun = true;
  cfg.max_depth = 4;
  bool saw_mu = false;
  bool saw_fun = false;
  for (int i = 0; i < 300; ++i) {
    Type t = gen_type(cfg, rng);
    saw_mu = saw_mu || contains_kind(t, TypeKind::kMu);
    saw_fun = saw_fun || contains_kind(t, TypeKind::kFun);
    EXPECT_NO_THROW(check_type_wf(t, SemiringId::kNatExact, {})) << pretty(t);
    EXPECT_LE(depth_of(t), 3 * cfg.max_depth + 2) << pretty(t);
  }
  EXPECT_TRUE(saw_mu);
  EXPECT_TRUE(saw_fun);
}

TEST(GenValue, ValuesInhabitTheirTypes) {
  Rng rng(5);
  TypeGenConfig cfg;
  cfg.max_depth = 4;
  for (int i = 0; i < 300; ++i) {
    Type t = gen_type(cfg, rng);
    Term v = gen_value(t, rng);
    CheckEnv env;
    EXPECT_NO_THROW(check_judgement({}, v, instantiate_int(t), env))
        << pretty(t) << " / " << pretty(v);
  }
}

TEST(GenValue, InstantiateReplacesVariablesByInt) {
  Type t = instantiate_int(ty_tensor(ty_var("a"), ty_sum(ty_var("b"), ty_unit())));
  EXPECT_EQ(pretty(t), "Int * (Int + Unit)");
}

}  // namespace
}  // namespace grlin
