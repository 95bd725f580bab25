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

#include "cli.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "grlin/evaluator.h"
#include "grlin/parser.h"
#include "grlin/syntax.h"
#include "test_util.h"

namespace grlin {
namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_program(const std::string& name, const std::string& text) {
  auto path = std::filesystem::temp_directory_path() / ("grlin_cli_" + name);
  std::ofstream(path) << text;
  return path.string();
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

TEST(Check, AcceptedProgramIsSilent) {
  Result r = cli({"check", testing::corpus_path("motivating.grm")});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out, "");
  EXPECT_EQ(r.err, "");
}

TEST(Check, DiagnosticsGoToStderr) {
  std::string f = testing::corpus_path("typing/bad_match_usage_interval.grm");
  Result r = cli({"check", f});
  EXPECT_EQ(r.code, kExitDiagnostics);
  EXPECT_EQ(r.out, "");
  EXPECT_EQ(r.err.rfind(f + ":4:", 0), 0u) << r.err;
  EXPECT_NE(r.err.find(": MATCH_USAGE: "), std::string::npos) << r.err;
}

TEST(Check, MissingFileIsAUsageError) {
  EXPECT_EQ(cli({"check", "/nonexistent/file.grm"}).code, kExitUsage);
}

TEST(Check, SyntaxErrorsArePositioned) {
  std::string f = temp_program("syntax.grm", "f : a -o\nf = \\x -> x\n");
  Result r = cli({"check", f});
  EXPECT_EQ(r.code, kExitDiagnostics);
  EXPECT_NE(r.err.find(f + ":1:7: SYNTAX: "), std::string::npos) << r.err;
}

TEST(Run, PrintsTheNormalFormOfMain) {
  Result a = cli({"run", testing::corpus_path("motivating.grm")});
  EXPECT_EQ(a.code, kExitOk);
  EXPECT_EQ(a.out, "1\n");
  Result b = cli({"run", testing::corpus_path("copyshape.grm")});
  EXPECT_EQ(b.out, "((unit, unit), (1, 2))\n");
  Result c = cli({"run", temp_program("unit.grm", "main : Unit\nmain = unit\n")});
  EXPECT_EQ(c.out, "unit\n");
}

TEST(Run, DivergenceReportsFuel) {
  std::string f = temp_program(
      "loop.grm",
      "main : Unit\nmain = letrec f = \\x -> f x in f unit\n");
  Result r = cli({"run", f, "--fuel", "50"});
  EXPECT_EQ(r.code, kExitDiagnostics);
  EXPECT_EQ(r.out, "");
  EXPECT_NE(r.err.find("fuel"), std::string::npos) << r.err;
}

TEST(Run, NeedsMain) {
  Result r = cli({"run", testing::corpus_path("typing/ok_copy.grm")});
  EXPECT_EQ(r.code, kExitDiagnostics);
  EXPECT_NE(r.err.find("NO_MAIN"), std::string::npos);
}

TEST(Run, IllTypedProgramsDoNotRun) {
  Result r = cli({"run", testing::corpus_path("typing/bad_copy_at_one.grm")});
  EXPECT_EQ(r.code, kExitDiagnostics);
  EXPECT_NE(r.err.find("GRADE_EXCEEDED"), std::string::npos);
}

TEST(Derive, PushOverFunction) {
  Result r = cli({"derive", "push", "(a * a) -o b", "--semiring", "nat-exact",
                  "--grade", "2"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 2u);
  Term got = administrative_normalize(parse_term(ls[0]));
  Term want = parse_term(
      "\\z -> \\y -> case z of [f] -> case (case y of (x', y') -> "
      "case (x', y') of ([u], [v]) -> [(u, v)]) of [u] -> [f u]");
  EXPECT_TRUE(alpha_eq(got, want)) << ls[0];
  EXPECT_EQ(ls[1], ": (a * a -o b) [2] -o a [2] * a [2] -o b [2]");
}

TEST(Derive, PullConcludesTheIntervalMeet) {
  Result r = cli({"derive", "pull", "a * b", "--semiring", "interval",
                  "--grades", "a=0..2,b=2..4"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 2u);
  const std::string tail = "-o (a * b) [2..2]";
  EXPECT_EQ(ls[1].substr(ls[1].size() - tail.size()), tail) << ls[1];
}

TEST(Derive, DropAtATypeVariableFails) {
  Result r = cli({"derive", "drop", "a"});
  EXPECT_EQ(r.code, kExitDiagnostics);
  EXPECT_EQ(r.out, "");
  EXPECT_NE(r.err.find("POLYMORPHIC_DROP"), std::string::npos) << r.err;
}

TEST(Derive, LowercaseCopyShape) {
  Result r = cli({"derive", "copyshape", "Int * Int"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(lines(r.out).back(), ": Int * Int -o (Unit * Unit) * Int * Int");
}

TEST(Derive, UsageErrors) {
  EXPECT_EQ(cli({"derive", "bogus", "a"}).code, kExitUsage);
  EXPECT_EQ(cli({"derive", "push", "a", "--semiring", "reals"}).code,
            kExitUsage);
  EXPECT_EQ(cli({"derive", "push", "a", "--grades", "a=1"}).code, kExitUsage);
  EXPECT_EQ(cli({"derive", "pull", "a", "--grades", "c=1"}).code, kExitUsage);
  EXPECT_EQ(cli({"derive", "pull", "a", "--grades", "a"}).code, kExitUsage);
}

TEST(Derive, MalformedTypeIsADiagnostic) {
  Result r = cli({"derive", "push", "a *", "--grade", "1"});
  EXPECT_EQ(r.code, kExitDiagnostics);
  EXPECT_EQ(r.err.rfind("<type>:1:3: SYNTAX: ", 0), 0u) << r.err;
}

// Everything derive prints parses back: comments, the term, the type.
TEST(Derive, OutputIsReparseable) {
  for (std::vector<std::string> args :
       {std::vector<std::string>{"derive", "push", "mu X . Unit + (a * X)",
                                 "--semiring", "nat-le", "--grade", "2",
                                 "--explain"},
        {"derive", "fmap", "a * (a + Unit)", "--semiring", "interval",
         "--grade", "0..2", "--explain"},
        {"derive", "drop", "mu X . Unit + (Int * X)", "--explain"}}) {
    Result r = cli(args);
    ASSERT_EQ(r.code, kExitOk) << r.err;
    auto ls = lines(r.out);
    ASSERT_GE(ls.size(), 2u);
    std::string type_line = ls.back();
    ASSERT_EQ(type_line.rfind(": ", 0), 0u);
    SemiringId sr = SemiringId::kNatExact;
    for (size_t i = 0; i + 1 < args.size(); ++i) {
      if (args[i] == "--semiring") sr = *parse_semiring(args[i + 1]);
    }
    EXPECT_NO_THROW(parse_type(type_line.substr(2), sr)) << type_line;
    std::string term_text;
    for (size_t i = 0; i + 1 < ls.size(); ++i) term_text += ls[i] + "\n";
    EXPECT_NO_THROW(parse_term(term_text, sr)) << term_text;
  }
}

TEST(Derive, ExplainPrintsTraceAndSideConditions) {
  Result r = cli({"derive", "push", "a + b", "--semiring", "nat-le",
                  "--grade", "3", "--explain"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("-- push @a + b"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("-- side condition: 1 ⊑ 3"), std::string::npos) << r.out;
}

TEST(Laws, SmallRunPasses) {
  Result r = cli({"laws", "--suite", "inverses", "--cases", "50", "--seed", "7"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("inverses"), std::string::npos);
}

TEST(Laws, InvalidSuiteIsAUsageError) {
  EXPECT_EQ(cli({"laws", "--suite", "bogus"}).code, kExitUsage);
}

TEST(Laws, UnknownFlagsAreUsageErrors) {
  EXPECT_EQ(cli({"laws", "--frobnicate"}).code, kExitUsage);
  EXPECT_EQ(cli({}).code, kExitUsage);
  EXPECT_EQ(cli({"frobnicate"}).code, kExitUsage);
}

TEST(Determinism, IdenticalInvocationsAreBitIdentical) {
  for (std::vector<std::string> args :
       {std::vector<std::string>{"laws", "--suite", "all", "--cases", "40"},
        {"derive", "fmap", "mu X . a + (X * X)", "--semiring", "interval",
         "--grade", "0..Inf", "--explain"},
        {"run", testing::corpus_path("usage/nested.grm")}}) {
    Result a = cli(args);
    Result b = cli(args);
    EXPECT_EQ(a.code, b.code);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.err, b.err);
  }
}

}  // namespace
}  // namespace grlin
