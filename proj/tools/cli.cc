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

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "grlin/deriving.h"
#include "grlin/evaluator.h"
#include "grlin/lawcheck.h"
#include "grlin/parser.h"
#include "grlin/pretty.h"
#include "grlin/typecheck.h"

namespace grlin {
namespace {

struct Options {
  std::string file;
  std::optional<uint64_t> fuel;

  std::string kind;
  std::string type_text;
  std::string semiring = "nat-exact";
  std::string grade;
  std::string grades;
  std::string var;
  bool explain = false;

  std::string suite = "all";
  uint64_t seed = 7;
  std::optional<int> cases;
  int max_depth = 3;
  std::optional<int> only_case;
  unsigned threads = 0;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError(fmt::format("cannot read '{}'", path));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void print(std::ostream& os, const Diagnostic& d) {
  os << format_diagnostic(d) << "\n";
}

// Parses and checks a file. Diagnostics go to `err`.
std::optional<CheckedProgram> load(const std::string& path,
                                   std::ostream& err) {
  std::string text = read_file(path);
  Program prog;
  try {
    prog = parse_program(text, path);
  } catch (const Error& e) {
    print(err, e.with_position({path, 1, 1}).diagnostic());
    return std::nullopt;
  }
  CheckedProgram checked = check_program_full(prog);
  if (!checked.diagnostics.empty()) {
    for (const auto& d : checked.diagnostics) print(err, d);
    return std::nullopt;
  }
  return checked;
}

int cmd_check(const Options& o, std::ostream& err) {
  return load(o.file, err) ? kExitOk : kExitDiagnostics;
}

int cmd_run(const Options& o, std::ostream& out, std::ostream& err) {
  auto checked = load(o.file, err);
  if (!checked) return kExitDiagnostics;
  try {
    RunResult r = run_main(checked->bodies, o.fuel.value_or(default_fuel()));
    out << pretty(r.value) << "\n";
    return kExitOk;
  } catch (const NoMain& e) {
    print(err, {Code::kNoMain, e.what(), {o.file, 1, 1}});
  } catch (const FuelExhausted& e) {
    err << o.file << ": " << e.what() << "\n";
  } catch (const StuckTerm& e) {
    err << o.file << ": internal error: " << e.what() << "\n";
  }
  return kExitDiagnostics;
}

std::map<std::string, Grade> parse_grade_map(const std::string& text,
                                             SemiringId sr) {
  std::map<std::string, Grade> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw UsageError(
          fmt::format("--grades expects var=grade pairs, got '{}'", item));
    }
    out.insert_or_assign(item.substr(0, eq),
                         parse_grade(item.substr(eq + 1), sr));
  }
  return out;
}

int cmd_derive(const Options& o, std::ostream& out, std::ostream& err) {
  auto kind = parse_derive_kind(o.kind);
  if (!kind) throw UsageError(fmt::format("unknown combinator '{}'", o.kind));
  auto sr = parse_semiring(o.semiring);
  if (!sr) throw UsageError(fmt::format("unknown semiring '{}'", o.semiring));
  try {
    DeriveRequest req;
    req.kind = *kind;
    req.semiring = *sr;
    req.type = parse_type(o.type_text, *sr);
    if (!o.grade.empty()) req.grade = parse_grade(o.grade, *sr);
    if (!o.grades.empty()) {
      if (*kind != DeriveKind::kPull) {
        throw UsageError("--grades only applies to pull");
      }
      req.grades = parse_grade_map(o.grades, *sr);
      auto params = type_parameters(req.type);
      for (const auto& [k, g] : req.grades) {
        if (std::find(params.begin(), params.end(), k) == params.end()) {
          throw UsageError(
              fmt::format("'{}' is not a parameter of {}", k,
                          pretty(req.type)));
        }
      }
    }
    req.var = o.var;
    DerivedCombinator d = derive(req);
    if (o.explain) {
      for (const auto& line : d.trace) out << "-- " << line << "\n";
      for (const auto& c : d.side_conditions) {
        out << "-- side condition: " << c << "\n";
      }
    }
    out << pretty(d.term) << "\n";
    out << ": " << pretty(d.type) << "\n";
    return kExitOk;
  } catch (const Error& e) {
    Diagnostic d = e.diagnostic();
    if (!d.pos.known()) d.pos = {"", 1, 1};
    if (d.pos.file.empty()) d.pos.file = "<type>";
    print(err, d);
    return kExitDiagnostics;
  }
}

int cmd_laws(const Options& o, std::ostream& out) {
  std::vector<Suite> suites;
  if (o.suite == "all") {
    suites.assign(std::begin(kAllSuites), std::end(kAllSuites));
  } else if (auto s = parse_suite(o.suite)) {
    suites.push_back(*s);
  } else {
    throw UsageError(fmt::format("unknown suite '{}'", o.suite));
  }
  LawConfig cfg;
  cfg.seed = o.seed;
  cfg.cases = o.cases;
  cfg.max_depth = o.max_depth;
  cfg.only_case = o.only_case;
  cfg.threads = o.threads;
  std::vector<LawReport> reports;
  bool failed = false;
  for (Suite s : suites) {
    reports.push_back(run_suite(s, cfg));
    failed = failed || !reports.back().failures.empty();
  }
  out << format_reports(reports);
  return failed ? kExitDiagnostics : kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Graded linear calculus with derived distributive laws",
               "grlin"};
  app.require_subcommand(1);
  Options o;

  auto* check = app.add_subcommand("check", "Type-check a program");
  check->add_option("file", o.file, "Source file")->required();

  auto* run = app.add_subcommand("run", "Check a program and print main");
  run->add_option("file", o.file, "Source file")->required();
  run->add_option("--fuel", o.fuel, "Step budget (default: GRLIN_FUEL or "
                                    "100000)");

  auto* derive_cmd =
      app.add_subcommand("derive", "Derive a combinator at a type");
  derive_cmd
      ->add_option("kind", o.kind, "push | pull | drop | copyshape | fmap")
      ->required();
  derive_cmd->add_option("type", o.type_text, "Subject type")->required();
  derive_cmd->add_option("--semiring", o.semiring,
                         "nat-exact | nat-le | interval | zero-one-many");
  derive_cmd->add_option(
      "--grade", o.grade, "Grade (pull: broadcast to every parameter)");
  derive_cmd->add_option("--grades", o.grades, "pull: var=grade,...");
  derive_cmd->add_option("--var", o.var, "fmap: the mapped type variable");
  derive_cmd->add_flag("--explain", o.explain, "Print the derivation trace");

  auto* laws = app.add_subcommand("laws", "Run the law suites");
  laws->add_option("--suite", o.suite,
                   "inverses | naturality | comonad | equational | "
                   "soundness | all");
  laws->add_option("--seed", o.seed, "Seed");
  laws->add_option("--cases", o.cases, "Cases per suite");
  laws->add_option("--max-depth", o.max_depth, "Type generator depth");
  laws->add_option("--case", o.only_case, "Run one case index");
  laws->add_option("--threads", o.threads, "Workers (0: all cores)");

  std::vector<const char*> argv{"grlin"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "grlin: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (check->parsed()) return cmd_check(o, err);
    if (run->parsed()) return cmd_run(o, out, err);
    if (derive_cmd->parsed()) return cmd_derive(o, out, err);
    if (laws->parsed()) return cmd_laws(o, out);
  } catch (const UsageError& e) {
    err << "grlin: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace grlin
