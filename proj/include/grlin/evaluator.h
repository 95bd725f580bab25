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

#ifndef GRLIN_EVALUATOR_H_
#define GRLIN_EVALUATOR_H_

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "grlin/parser.h"
#include "grlin/syntax.h"

namespace grlin {

inline constexpr uint64_t kDefaultFuel = 100000;

// kDefaultFuel unless GRLIN_FUEL holds a positive integer.
uint64_t default_fuel();

class FuelExhausted : public std::runtime_error {
 public:
  explicit FuelExhausted(uint64_t steps);
  uint64_t steps() const { return steps_; }

 private:
  uint64_t steps_;
};

// A closed term with no applicable rule. Signals a checker or deriver bug.
class StuckTerm : public std::runtime_error {
 public:
  explicit StuckTerm(const Term& t);
};

class NoMain : public std::runtime_error {
 public:
  NoMain() : std::runtime_error("program has no definition named 'main'") {}
};

using Substitution = std::map<std::string, Term>;

// Structural matching of a term already forced as far as `p` needs.
// nullopt means no match.
std::optional<Substitution> match_pattern(const Term& v, const Pattern& p);

// Uses per binding site and activation (β_case firing).
struct UseCounts {
  std::map<const PatNode*, std::map<int, uint64_t>> by_site;
};

// Normal-order machine. One instance is not thread-safe; separate
// instances are independent.
class Evaluator {
 public:
  explicit Evaluator(uint64_t fuel = default_fuel());

  // Top-level definitions, unfolded on demand.
  void set_globals(std::map<std::string, Term> globals);
  // Wrap every pattern-bound value so its consumptions are counted.
  void enable_counting(bool on) { counting_ = on; }

  Term whnf(Term t);
  // Weak-head normalizes and then recurses into constructor arguments and
  // box payloads. Lambdas are left as they are.
  Term normalize(Term t);

  // Forces `v` as far as pattern `p` inspects it, stopping at the first
  // constructor mismatch. The result is the same value, rebuilt.
  Term force(Term v, const Pattern& p);

  uint64_t steps() const { return steps_; }
  uint64_t fuel() const { return fuel_; }
  const UseCounts& uses() const { return uses_; }

 private:
  void tick();
  Term bind(const Term& v, const PatNode* site);
  bool collect(const Term& v, const Pattern& p, Substitution& out);

  uint64_t fuel_;
  uint64_t steps_ = 0;
  bool counting_ = false;
  int next_instance_ = 0;
  int instance_ = 0;
  std::map<std::string, Term> globals_;
  std::vector<const PatNode*> sites_;
  std::map<const PatNode*, int> site_ids_;
  UseCounts uses_;
};

// Normalizes `t` with a fresh machine.
Term normalize(const Term& t, uint64_t fuel = default_fuel());

// Per-site use counts of a closed term's normalization.
UseCounts count_uses(const Term& t, uint64_t fuel = default_fuel(),
                     const std::map<std::string, Term>& globals = {});

// Erases annotations, then applies β and statically decidable β_case
// everywhere, including under binders. letrec is never unrolled.
Term administrative_normalize(const Term& t, uint64_t fuel = default_fuel());

struct RunResult {
  Term value;
  uint64_t steps = 0;
  UseCounts uses;
};

// Elaborated bodies of a checked program, keyed by name.
RunResult run_main(const std::map<std::string, Term>& bodies,
                   uint64_t fuel = default_fuel(), bool counting = false);

}  // namespace grlin

#endif  // GRLIN_EVALUATOR_H_
