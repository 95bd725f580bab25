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

#ifndef GRLIN_LAWCHECK_H_
#define GRLIN_LAWCHECK_H_

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "grlin/grades.h"
#include "grlin/syntax.h"

namespace grlin {

enum class Suite { kInverses, kNaturality, kComonad, kEquational, kSoundness };

inline constexpr Suite kAllSuites[] = {Suite::kInverses, Suite::kNaturality,
                                       Suite::kComonad, Suite::kEquational,
                                       Suite::kSoundness};

std::string_view suite_name(Suite s);
std::optional<Suite> parse_suite(std::string_view name);
int default_cases(Suite s);

// Small deterministic generator; draws do not depend on the standard
// library's distribution implementations.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}
  Rng(uint64_t seed, uint64_t stream, uint64_t index);

  uint64_t below(uint64_t n) { return n == 0 ? 0 : eng_() % n; }
  bool coin() { return (eng_() & 1) != 0; }
  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[below(v.size())];
  }

 private:
  std::mt19937_64 eng_;
};

struct TypeGenConfig {
  int max_depth = 3;
  bool allow_fun = false;
  bool allow_mu = true;
  int tyvars = 2;  // draws from a, b, ...
  bool allow_int = true;
};

// Well-formed, closed under μ, Box-free and inhabited.
Type gen_type(const TypeGenConfig& cfg, Rng& rng);

// A closed value of `t` in normal form. Type variables are instantiated
// at Int; μ-types are unrolled at most `budget` times along any path.
// Function types are not supported.
Term gen_value(const Type& t, Rng& rng, int budget = 3);

// `t` with every type variable replaced by Int.
Type instantiate_int(const Type& t);

struct LawConfig {
  uint64_t seed = 7;
  std::optional<int> cases;       // default per suite
  int max_depth = 3;
  std::optional<int> only_case;   // run a single case index
  unsigned threads = 0;           // 0: hardware concurrency
};

struct LawFailure {
  int index = 0;
  std::string instance;  // type, grades, input
  std::string lhs;
  std::string rhs;
  std::string repro;
};

struct LawReport {
  Suite suite = Suite::kInverses;
  int cases = 0;
  std::vector<LawFailure> failures;
};

LawReport run_suite(Suite s, const LawConfig& cfg);

// Header note, one table row per report, then one block per failure.
std::string format_reports(const std::vector<LawReport>& reports);

}  // namespace grlin

#endif  // GRLIN_LAWCHECK_H_
