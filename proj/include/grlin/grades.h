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

#ifndef GRLIN_GRADES_H_
#define GRLIN_GRADES_H_

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "grlin/diagnostic.h"

namespace grlin {

// The shipped preordered semirings. A program selects exactly one.
enum class SemiringId {
  kNatExact,     // (N, *, 1, +, 0, =): exact usage counting
  kNatLe,        // (N, *, 1, +, 0, <=): upper bounds on usage
  kInterval,     // N_inf intervals lo..hi, ordered by containment
  kZeroOneMany,  // {0, 1, w}
};

inline constexpr SemiringId kAllSemirings[] = {
    SemiringId::kNatExact, SemiringId::kNatLe, SemiringId::kInterval,
    SemiringId::kZeroOneMany};

std::string_view semiring_name(SemiringId sr);
std::optional<SemiringId> parse_semiring(std::string_view name);

// Infinity of the extended naturals used by interval bounds.
inline constexpr uint64_t kInf = std::numeric_limits<uint64_t>::max();

enum class Zom : uint8_t { kZero, kOne, kMany };

// An element of one of the shipped semirings. Immutable value type.
class Grade {
 public:
  static Grade nat(SemiringId sr, uint64_t n);
  // Requires lo <= hi.
  static Grade interval(uint64_t lo, uint64_t hi);
  static Grade zom(Zom z);
  static Grade zero(SemiringId sr);
  static Grade one(SemiringId sr);

  SemiringId semiring() const { return sr_; }

  // nat-exact and nat-le.
  uint64_t nat_value() const { return lo_; }
  // interval.
  uint64_t lo() const { return lo_; }
  uint64_t hi() const { return hi_; }
  // zero-one-many.
  Zom zom_value() const { return static_cast<Zom>(lo_); }

  friend bool operator==(const Grade&, const Grade&) = default;
  friend auto operator<=>(const Grade&, const Grade&) = default;

 private:
  Grade(SemiringId sr, uint64_t lo, uint64_t hi) : sr_(sr), lo_(lo), hi_(hi) {}

  SemiringId sr_;
  uint64_t lo_;
  uint64_t hi_;
};

// Semiring operations. All throw Error(kMixedSemiring) when the operands
// belong to different semirings.
Grade sr_add(const Grade& a, const Grade& b);
Grade sr_mul(const Grade& a, const Grade& b);
// a ⊑ b: "a is approximated by b".
bool sr_leq(const Grade& a, const Grade& b);
// Greatest lower bound under ⊑; nullopt when none exists.
std::optional<Grade> sr_meet(const Grade& a, const Grade& b);
// Least upper bound under ⊑; nullopt when none exists.
std::optional<Grade> sr_join(const Grade& a, const Grade& b);

// The element standing for "any number of uses", if the semiring has one
// (interval 0..Inf, zero-one-many w). Used to charge variables captured by a
// recursive binding.
std::optional<Grade> sr_omega(SemiringId sr);

// Grade literal syntax: decimal naturals for nat-exact / nat-le, `L..H` with
// `Inf` for intervals, `0` / `1` / `w` for zero-one-many. Throws
// Error(kSyntax); the error position column is the 1-based offset within
// `text`.
Grade parse_grade(std::string_view text, SemiringId sr);
std::string show_grade(const Grade& g);

// Every element of the semiring whose numeric components are <= bound (for
// zero-one-many: the whole carrier). Intervals may use Inf as upper bound.
std::vector<Grade> sample_grades(SemiringId sr, uint64_t bound);

}  // namespace grlin

#endif  // GRLIN_GRADES_H_
