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

#include "grlin/grades.h"

#include <algorithm>
#include <charconv>

#include <fmt/format.h>

namespace grlin {
namespace {

void require_same(const Grade& a, const Grade& b) {
  if (a.semiring() != b.semiring()) {
    throw Error(Code::kMixedSemiring,
                fmt::format("grades {} ({}) and {} ({}) belong to different "
                            "semirings",
                            show_grade(a), semiring_name(a.semiring()),
                            show_grade(b), semiring_name(b.semiring())));
  }
}

uint64_t nat_add(uint64_t a, uint64_t b) {
  uint64_t r;
  if (__builtin_add_overflow(a, b, &r)) {
    throw std::overflow_error("grade addition overflows");
  }
  return r;
}

uint64_t nat_mul(uint64_t a, uint64_t b) {
  uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) {
    throw std::overflow_error("grade multiplication overflows");
  }
  return r;
}

// Extended naturals: Inf absorbs addition; 0 annihilates Inf.
uint64_t ext_add(uint64_t a, uint64_t b) {
  if (a == kInf || b == kInf) return kInf;
  uint64_t r;
  if (__builtin_add_overflow(a, b, &r) || r == kInf) return kInf;
  return r;
}

uint64_t ext_mul(uint64_t a, uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a == kInf || b == kInf) return kInf;
  uint64_t r;
  if (__builtin_mul_overflow(a, b, &r) || r == kInf) return kInf;
  return r;
}

std::optional<uint64_t> parse_natural(std::string_view s) {
  if (s.empty()) return std::nullopt;
  uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || v == kInf) {
    return std::nullopt;
  }
  return v;
}

std::string show_bound(uint64_t v) {
  return v == kInf ? "Inf" : std::to_string(v);
}

[[noreturn]] void grade_syntax(std::string_view text, SemiringId sr,
                               int column) {
  throw Error(Code::kSyntax,
              fmt::format("malformed {} grade '{}'", semiring_name(sr), text),
              Position{"", 1, column});
}

}  // namespace

std::string_view semiring_name(SemiringId sr) {
  switch (sr) {
    case SemiringId::kNatExact:
      return "nat-exact";
    case SemiringId::kNatLe:
      return "nat-le";
    case SemiringId::kInterval:
      return "interval";
    case SemiringId::kZeroOneMany:
      return "zero-one-many";
  }
  return "?";
}

std::optional<SemiringId> parse_semiring(std::string_view name) {
  for (SemiringId sr : kAllSemirings) {
    if (semiring_name(sr) == name) return sr;
  }
  return std::nullopt;
}

Grade Grade::nat(SemiringId sr, uint64_t n) { return Grade(sr, n, n); }

Grade Grade::interval(uint64_t lo, uint64_t hi) {
  if (lo > hi) {
    throw std::invalid_argument(
        fmt::format("interval {}..{} has lo > hi", show_bound(lo),
                    show_bound(hi)));
  }
  return Grade(SemiringId::kInterval, lo, hi);
}

Grade Grade::zom(Zom z) {
  auto v = static_cast<uint64_t>(z);
  return Grade(SemiringId::kZeroOneMany, v, v);
}

Grade Grade::zero(SemiringId sr) {
  switch (sr) {
    case SemiringId::kInterval:
      return interval(0, 0);
    case SemiringId::kZeroOneMany:
      return zom(Zom::kZero);
    default:
      return nat(sr, 0);
  }
}

Grade Grade::one(SemiringId sr) {
  switch (sr) {
    case SemiringId::kInterval:
      return interval(1, 1);
    case SemiringId::kZeroOneMany:
      return zom(Zom::kOne);
    default:
      return nat(sr, 1);
  }
}

Grade sr_add(const Grade& a, const Grade& b) {
  require_same(a, b);
  switch (a.semiring()) {
    case SemiringId::kNatExact:
    case SemiringId::kNatLe:
      return Grade::nat(a.semiring(), nat_add(a.nat_value(), b.nat_value()));
    case SemiringId::kInterval:
      return Grade::interval(ext_add(a.lo(), b.lo()), ext_add(a.hi(), b.hi()));
    case SemiringId::kZeroOneMany:
      if (a.zom_value() == Zom::kZero) return b;
      if (b.zom_value() == Zom::kZero) return a;
      return Grade::zom(Zom::kMany);
  }
  return a;
}

Grade sr_mul(const Grade& a, const Grade& b) {
  require_same(a, b);
  switch (a.semiring()) {
    case SemiringId::kNatExact:
    case SemiringId::kNatLe:
      return Grade::nat(a.semiring(), nat_mul(a.nat_value(), b.nat_value()));
    case SemiringId::kInterval:
      return Grade::interval(ext_mul(a.lo(), b.lo()), ext_mul(a.hi(), b.hi()));
    case SemiringId::kZeroOneMany:
      if (a.zom_value() == Zom::kZero || b.zom_value() == Zom::kZero) {
        return Grade::zom(Zom::kZero);
      }
      if (a.zom_value() == Zom::kOne) return b;
      return a;
  }
  return a;
}

bool sr_leq(const Grade& a, const Grade& b) {
  require_same(a, b);
  switch (a.semiring()) {
    case SemiringId::kNatExact:
      return a.nat_value() == b.nat_value();
    case SemiringId::kNatLe:
      return a.nat_value() <= b.nat_value();
    case SemiringId::kInterval:
      return b.lo() <= a.lo() && a.hi() <= b.hi();
    case SemiringId::kZeroOneMany:
      return a == b || b.zom_value() == Zom::kMany;
  }
  return false;
}

std::optional<Grade> sr_meet(const Grade& a, const Grade& b) {
  require_same(a, b);
  switch (a.semiring()) {
    case SemiringId::kNatExact:
      if (a == b) return a;
      return std::nullopt;
    case SemiringId::kNatLe:
      return Grade::nat(a.semiring(), std::min(a.nat_value(), b.nat_value()));
    case SemiringId::kInterval: {
      // Largest interval contained in both: the intersection.
      uint64_t lo = std::max(a.lo(), b.lo());
      uint64_t hi = std::min(a.hi(), b.hi());
      if (lo > hi) return std::nullopt;
      return Grade::interval(lo, hi);
    }
    case SemiringId::kZeroOneMany:
      if (a == b) return a;
      if (a.zom_value() == Zom::kMany) return b;
      if (b.zom_value() == Zom::kMany) return a;
      return std::nullopt;
  }
  return std::nullopt;
}

std::optional<Grade> sr_join(const Grade& a, const Grade& b) {
  require_same(a, b);
  switch (a.semiring()) {
    case SemiringId::kNatExact:
      if (a == b) return a;
      return std::nullopt;
    case SemiringId::kNatLe:
      return Grade::nat(a.semiring(), std::max(a.nat_value(), b.nat_value()));
    case SemiringId::kInterval:
      return Grade::interval(std::min(a.lo(), b.lo()),
                             std::max(a.hi(), b.hi()));
    case SemiringId::kZeroOneMany:
      if (a == b) return a;
      return Grade::zom(Zom::kMany);
  }
  return std::nullopt;
}

std::optional<Grade> sr_omega(SemiringId sr) {
  switch (sr) {
    case SemiringId::kInterval:
      return Grade::interval(0, kInf);
    case SemiringId::kZeroOneMany:
      return Grade::zom(Zom::kMany);
    default:
      return std::nullopt;
  }
}

Grade parse_grade(std::string_view text, SemiringId sr) {
  switch (sr) {
    case SemiringId::kNatExact:
    case SemiringId::kNatLe: {
      auto n = parse_natural(text);
      if (!n) grade_syntax(text, sr, 1);
      return Grade::nat(sr, *n);
    }
    case SemiringId::kInterval: {
      auto dots = text.find("..");
      if (dots == std::string_view::npos) grade_syntax(text, sr, 1);
      std::string_view lo_text = text.substr(0, dots);
      std::string_view hi_text = text.substr(dots + 2);
      auto lo = parse_natural(lo_text);
      if (!lo) grade_syntax(text, sr, 1);
      std::optional<uint64_t> hi;
      if (hi_text == "Inf") {
        hi = kInf;
      } else {
        hi = parse_natural(hi_text);
      }
      if (!hi) grade_syntax(text, sr, static_cast<int>(dots) + 3);
      if (*lo > *hi) grade_syntax(text, sr, 1);
      return Grade::interval(*lo, *hi);
    }
    case SemiringId::kZeroOneMany:
      if (text == "0") return Grade::zom(Zom::kZero);
      if (text == "1") return Grade::zom(Zom::kOne);
      if (text == "w") return Grade::zom(Zom::kMany);
      grade_syntax(text, sr, 1);
  }
  grade_syntax(text, sr, 1);
}

std::string show_grade(const Grade& g) {
  switch (g.semiring()) {
    case SemiringId::kNatExact:
    case SemiringId::kNatLe:
      return std::to_string(g.nat_value());
    case SemiringId::kInterval:
      return show_bound(g.lo()) + ".." + show_bound(g.hi());
    case SemiringId::kZeroOneMany:
      switch (g.zom_value()) {
        case Zom::kZero:
          return "0";
        case Zom::kOne:
          return "1";
        case Zom::kMany:
          return "w";
      }
  }
  return "?";
}

std::vector<Grade> sample_grades(SemiringId sr, uint64_t bound) {
  std::vector<Grade> out;
  switch (sr) {
    case SemiringId::kNatExact:
    case SemiringId::kNatLe:
      for (uint64_t n = 0; n <= bound; ++n) out.push_back(Grade::nat(sr, n));
      break;
    case SemiringId::kInterval:
      for (uint64_t lo = 0; lo <= bound; ++lo) {
        for (uint64_t hi = lo; hi <= bound; ++hi) {
          out.push_back(Grade::interval(lo, hi));
        }
        out.push_back(Grade::interval(lo, kInf));
      }
      break;
    case SemiringId::kZeroOneMany:
      out = {Grade::zom(Zom::kZero), Grade::zom(Zom::kOne),
             Grade::zom(Zom::kMany)};
      break;
  }
  return out;
}

}  // namespace grlin
