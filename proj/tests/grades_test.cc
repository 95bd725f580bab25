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

#include <gtest/gtest.h>

#include <algorithm>

namespace grlin {
namespace {

const SemiringId kNE = SemiringId::kNatExact;
const SemiringId kNL = SemiringId::kNatLe;
const SemiringId kIV = SemiringId::kInterval;
const SemiringId kZ = SemiringId::kZeroOneMany;

Grade nat(SemiringId sr, uint64_t n) { return Grade::nat(sr, n); }
Grade iv(uint64_t lo, uint64_t hi) { return Grade::interval(lo, hi); }
Grade g(SemiringId sr, const char* text) { return parse_grade(text, sr); }

class SemiringLaws : public ::testing::TestWithParam<SemiringId> {
 protected:
  std::vector<Grade> sample() const { return sample_grades(GetParam(), 4); }
};

TEST_P(SemiringLaws, AdditionIsACommutativeMonoid) {
  auto xs = sample();
  Grade zero = Grade::zero(GetParam());
  for (const auto& a : xs) {
    EXPECT_EQ(sr_add(a, zero), a);
    for (const auto& b : xs) {
      EXPECT_EQ(sr_add(a, b), sr_add(b, a));
      for (const auto& c : xs) {
        EXPECT_EQ(sr_add(sr_add(a, b), c), sr_add(a, sr_add(b, c)));
      }
    }
  }
}

TEST_P(SemiringLaws, MultiplicationIsAMonoidThatDistributes) {
  auto xs = sample();
  Grade zero = Grade::zero(GetParam());
  Grade one = Grade::one(GetParam());
  for (const auto& a : xs) {
    EXPECT_EQ(sr_mul(a, one), a);
    EXPECT_EQ(sr_mul(one, a), a);
    EXPECT_EQ(sr_mul(a, zero), zero);
    EXPECT_EQ(sr_mul(zero, a), zero);
    for (const auto& b : xs) {
      for (const auto& c : xs) {
        EXPECT_EQ(sr_mul(sr_mul(a, b), c), sr_mul(a, sr_mul(b, c)));
        EXPECT_EQ(sr_mul(a, sr_add(b, c)), sr_add(sr_mul(a, b), sr_mul(a, c)));
        EXPECT_EQ(sr_mul(sr_add(a, b), c), sr_add(sr_mul(a, c), sr_mul(b, c)));
      }
    }
  }
}

TEST_P(SemiringLaws, OrderIsAPreorderWithMonotoneOperations) {
  auto xs = sample();
  for (const auto& a : xs) {
    EXPECT_TRUE(sr_leq(a, a));
    for (const auto& b : xs) {
      for (const auto& c : xs) {
        if (sr_leq(a, b) && sr_leq(b, c)) {
          EXPECT_TRUE(sr_leq(a, c));
        }
      }
    }
  }
  for (const auto& a : xs) {
    for (const auto& a2 : xs) {
      if (!sr_leq(a, a2)) continue;
      for (const auto& b : xs) {
        for (const auto& b2 : xs) {
          if (!sr_leq(b, b2)) continue;
          EXPECT_TRUE(sr_leq(sr_add(a, b), sr_add(a2, b2)));
          EXPECT_TRUE(sr_leq(sr_mul(a, b), sr_mul(a2, b2)));
        }
      }
    }
  }
}

TEST_P(SemiringLaws, MeetIsTheGreatestLowerBoundOnTheSample) {
  auto xs = sample();
  for (const auto& a : xs) {
    for (const auto& b : xs) {
      auto m = sr_meet(a, b);
      std::vector<Grade> lower;
      for (const auto& c : xs) {
        if (sr_leq(c, a) && sr_leq(c, b)) lower.push_back(c);
      }
      if (!m) {
        // No element of the sample is a greatest lower bound either.
        for (const auto& c : lower) {
          bool greatest = std::all_of(lower.begin(), lower.end(),
                                      [&](const Grade& d) { return sr_leq(d, c); });
          EXPECT_FALSE(greatest) << show_grade(a) << " " << show_grade(b);
        }
        continue;
      }
      EXPECT_TRUE(sr_leq(*m, a));
      EXPECT_TRUE(sr_leq(*m, b));
      for (const auto& c : lower) EXPECT_TRUE(sr_leq(c, *m));
    }
  }
}

TEST_P(SemiringLaws, JoinIsTheLeastUpperBoundOnTheSample) {
  auto xs = sample();
  for (const auto& a : xs) {
    for (const auto& b : xs) {
      auto j = sr_join(a, b);
      if (!j) continue;
      EXPECT_TRUE(sr_leq(a, *j));
      EXPECT_TRUE(sr_leq(b, *j));
      for (const auto& c : xs) {
        if (sr_leq(a, c) && sr_leq(b, c)) EXPECT_TRUE(sr_leq(*j, c));
      }
    }
  }
}

TEST_P(SemiringLaws, ShowAndParseRoundTrip) {
  for (const auto& a : sample()) {
    EXPECT_EQ(parse_grade(show_grade(a), GetParam()), a) << show_grade(a);
  }
}

INSTANTIATE_TEST_SUITE_P(AllSemirings, SemiringLaws,
                         ::testing::ValuesIn(kAllSemirings),
                         [](const auto& info) {
                           std::string n(semiring_name(info.param));
                           std::replace(n.begin(), n.end(), '-', '_');
                           return n;
                         });

TEST(Grades, Addition) {
  EXPECT_EQ(sr_add(nat(kNE, 1), nat(kNE, 1)), nat(kNE, 2));
  EXPECT_EQ(sr_add(iv(0, 1), iv(1, 1)), iv(1, 2));
  EXPECT_EQ(sr_add(g(kZ, "1"), g(kZ, "1")), g(kZ, "w"));
}

TEST(Grades, IntervalAdditionMatchesPointwiseOracle) {
  for (const auto& a : sample_grades(kIV, 4)) {
    for (const auto& b : sample_grades(kIV, 4)) {
      auto plus = [](uint64_t x, uint64_t y) {
        return (x == kInf || y == kInf) ? kInf : x + y;
      };
      EXPECT_EQ(sr_add(a, b), iv(plus(a.lo(), b.lo()), plus(a.hi(), b.hi())));
    }
  }
}

TEST(Grades, Multiplication) {
  EXPECT_EQ(sr_mul(nat(kNE, 2), nat(kNE, 3)), nat(kNE, 6));
  EXPECT_EQ(sr_mul(iv(0, 2), iv(2, 4)), iv(0, 8));
  EXPECT_EQ(sr_mul(iv(0, 0), iv(0, kInf)), iv(0, 0));
  EXPECT_EQ(sr_mul(iv(1, kInf), iv(2, 3)), iv(2, kInf));
}

TEST(Grades, Order) {
  EXPECT_TRUE(sr_leq(nat(kNE, 2), nat(kNE, 2)));
  EXPECT_FALSE(sr_leq(nat(kNE, 1), nat(kNE, 2)));
  EXPECT_TRUE(sr_leq(nat(kNL, 1), nat(kNL, 2)));
  EXPECT_TRUE(sr_leq(iv(2, 2), iv(0, 4)));
  EXPECT_FALSE(sr_leq(iv(0, 4), iv(2, 2)));
  EXPECT_TRUE(sr_leq(g(kZ, "1"), g(kZ, "w")));
  EXPECT_FALSE(sr_leq(g(kZ, "0"), g(kZ, "1")));
}

TEST(Grades, IntervalOrderMatchesContainmentOracle) {
  for (const auto& a : sample_grades(kIV, 4)) {
    for (const auto& b : sample_grades(kIV, 4)) {
      bool contained = b.lo() <= a.lo() && a.hi() <= b.hi();
      EXPECT_EQ(sr_leq(a, b), contained);
    }
  }
}

TEST(Grades, Meet) {
  EXPECT_EQ(sr_meet(iv(0, 2), iv(2, 4)), iv(2, 2));
  EXPECT_EQ(sr_meet(nat(kNE, 3), nat(kNE, 3)), nat(kNE, 3));
  EXPECT_EQ(sr_meet(nat(kNE, 2), nat(kNE, 3)), std::nullopt);
  EXPECT_EQ(sr_meet(nat(kNL, 2), nat(kNL, 5)), nat(kNL, 2));
  EXPECT_EQ(sr_meet(g(kZ, "w"), g(kZ, "1")), g(kZ, "1"));
  EXPECT_EQ(sr_meet(g(kZ, "0"), g(kZ, "1")), std::nullopt);
  EXPECT_EQ(sr_meet(iv(0, 1), iv(2, 3)), std::nullopt);
}

TEST(Grades, NatLeMeetIsMaximalUpToTen) {
  for (uint64_t a = 0; a <= 10; ++a) {
    for (uint64_t b = 0; b <= 10; ++b) {
      auto m = sr_meet(nat(kNL, a), nat(kNL, b));
      ASSERT_TRUE(m);
      uint64_t best = 0;
      for (uint64_t c = 0; c <= 10; ++c) {
        if (c <= a && c <= b) best = c;
      }
      EXPECT_EQ(m->nat_value(), best);
    }
  }
}

TEST(Grades, Omega) {
  EXPECT_EQ(sr_omega(kIV), iv(0, kInf));
  EXPECT_EQ(sr_omega(kZ), g(kZ, "w"));
  EXPECT_EQ(sr_omega(kNE), std::nullopt);
  EXPECT_EQ(sr_omega(kNL), std::nullopt);
}

TEST(Grades, Parse) {
  EXPECT_EQ(parse_grade("0..Inf", kIV), iv(0, kInf));
  EXPECT_EQ(parse_grade("2", kNE), nat(kNE, 2));
  EXPECT_EQ(parse_grade("w", kZ), Grade::zom(Zom::kMany));
  EXPECT_EQ(show_grade(iv(0, kInf)), "0..Inf");
}

TEST(Grades, ParseErrorsCarryAColumn) {
  auto expect_error = [](const char* text, SemiringId sr, int col) {
    try {
      parse_grade(text, sr);
      ADD_FAILURE() << "accepted " << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Code::kSyntax) << text;
      EXPECT_EQ(e.position().col, col) << text;
    }
  };
  expect_error("3..1", kIV, 1);
  expect_error("1..", kIV, 4);
  expect_error("x", kNE, 1);
  expect_error("2", kZ, 1);
  expect_error("0..1", kNE, 1);
}

TEST(Grades, MixedSemiringsAreRejected) {
  try {
    sr_add(nat(kNE, 1), nat(kNL, 1));
    ADD_FAILURE() << "mixed addition accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Code::kMixedSemiring);
  }
  EXPECT_THROW(sr_leq(iv(0, 1), g(kZ, "1")), Error);
  EXPECT_THROW(sr_meet(iv(0, 1), g(kZ, "1")), Error);
}

}  // namespace
}  // namespace grlin
