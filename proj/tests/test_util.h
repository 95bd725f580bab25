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

#ifndef GRLIN_TESTS_TEST_UTIL_H_
#define GRLIN_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "grlin/grades.h"
#include "grlin/lawcheck.h"
#include "grlin/syntax.h"

namespace grlin::testing {

inline std::string corpus_path(const std::string& rel) {
  return std::string(GRLIN_CORPUS_DIR) + "/" + rel;
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::vector<std::string> corpus_files(const std::string& dir) {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(corpus_path(dir))) {
    if (e.path().extension() == ".grm") out.push_back(e.path().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Random syntax, not necessarily well-typed. Grades come from `sr`.
class SyntaxGen {
 public:
  SyntaxGen(uint64_t seed, SemiringId sr) : rng_(seed), sr_(sr) {}

  Type type(int depth) {
    if (depth <= 1) return leaf_type();
    switch (rng_.below(7)) {
      case 0:
        return ty_fun(type(depth - 1), type(depth - 1));
      case 1:
        return ty_tensor(type(depth - 1), type(depth - 1));
      case 2:
        return ty_sum(type(depth - 1), type(depth - 1));
      case 3:
        return ty_box(grade(), type(depth - 1));
      case 4: {
        std::string x = rng_.coin() ? "X" : "Y";
        return ty_mu(x, ty_sum(ty_unit(), ty_tensor(type(depth - 1),
                                                    ty_recvar(x))));
      }
      default:
        return leaf_type();
    }
  }

  Pattern pattern(int depth, std::vector<std::string>& bound) {
    if (depth <= 1) return leaf_pattern(bound);
    switch (rng_.below(5)) {
      case 0:
        return p_box(pattern(depth - 1, bound));
      case 1:
        return p_con(ConKind::kPair, {pattern(depth - 1, bound),
                                      pattern(depth - 1, bound)});
      case 2:
        return p_con(rng_.coin() ? ConKind::kInl : ConKind::kInr,
                     {pattern(depth - 1, bound)});
      default:
        return leaf_pattern(bound);
    }
  }

  Term term(int depth) {
    if (depth <= 1) return leaf_term();
    switch (rng_.below(11)) {
      case 0:
        return t_app(term(depth - 1), term(depth - 1));
      case 1:
        return t_lam(name(), term(depth - 1));
      case 2:
        return t_promote(term(depth - 1));
      case 3:
        return t_pair(term(depth - 1), term(depth - 1));
      case 4:
        return rng_.coin() ? t_inl(term(depth - 1)) : t_inr(term(depth - 1));
      case 5: {
        std::vector<Branch> bs;
        int n = 1 + static_cast<int>(rng_.below(3));
        for (int i = 0; i < n; ++i) {
          std::vector<std::string> bound;
          Pattern p = pattern(3, bound);
          bs.push_back({p, term(depth - 1)});
        }
        return t_case(term(depth - 1), std::move(bs));
      }
      case 6:
        return t_letrec(name(), term(depth - 1), term(depth - 1));
      case 7:
        return t_ann(term(depth - 1), type(3));
      case 8: {
        static const DeriveKind kinds[] = {
            DeriveKind::kPush, DeriveKind::kPull, DeriveKind::kDrop,
            DeriveKind::kCopyShape, DeriveKind::kFmap};
        return t_derive(kinds[rng_.below(5)], type(3));
      }
      default:
        return leaf_term();
    }
  }

  Grade grade() {
    auto gs = sample_grades(sr_, 3);
    return gs[rng_.below(gs.size())];
  }

 private:
  std::string name() {
    static const char* names[] = {"x", "y", "z", "f", "w", "x1"};
    return names[rng_.below(6)];
  }

  Type leaf_type() {
    switch (rng_.below(5)) {
      case 0:
        return ty_unit();
      case 1:
        return ty_int();
      case 2:
        return ty_base(BaseKind::kRes);
      default:
        return ty_var(rng_.coin() ? "a" : "b");
    }
  }

  Pattern leaf_pattern(std::vector<std::string>& bound) {
    switch (rng_.below(4)) {
      case 0:
        return p_wild();
      case 1:
        return p_int(static_cast<int64_t>(rng_.below(5)));
      case 2:
        return p_con(ConKind::kUnit, {});
      default: {
        std::string n = name();
        while (std::find(bound.begin(), bound.end(), n) != bound.end()) {
          n += "'";
        }
        bound.push_back(n);
        return p_var(n);
      }
    }
  }

  Term leaf_term() {
    switch (rng_.below(3)) {
      case 0:
        return t_unit();
      case 1:
        return t_int(static_cast<int64_t>(rng_.below(100)));
      default:
        return t_var(name());
    }
  }

  Rng rng_;
  SemiringId sr_;
};

}  // namespace grlin::testing

#endif  // GRLIN_TESTS_TEST_UTIL_H_
