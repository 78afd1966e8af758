// Copyright 2026 The pbihs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <random>

#include "doctest.h"
#include "pbihs/core.hpp"
#include "support/generators.hpp"

namespace pbihs {
namespace {

Lit x(uint32_t v) { return Lit::positive(Var{v}); }
Lit nx(uint32_t v) { return Lit::negative(Var{v}); }

PbConstraint ge(std::vector<Term> terms, Int degree) {
  auto out = normalize(terms, Relation::kGe, degree);
  REQUIRE(out.size() == 1);
  return out.front();
}

Assignment assign(std::initializer_list<bool> values) {
  Assignment a(static_cast<uint32_t>(values.size()));
  uint32_t v = 1;
  for (bool b : values) a.set(Var{v++}, b);
  return a;
}

Assignment from_mask(uint32_t n, uint64_t mask) {
  Assignment a(n);
  for (uint32_t v = 1; v <= n; ++v) a.set(Var{v}, ((mask >> (v - 1)) & 1) != 0);
  return a;
}

TEST_CASE("literals encode variable and polarity") {
  const Lit l = Lit::positive(Var{3});
  CHECK(l.var().index == 3);
  CHECK_FALSE(l.negated());
  CHECK((~l).negated());
  CHECK(~~l == l);
  CHECK(l.to_string() == "x3");
  CHECK((~l).to_string() == "~x3");
  CHECK(Lit::make(Var{3}, true) == ~l);
}

TEST_CASE("normalize flips negative coefficients") {
  const auto out = normalize(std::vector<Term>{{-2, x(1)}}, Relation::kGe, -1);
  REQUIRE(out.size() == 1);
  CHECK(out[0].terms == std::vector<Term>{{2, nx(1)}});
  CHECK(out[0].degree == 1);
}

TEST_CASE("normalize clamps the degree at zero") {
  const auto out = normalize(std::vector<Term>{{3, x(1)}, {2, x(2)}}, Relation::kGe, 0);
  REQUIRE(out.size() == 1);
  CHECK(out[0].terms == std::vector<Term>{{3, x(1)}, {2, x(2)}});
  CHECK(out[0].degree == 0);
  CHECK(out[0].is_trivial());
  const auto neg = normalize(std::vector<Term>{{1, x(1)}}, Relation::kGe, -5);
  CHECK(neg[0].degree == 0);
}

TEST_CASE("normalize merges duplicate variables") {
  auto out = normalize(std::vector<Term>{{1, x(1)}, {1, x(1)}}, Relation::kGe, 1);
  CHECK(out[0].terms == std::vector<Term>{{2, x(1)}});
  CHECK(out[0].degree == 1);
  // x1 + ~x1 is the constant 1.
  out = normalize(std::vector<Term>{{1, x(1)}, {1, nx(1)}, {1, x(2)}}, Relation::kGe, 2);
  CHECK(out[0].terms == std::vector<Term>{{1, x(2)}});
  CHECK(out[0].degree == 1);
}

TEST_CASE("normalize splits equalities and converts <=") {
  auto out = normalize(std::vector<Term>{{1, x(1)}, {1, x(2)}}, Relation::kEq, 1);
  REQUIRE(out.size() == 2);
  CHECK(out[0] == ge({{1, x(1)}, {1, x(2)}}, 1));
  CHECK(out[1].terms == std::vector<Term>{{1, nx(1)}, {1, nx(2)}});
  CHECK(out[1].degree == 1);
  out = normalize(std::vector<Term>{{3, x(1)}}, Relation::kLe, 2);
  CHECK(out[0].terms == std::vector<Term>{{3, nx(1)}});
  CHECK(out[0].degree == 1);
}

TEST_CASE("normalize is idempotent and preserves satisfaction") {
  std::mt19937_64 rng(21);
  for (int iter = 0; iter < 500; ++iter) {
    const auto n = static_cast<uint32_t>(testing::uniform(rng, 1, 10));
    std::vector<Term> raw;
    const auto k = testing::uniform(rng, 1, 8);
    for (int j = 0; j < k; ++j) {
      raw.push_back({Int(static_cast<long long>(testing::uniform(rng, -10, 10))),
                     Lit::make(Var{static_cast<uint32_t>(testing::uniform(rng, 1, n))},
                               testing::uniform(rng, 0, 1) == 1)});
    }
    const Int rhs = static_cast<long long>(testing::uniform(rng, -20, 20));
    const auto rel = static_cast<Relation>(testing::uniform(rng, 0, 2));
    const auto norm = normalize(raw, rel, rhs);
    for (const PbConstraint& c : norm) {
      for (size_t i = 0; i < c.terms.size(); ++i) {
        CHECK(c.terms[i].coef > 0);
        if (i > 0) CHECK(c.terms[i - 1].lit.var() < c.terms[i].lit.var());
      }
      CHECK(c.degree >= 0);
      const auto again = normalize(c.terms, Relation::kGe, c.degree);
      REQUIRE(again.size() == 1);
      CHECK(again[0] == c);
    }
    for (uint64_t mask = 0; mask < (uint64_t{1} << n); ++mask) {
      const Assignment a = from_mask(n, mask);
      Int lhs = 0;
      for (const Term& t : raw) lhs += a.value(t.lit) ? t.coef : Int(0);
      const bool raw_sat = rel == Relation::kGe ? lhs >= rhs : rel == Relation::kLe ? lhs <= rhs : lhs == rhs;
      bool norm_sat = true;
      for (const PbConstraint& c : norm) norm_sat = norm_sat && evaluate(c, a);
      CHECK(raw_sat == norm_sat);
    }
  }
}

TEST_CASE("evaluate examples") {
  const PbConstraint c = ge({{2, x(1)}, {3, nx(2)}}, 3);
  CHECK(evaluate(c, assign({false, false})));
  CHECK_FALSE(evaluate(c, assign({true, true})));
  const PbConstraint trivial = ge({{1, x(1)}}, 0);
  CHECK(evaluate(trivial, assign({false})));
  CHECK(evaluate(trivial, assign({true})));
  CHECK_THROWS_AS(evaluate(c, Assignment(2)), ContractViolation);
}

TEST_CASE("cost examples") {
  const Objective o = normalize_objective(std::vector<Term>{{3, x(1)}, {2, x(2)}}, 5);
  CHECK(cost(o, assign({true, false})) == 8);
  CHECK(cost(o, assign({false, false})) == 5);
  CHECK(cost(Objective{}, assign({true})) == 0);
  CHECK_THROWS_AS(cost(o, Assignment(2)), ContractViolation);
}

TEST_CASE("negative objective weights move into the constant") {
  const Objective o = normalize_objective(std::vector<Term>{{-3, x(1)}, {2, x(2)}}, 1);
  CHECK(o.terms == std::vector<Term>{{3, nx(1)}, {2, x(2)}});
  CHECK(o.constant == -2);
  for (uint64_t mask = 0; mask < 4; ++mask) {
    const Assignment a = from_mask(2, mask);
    const Int expected = Int(-3) * (a.value(Var{1}) ? 1 : 0) + Int(2) * (a.value(Var{2}) ? 1 : 0) + 1;
    CHECK(cost(o, a) == expected);
  }
}

TEST_CASE("cost is the constant plus the weights of true literals") {
  std::mt19937_64 rng(5);
  for (int iter = 0; iter < 100; ++iter) {
    const Instance inst = testing::random_instance(rng);
    for (int s = 0; s < 10; ++s) {
      const Assignment a = from_mask(inst.num_vars, rng());
      Int sum = inst.objective.constant;
      for (const Term& t : inst.objective.terms) {
        if (a.value(t.lit)) sum += t.coef;
      }
      CHECK(cost(inst.objective, a) == sum);
    }
  }
}

TEST_CASE("entailment examples") {
  const PbConstraint xy = ge({{1, x(1)}, {1, x(2)}}, 1);
  CHECK(entailed_by_bruteforce(std::vector<PbConstraint>{xy}, xy));
  const std::vector<PbConstraint> f{ge({{1, x(1)}}, 1), ge({{1, x(1)}, {1, x(2)}}, 2)};
  CHECK(entailed_by_bruteforce(f, ge({{1, x(2)}}, 1)));
  CHECK_FALSE(entailed_by_bruteforce(std::vector<PbConstraint>{xy}, ge({{1, x(1)}}, 1)));
}

TEST_CASE("entailment refuses too many variables") {
  std::vector<Term> terms;
  for (uint32_t v = 1; v <= kMaxBruteForceVars + 1; ++v) terms.push_back({1, x(v)});
  const PbConstraint big = ge(terms, 1);
  CHECK_THROWS(entailed_by_bruteforce(std::vector<PbConstraint>{}, big));
}

TEST_CASE("negate is the exact complement") {
  std::mt19937_64 rng(9);
  for (int iter = 0; iter < 100; ++iter) {
    const Instance inst = testing::random_instance(rng);
    for (const PbConstraint& c : inst.constraints) {
      const PbConstraint n = negate(c);
      for (uint64_t mask = 0; mask < (uint64_t{1} << inst.num_vars); mask += 7) {
        const Assignment a = from_mask(inst.num_vars, mask);
        CHECK(evaluate(c, a) != evaluate(n, a));
      }
    }
  }
}

TEST_CASE("bounds reject weakening and crossing") {
  Bounds b;
  CHECK_FALSE(b.closed());
  b.lower_upper(10);
  b.raise_lower(3);
  CHECK_THROWS_AS(b.raise_lower(2), ContractViolation);
  CHECK_THROWS_AS(b.lower_upper(11), ContractViolation);
  CHECK_THROWS_AS(b.raise_lower(11), ContractViolation);
  b.raise_lower(10);
  CHECK(b.closed());
}

TEST_CASE("assignment bookkeeping") {
  Assignment a(3);
  CHECK_FALSE(a.complete());
  a.set(Var{1}, true);
  a.set(Var{2}, false);
  a.set(Var{3}, true);
  CHECK(a.complete());
  CHECK(a.value(Lit::negative(Var{2})));
  const Assignment r = a.restricted(2);
  CHECK(r.num_vars() == 2);
  CHECK(r.value(Var{1}));
  a.unset(Var{3});
  CHECK_FALSE(a.assigned(Var{3}));
  CHECK_THROWS_AS(a.value(Var{3}), ContractViolation);
}

TEST_CASE("constraint helpers") {
  const PbConstraint c = ge({{1, x(1)}, {1, nx(2)}}, 1);
  CHECK(c.is_clause());
  CHECK(c.coef_sum() == 2);
  CHECK_FALSE(ge({{2, x(1)}, {1, x(2)}}, 2).is_clause());
  CHECK(ge({{1, x(1)}}, 2).is_contradiction());
  const auto vars = collect_vars(std::vector<PbConstraint>{c, ge({{1, x(5)}}, 1)});
  REQUIRE(vars.size() == 3);
  CHECK(vars[2].index == 5);
}

}  // namespace
}  // namespace pbihs
