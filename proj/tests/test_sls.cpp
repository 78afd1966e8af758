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
#include <vector>

#include "doctest.h"
#include "pbihs/sls.hpp"
#include "support/generators.hpp"

namespace pbihs {
namespace {

Lit x(uint32_t v) { return Lit::positive(Var{v}); }

PbConstraint ge(std::vector<Term> terms, Int degree) { return PbConstraint{std::move(terms), degree, std::nullopt}; }

Assignment zeros(uint32_t n) {
  Assignment a(n);
  for (uint32_t v = 1; v <= n; ++v) a.set(Var{v}, false);
  return a;
}

TEST_CASE("use_sls timing policy") {
  const std::vector<uint64_t> none;
  CHECK(use_sls(none, none));
  const std::vector<uint64_t> opt_fast{5, 5, 5};
  const std::vector<uint64_t> opt_slow{500, 500, 500};
  const std::vector<uint64_t> sls{50, 50, 50};
  CHECK_FALSE(use_sls(opt_fast, sls));
  CHECK(use_sls(opt_slow, sls));
  // Fewer than three samples of a kind keeps SLS on.
  const std::vector<uint64_t> two{5, 5};
  CHECK(use_sls(two, sls));
  SlsState state;
  CHECK(use_sls(state));
}

TEST_CASE("x + y >= 1 is repaired to cost 1 within two flips") {
  const std::vector<PbConstraint> cores{ge({{1, x(1)}, {1, x(2)}}, 1)};
  Objective o;
  o.terms = {{1, x(1)}, {1, x(2)}};
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    SlsConfig cfg;
    cfg.seed = seed;
    SlsState state(cfg);
    const auto a = sls_search(cores, o, 2, state, 2);
    REQUIRE(a);
    CHECK(evaluate(cores[0], *a));
    CHECK(cost(o, *a) == 1);
  }
}

TEST_CASE("an empty core set returns the all-zero assignment") {
  Objective o;
  o.terms = {{3, x(1)}};
  o.constant = 7;
  SlsState state;
  const auto a = sls_search({}, o, 3, state);
  REQUIRE(a);
  CHECK(*a == zeros(3));
  CHECK(cost(o, *a) == 7);
}

TEST_CASE("a zero flip budget from an infeasible start returns nothing") {
  const std::vector<PbConstraint> cores{ge({{1, x(1)}, {1, x(2)}}, 2)};
  Objective o;
  o.terms = {{1, x(1)}, {1, x(2)}};
  SlsConfig cfg;
  cfg.rho_percent = 0;
  SlsState state(cfg);
  CHECK_FALSE(sls_search(cores, o, 2, state, 0));
}

TEST_CASE("perturbation flips exactly ceil(rho * n) variables") {
  std::mt19937_64 rng(3);
  for (uint32_t n : {1u, 2u, 7u, 10u, 33u}) {
    std::vector<Var> vars;
    for (uint32_t v = 1; v <= n; ++v) vars.push_back(Var{v});
    Assignment start(n + 2);
    for (uint32_t v = 1; v <= n + 2; ++v) start.set(Var{v}, (v % 3) == 0);
    for (uint32_t rho : {0u, 1u, 30u, 50u, 100u}) {
      const Assignment p = perturb(start, vars, rho, rng);
      uint32_t diff = 0;
      for (uint32_t v = 1; v <= n + 2; ++v) diff += p.value(Var{v}) != start.value(Var{v}) ? 1 : 0;
      CHECK(diff == (rho * n + 99) / 100);
      // Variables outside the pool are untouched.
      CHECK(p.value(Var{n + 1}) == start.value(Var{n + 1}));
      CHECK(p.value(Var{n + 2}) == start.value(Var{n + 2}));
    }
  }
}

TEST_CASE("flip scores") {
  const std::vector<PbConstraint> cores{ge({{1, x(1)}}, 1), ge({{1, x(2)}, {1, x(3)}}, 1)};
  Objective o;
  o.terms = {{3, x(3)}};
  SlsScorer s(cores, o, 4, {1, 1}, 1);
  Assignment a = zeros(4);
  s.reset(a);
  CHECK(s.num_unsat() == 2);
  // x1 alone repairs a unit constraint and costs nothing.
  CHECK(s.score(Var{1}) > 0);
  // x4 is mentioned nowhere.
  CHECK(s.score(Var{4}) == 0);
  s.flip(Var{1});
  s.flip(Var{2});
  CHECK(s.num_unsat() == 0);
  // All satisfied: x3 only adds objective weight 3.
  CHECK(s.score(Var{3}) == -3);
  CHECK(s.cost() == 0);
}

TEST_CASE("scores equal the weighted penalty and cost change") {
  std::mt19937_64 rng(51);
  for (int i = 0; i < 100; ++i) {
    const Instance inst = testing::random_instance(rng);
    std::vector<Int> w;
    for (size_t c = 0; c < inst.constraints.size(); ++c) w.push_back(static_cast<long long>(testing::uniform(rng, 1, 4)));
    SlsScorer s(inst.constraints, inst.objective, inst.num_vars, w, 2);
    Assignment a(inst.num_vars);
    for (uint32_t v = 1; v <= inst.num_vars; ++v) a.set(Var{v}, testing::uniform(rng, 0, 1) == 1);
    s.reset(a);
    auto energy = [&](const Assignment& b) {
      Int e = Int(2) * cost(inst.objective, b);
      for (size_t c = 0; c < inst.constraints.size(); ++c) {
        Int lhs = 0;
        for (const Term& t : inst.constraints[c].terms) lhs += b.value(t.lit) ? t.coef : Int(0);
        e += w[c] * max(Int(0), inst.constraints[c].degree - lhs);
      }
      return e;
    };
    for (uint32_t v = 1; v <= inst.num_vars; ++v) {
      Assignment b = a;
      b.set(Var{v}, !a.value(Var{v}));
      CHECK(s.score(Var{v}) == energy(a) - energy(b));
    }
    CHECK(s.cost() == cost(inst.objective, a));
  }
}

TEST_CASE("returned assignments satisfy every core and have exact cost") {
  std::mt19937_64 rng(53);
  int found = 0;
  for (int i = 0; i < 300; ++i) {
    const Instance inst = testing::random_feasible_instance(rng);
    SlsConfig cfg;
    cfg.seed = static_cast<uint64_t>(i);
    SlsState state(cfg);
    for (int call = 0; call < 3; ++call) {
      const auto a = sls_search(inst.constraints, inst.objective, inst.num_vars, state);
      if (!a) continue;
      ++found;
      CHECK(a->complete());
      for (const PbConstraint& c : inst.constraints) CHECK(evaluate(c, *a));
    }
  }
  // Non-vacuity: most calls on feasible core sets succeed.
  CAPTURE(found);
  CHECK(found > 450);
}

TEST_CASE("same seed and cores give the same result") {
  std::mt19937_64 rng(57);
  for (int i = 0; i < 50; ++i) {
    const Instance inst = testing::random_instance(rng);
    SlsState a;
    SlsState b;
    for (int call = 0; call < 3; ++call) {
      const auto ra = sls_search(inst.constraints, inst.objective, inst.num_vars, a);
      const auto rb = sls_search(inst.constraints, inst.objective, inst.num_vars, b);
      REQUIRE(ra.has_value() == rb.has_value());
      if (ra) CHECK(*ra == *rb);
    }
    CHECK(a.sls_ticks() == b.sls_ticks());
  }
}

TEST_CASE("sampled candidate selection on many variables still finds solutions") {
  // 1200 clauses x_i + x_{i+1} >= 1 exceed the sampling threshold.
  const uint32_t n = 1200;
  std::vector<PbConstraint> cores;
  Objective o;
  for (uint32_t v = 1; v < n; ++v) cores.push_back(ge({{1, x(v)}, {1, x(v + 1)}}, 1));
  for (uint32_t v = 1; v <= n; ++v) o.terms.push_back({1, x(v)});
  SlsState state;
  const auto a = sls_search(cores, o, n, state);
  REQUIRE(a);
  for (const PbConstraint& c : cores) CHECK(evaluate(c, *a));
}

}  // namespace
}  // namespace pbihs
