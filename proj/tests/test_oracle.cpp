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
#include <set>
#include <sstream>

#include "doctest.h"
#include "pbihs/checker.hpp"
#include "pbihs/oracle.hpp"
#include "support/generators.hpp"

namespace pbihs {
namespace {

Lit x(uint32_t v) { return Lit::positive(Var{v}); }
Lit nx(uint32_t v) { return Lit::negative(Var{v}); }

PbConstraint ge(std::vector<Term> terms, Int degree) { return PbConstraint{std::move(terms), degree, std::nullopt}; }

Oracle make(uint32_t n, const std::vector<PbConstraint>& f) {
  Oracle o(n);
  for (const PbConstraint& c : f) o.add_constraint(c);
  return o;
}

TEST_CASE("assumptions contradicting a clause give that clause as core") {
  Oracle o = make(2, {ge({{1, x(1)}, {1, x(2)}}, 1)});
  const std::vector<Lit> a{nx(1), nx(2)};
  REQUIRE(o.solve(a) == Oracle::Status::kUnsat);
  CHECK(o.core() == ge({{1, x(1)}, {1, x(2)}}, 1));
  CHECK_FALSE(o.root_unsat());
}

TEST_CASE("a unique completion is found") {
  Oracle o = make(2, {ge({{1, x(1)}, {1, x(2)}}, 1)});
  const std::vector<Lit> a{nx(1)};
  REQUIRE(o.solve(a) == Oracle::Status::kSat);
  CHECK_FALSE(o.model().value(Var{1}));
  CHECK(o.model().value(Var{2}));
}

TEST_CASE("a globally infeasible formula yields the empty core") {
  Oracle o(1);
  o.add_constraint(ge({{1, x(1)}}, 1));
  CHECK_FALSE(o.add_constraint(ge({{1, nx(1)}}, 1)));
  REQUIRE(o.solve() == Oracle::Status::kUnsat);
  CHECK(o.core().terms.empty());
  CHECK(o.core().degree == 1);
  CHECK(o.root_unsat());
}

TEST_CASE("general PB propagation") {
  // 3x1 + 2x2 + x3 >= 4 with ~x1 is infeasible; with ~x2 forces x1 and x3.
  Oracle o = make(3, {ge({{3, x(1)}, {2, x(2)}, {1, x(3)}}, 4)});
  const std::vector<Lit> a1{nx(1)};
  CHECK(o.solve(a1) == Oracle::Status::kUnsat);
  CHECK(o.core() == ge({{1, x(1)}}, 1));
  const std::vector<Lit> a2{nx(2)};
  REQUIRE(o.solve(a2) == Oracle::Status::kSat);
  CHECK(o.model().value(Var{1}));
  CHECK(o.model().value(Var{3}));
}

TEST_CASE("models satisfy formula and assumptions; cores are entailed and falsified by the assumptions") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 300; ++i) {
    const Instance inst = testing::random_instance(rng);
    Oracle o = make(inst.num_vars, inst.constraints);
    const bool feasible = testing::brute_force(inst).optimum.has_value();
    for (int q = 0; q < 5; ++q) {
      std::vector<Lit> a;
      for (uint32_t v = 1; v <= inst.num_vars; ++v) {
        if (testing::uniform(rng, 0, 2) == 0) a.push_back(Lit::make(Var{v}, testing::uniform(rng, 0, 1) == 1));
      }
      const Oracle::Status s = o.solve(a);
      if (s == Oracle::Status::kSat) {
        REQUIRE(feasible);
        for (const PbConstraint& c : inst.constraints) CHECK(evaluate(c, o.model()));
        for (Lit l : a) CHECK(o.model().value(l));
      } else {
        REQUIRE(s == Oracle::Status::kUnsat);
        const PbConstraint& core = o.core();
        CHECK(entailed_by_bruteforce(inst.constraints, core));
        std::set<Lit> negated;
        for (Lit l : a) negated.insert(~l);
        for (const Term& t : core.terms) CHECK(negated.contains(t.lit));
        if (!feasible) CHECK(core.terms.empty());
      }
    }
  }
}

TEST_CASE("extract_cores on a single clause") {
  Oracle o = make(2, {ge({{1, x(1)}, {1, x(2)}}, 1)});
  Objective obj;
  obj.terms = {{1, x(1)}, {1, x(2)}};
  Assignment gamma(2);
  gamma.set(Var{1}, false);
  gamma.set(Var{2}, false);
  const ExtractCoresResult r = extract_cores(o, obj, gamma, 2);
  REQUIRE(r.new_cores.size() == 1);
  CHECK(r.new_cores[0].constraint == ge({{1, x(1)}, {1, x(2)}}, 1));
  CHECK(cost(obj, r.witness) == 1);
}

TEST_CASE("extract_cores finds several cores in one call") {
  const std::vector<PbConstraint> f{ge({{1, x(1)}, {1, x(2)}}, 1), ge({{1, x(1)}, {1, x(3)}}, 1)};
  Oracle o = make(3, f);
  Objective obj;
  obj.terms = {{1, x(1)}, {1, x(2)}, {1, x(3)}};
  Assignment gamma(3);
  for (uint32_t v = 1; v <= 3; ++v) gamma.set(Var{v}, false);
  // Unit weights: the first core relaxes x1, after which x1 = 1 also
  // satisfies the second clause.
  ExtractCoresResult r = extract_cores(o, obj, gamma, 3);
  CHECK(r.new_cores.size() == 1);
  for (const PbConstraint& c : f) CHECK(evaluate(c, r.witness));
  // With x1 heavier it stays assumed after the first core, so the second
  // clause conflicts in the same call.
  Oracle o2 = make(3, f);
  obj.terms[0].coef = 2;
  r = extract_cores(o2, obj, gamma, 3);
  REQUIRE(r.new_cores.size() == 2);
  std::set<Var> covered;
  for (const Core& c : r.new_cores) {
    CHECK(entailed_by_bruteforce(f, c.constraint));
    for (const Term& t : c.constraint.terms) covered.insert(t.lit.var());
  }
  CHECK(covered.size() == 3);
  for (const PbConstraint& c : f) CHECK(evaluate(c, r.witness));
}

TEST_CASE("extract_cores with an extendable gamma returns no cores") {
  Oracle o = make(2, {ge({{1, x(1)}, {1, x(2)}}, 1)});
  Objective obj;
  obj.terms = {{1, x(1)}, {1, x(2)}};
  Assignment gamma(2);
  gamma.set(Var{1}, true);
  gamma.set(Var{2}, false);
  const ExtractCoresResult r = extract_cores(o, obj, gamma, 2);
  CHECK(r.new_cores.empty());
  CHECK(cost(obj, r.witness) == 1);
}

TEST_CASE("extract_cores on random instances") {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 300; ++i) {
    const Instance inst = testing::random_feasible_instance(rng);
    Oracle o = make(inst.num_vars, inst.constraints);
    std::set<Var> obj_vars;
    for (const Term& t : inst.objective.terms) obj_vars.insert(t.lit.var());
    for (int q = 0; q < 3; ++q) {
      Assignment gamma(inst.num_vars);
      for (uint32_t v = 1; v <= inst.num_vars; ++v) gamma.set(Var{v}, testing::uniform(rng, 0, 2) == 0);
      const ExtractCoresResult r = extract_cores(o, inst.objective, gamma, inst.num_vars);
      REQUIRE_FALSE(r.interrupted);
      for (const PbConstraint& c : inst.constraints) CHECK(evaluate(c, r.witness));
      for (const Core& core : r.new_cores) {
        CHECK(entailed_by_bruteforce(inst.constraints, core.constraint));
        for (const Term& t : core.constraint.terms) CHECK(obj_vars.contains(t.lit.var()));
        // gamma sets every assumption true, so it falsifies every core.
        CHECK_FALSE(evaluate(core.constraint, gamma));
      }
    }
  }
}

TEST_CASE("extract_cores throws on an infeasible formula") {
  Oracle o(1);
  o.add_constraint(ge({{1, x(1)}}, 1));
  o.add_constraint(ge({{1, nx(1)}}, 1));
  Objective obj;
  obj.terms = {{1, x(1)}};
  Assignment gamma(1);
  gamma.set(Var{1}, false);
  CHECK_THROWS_AS(extract_cores(o, obj, gamma, 1), std::runtime_error);
}

TEST_CASE("conflict budget and terminator interrupt the search") {
  // Pigeonhole 6 into 5 needs many conflicts.
  const uint32_t p = 6;
  const uint32_t h = 5;
  auto var = [&](uint32_t i, uint32_t j) { return Var{i * h + j + 1}; };
  Oracle o(p * h);
  for (uint32_t i = 0; i < p; ++i) {
    std::vector<Term> t;
    for (uint32_t j = 0; j < h; ++j) t.push_back({1, Lit::positive(var(i, j))});
    o.add_constraint(ge(t, 1));
  }
  for (uint32_t j = 0; j < h; ++j) {
    std::vector<Term> t;
    for (uint32_t i = 0; i < p; ++i) t.push_back({1, Lit::negative(var(i, j))});
    o.add_constraint(ge(t, p - 1));
  }
  o.set_conflict_budget(3);
  CHECK(o.solve() == Oracle::Status::kInterrupted);
  o.set_conflict_budget(-1);
  o.set_terminator([] { return true; });
  CHECK(o.solve() == Oracle::Status::kInterrupted);
  o.set_terminator({});
  CHECK(o.solve() == Oracle::Status::kUnsat);
}

TEST_CASE("every logged learned clause is accepted by reverse unit propagation") {
  std::mt19937_64 rng(37);
  for (int i = 0; i < 100; ++i) {
    const Instance inst = testing::random_instance(rng);
    std::ostringstream out;
    ProofLogger log(&out, inst.constraints.size());
    Oracle o(inst.num_vars, &log);
    for (const PbConstraint& c : inst.constraints) o.add_constraint(c);
    std::vector<Lit> a;
    for (uint32_t v = 1; v <= inst.num_vars; v += 2) a.push_back(nx(v));
    o.solve(a);
    o.solve();
    const CheckResult r = check(inst, out.str());
    CAPTURE(r.reason);
    // No conclusion is written; everything before it must check.
    CHECK(r.reason == "proof has no conclusion");
  }
}

TEST_CASE("identical inputs give identical runs") {
  std::mt19937_64 rng(43);
  for (int i = 0; i < 50; ++i) {
    const Instance inst = testing::random_instance(rng);
    Oracle a = make(inst.num_vars, inst.constraints);
    Oracle b = make(inst.num_vars, inst.constraints);
    const auto sa = a.solve();
    const auto sb = b.solve();
    CHECK(sa == sb);
    if (sa == Oracle::Status::kSat) CHECK(a.model() == b.model());
    CHECK(a.ticks() == b.ticks());
  }
}

}  // namespace
}  // namespace pbihs
