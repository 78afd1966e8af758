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

// Test oracles and instance generators. Nothing here calls solver code
// beyond the pb-core data types and normalize().

#ifndef PBIHS_TESTS_SUPPORT_GENERATORS_HPP_
#define PBIHS_TESTS_SUPPORT_GENERATORS_HPP_

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "pbihs/core.hpp"

namespace pbihs::testing {

struct BruteForceResult {
  std::optional<Int> optimum;  // absent when infeasible
  Assignment witness;
};

/// Exhaustive minimization over variables 1..num_vars. Coefficients must
/// fit in 32 bits.
inline BruteForceResult brute_force(std::span<const PbConstraint> constraints, const Objective& objective,
                                    uint32_t num_vars) {
  if (num_vars > 24) throw std::invalid_argument("brute force limited to 24 variables");
  struct Row {
    std::vector<std::pair<uint32_t, int64_t>> pos;  // bit, coef of positive literal
    std::vector<std::pair<uint32_t, int64_t>> neg;
    int64_t degree;
  };
  auto small = [](const Int& v) {
    if (v > Int(1LL << 31) || v < Int(-(1LL << 31))) throw std::invalid_argument("coefficient too large");
    return v.to_int64();
  };
  std::vector<Row> rows;
  for (const PbConstraint& c : constraints) {
    Row r;
    r.degree = small(c.degree);
    for (const Term& t : c.terms) {
      if (t.lit.var().index > num_vars) throw std::invalid_argument("constraint mentions unknown variable");
      (t.lit.negated() ? r.neg : r.pos).emplace_back(t.lit.var().index - 1, small(t.coef));
    }
    rows.push_back(std::move(r));
  }
  std::vector<int64_t> obj_pos(num_vars, 0);
  int64_t obj_const = small(objective.constant);
  for (const Term& t : objective.terms) {
    const int64_t w = small(t.coef);
    if (t.lit.negated()) {
      obj_const += w;
      obj_pos[t.lit.var().index - 1] -= w;
    } else {
      obj_pos[t.lit.var().index - 1] += w;
    }
  }
  BruteForceResult out;
  std::optional<int64_t> best;
  uint64_t best_mask = 0;
  const uint64_t total = uint64_t{1} << num_vars;
  for (uint64_t mask = 0; mask < total; ++mask) {
    bool ok = true;
    for (const Row& r : rows) {
      int64_t lhs = 0;
      for (const auto& [bit, coef] : r.pos) lhs += ((mask >> bit) & 1) ? coef : 0;
      for (const auto& [bit, coef] : r.neg) lhs += ((mask >> bit) & 1) ? 0 : coef;
      if (lhs < r.degree) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    int64_t c = obj_const;
    for (uint32_t b = 0; b < num_vars; ++b) c += ((mask >> b) & 1) ? obj_pos[b] : 0;
    if (!best || c < *best) {
      best = c;
      best_mask = mask;
    }
  }
  if (best) {
    out.optimum = Int(static_cast<long long>(*best));
    out.witness = Assignment(num_vars);
    for (uint32_t b = 0; b < num_vars; ++b) out.witness.set(Var{b + 1}, ((best_mask >> b) & 1) != 0);
  }
  return out;
}

inline BruteForceResult brute_force(const Instance& inst) {
  return brute_force(inst.constraints, inst.objective, inst.num_vars);
}

struct RandomParams {
  uint32_t min_vars = 2;
  uint32_t max_vars = 12;
  uint32_t max_constraints = 15;
  int64_t max_coef = 10;
  int64_t max_weight = 10;
  uint32_t max_arity = 5;
};

inline int64_t uniform(std::mt19937_64& rng, int64_t lo, int64_t hi) {
  return std::uniform_int_distribution<int64_t>(lo, hi)(rng);
}

inline void add_raw(Instance& inst, std::vector<Term> terms, Relation rel, int64_t rhs) {
  for (PbConstraint& c : normalize(terms, rel, Int(static_cast<long long>(rhs)))) {
    inst.constraints.push_back(std::move(c));
  }
}

/// Random instance; may be infeasible (callers filter with brute_force).
inline Instance random_instance(std::mt19937_64& rng, const RandomParams& p = {}) {
  Instance inst;
  inst.num_vars = static_cast<uint32_t>(uniform(rng, p.min_vars, p.max_vars));
  inst.has_objective = true;
  const auto m = static_cast<uint32_t>(uniform(rng, 1, p.max_constraints));
  std::vector<uint32_t> vars(inst.num_vars);
  std::iota(vars.begin(), vars.end(), 1);
  for (uint32_t i = 0; i < m; ++i) {
    std::shuffle(vars.begin(), vars.end(), rng);
    const auto k = static_cast<uint32_t>(uniform(rng, 1, std::min(p.max_arity, inst.num_vars)));
    std::vector<Term> terms;
    int64_t lo = 0;
    int64_t hi = 0;
    for (uint32_t j = 0; j < k; ++j) {
      int64_t a = uniform(rng, 1, p.max_coef);
      if (uniform(rng, 0, 3) == 0) a = -a;
      (a < 0 ? lo : hi) += a;
      terms.push_back({Int(static_cast<long long>(a)), Lit::make(Var{vars[j]}, uniform(rng, 0, 4) == 0)});
    }
    const int64_t roll = uniform(rng, 0, 9);
    const Relation rel = roll < 6 ? Relation::kGe : roll < 9 ? Relation::kLe : Relation::kEq;
    const int64_t rhs = uniform(rng, lo, hi);
    add_raw(inst, std::move(terms), rel, rhs);
  }
  std::vector<Term> obj;
  for (uint32_t v = 1; v <= inst.num_vars; ++v) {
    if (uniform(rng, 0, 4) == 0) continue;
    int64_t w = uniform(rng, 1, p.max_weight);
    if (uniform(rng, 0, 4) == 0) w = -w;
    obj.push_back({Int(static_cast<long long>(w)), Lit::positive(Var{v})});
  }
  inst.objective = normalize_objective(obj, Int(static_cast<long long>(uniform(rng, 0, 3))));
  return inst;
}

/// Random feasible instance per the acceptance parameters.
inline Instance random_feasible_instance(std::mt19937_64& rng, const RandomParams& p = {}) {
  for (;;) {
    Instance inst = random_instance(rng, p);
    if (brute_force(inst).optimum) return inst;
  }
}

/// Weighted vertex cover on G(n, edge_percent).
inline Instance vertex_cover(std::mt19937_64& rng, uint32_t n, uint32_t edge_percent) {
  Instance inst;
  inst.num_vars = n;
  inst.has_objective = true;
  for (uint32_t u = 1; u <= n; ++u) {
    for (uint32_t v = u + 1; v <= n; ++v) {
      if (uniform(rng, 0, 99) < edge_percent) {
        add_raw(inst, {{1, Lit::positive(Var{u})}, {1, Lit::positive(Var{v})}}, Relation::kGe, 1);
      }
    }
  }
  std::vector<Term> obj;
  for (uint32_t v = 1; v <= n; ++v) obj.push_back({Int(static_cast<long long>(uniform(rng, 1, 10))), Lit::positive(Var{v})});
  inst.objective = normalize_objective(obj, 0);
  return inst;
}

/// 0-1 knapsack with pairwise conflicts: maximize value, i.e. minimize the
/// value of unpicked items.
inline Instance knapsack_conflicts(std::mt19937_64& rng, uint32_t n, uint32_t conflict_permille) {
  Instance inst;
  inst.num_vars = n;
  inst.has_objective = true;
  std::vector<Term> weight;
  int64_t total = 0;
  std::vector<Term> obj;
  for (uint32_t v = 1; v <= n; ++v) {
    const int64_t w = uniform(rng, 1, 20);
    total += w;
    weight.push_back({Int(static_cast<long long>(w)), Lit::positive(Var{v})});
    obj.push_back({Int(static_cast<long long>(uniform(rng, 1, 20))), Lit::negative(Var{v})});
  }
  add_raw(inst, weight, Relation::kLe, total / 3);
  for (uint32_t u = 1; u <= n; ++u) {
    for (uint32_t v = u + 1; v <= n; ++v) {
      if (uniform(rng, 0, 999) < conflict_permille) {
        add_raw(inst, {{1, Lit::positive(Var{u})}, {1, Lit::positive(Var{v})}}, Relation::kLe, 1);
      }
    }
  }
  inst.objective = normalize_objective(obj, 0);
  return inst;
}

}  // namespace pbihs::testing

#endif  // PBIHS_TESTS_SUPPORT_GENERATORS_HPP_
