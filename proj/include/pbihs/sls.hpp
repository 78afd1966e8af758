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

// Stochastic local search over a core set and an objective.

#ifndef PBIHS_SLS_HPP_
#define PBIHS_SLS_HPP_

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "pbihs/core.hpp"

namespace pbihs {

struct SlsConfig {
  uint32_t rho_percent = 30;       // share of variables perturbed in phase 2
  uint64_t flip_multiplier = 10;   // flips per phase = multiplier * n
  uint32_t smooth_percent = 30;    // chance of smoothing at a local optimum
  Int soft_weight = 1;             // weight of the objective in the score
  size_t bms_threshold = 1000;     // sample candidates above this many vars
  size_t bms_samples = 50;
  uint64_t seed = 1;
};

/// Persistent search state across calls. Constraint weights are kept per
/// core index; the core set may only grow between calls.
class SlsState {
 public:
  explicit SlsState(SlsConfig cfg = {}) : cfg_(cfg), rng_(cfg.seed) {}

  const SlsConfig& config() const { return cfg_; }
  std::mt19937_64& rng() { return rng_; }

  /// Starting point for the next call. Defaults to all-zero.
  void set_previous(Assignment a) { previous_ = std::move(a); }
  const std::optional<Assignment>& previous() const { return previous_; }

  std::vector<Int>& weights() { return weights_; }

  void record_sls_ticks(uint64_t t) { sls_ticks_.push_back(t); }
  void record_optimizer_ticks(uint64_t t) { opt_ticks_.push_back(t); }
  const std::vector<uint64_t>& sls_ticks() const { return sls_ticks_; }
  const std::vector<uint64_t>& optimizer_ticks() const { return opt_ticks_; }

  uint64_t calls = 0;
  uint64_t flips = 0;

 private:
  SlsConfig cfg_;
  std::mt19937_64 rng_;
  std::optional<Assignment> previous_;
  std::vector<Int> weights_;
  std::vector<uint64_t> sls_ticks_;
  std::vector<uint64_t> opt_ticks_;
};

/// False once at least three samples of each kind exist and the mean
/// optimizer work does not exceed the mean SLS work.
bool use_sls(const SlsState& state);

/// Work-based timing helper used by use_sls; exposed for tests.
bool use_sls(std::span<const uint64_t> optimizer_samples, std::span<const uint64_t> sls_samples);

/// Two-phase search. Phase 1 repairs the previous solution, phase 2 starts
/// from it after flipping ceil(rho*n) random objective variables. Each phase
/// makes at most `flip_budget` flips (default multiplier * n). Returns the
/// cheaper feasible assignment (phase 2 on ties) over variables
/// 1..num_vars, or nothing. Records the SLS work in `state`.
std::optional<Assignment> sls_search(std::span<const PbConstraint> cores, const Objective& objective,
                                     uint32_t num_vars, SlsState& state,
                                     std::optional<uint64_t> flip_budget = std::nullopt);

/// Flips exactly ceil(rho_percent * |vars| / 100) distinct variables of
/// `vars` in a copy of `start`.
Assignment perturb(const Assignment& start, std::span<const Var> vars, uint32_t rho_percent,
                   std::mt19937_64& rng);

/// Flip scores for a fixed assignment and constraint weights:
/// -sum_c w_c * (penalty_after - penalty_before) - soft_weight * cost_delta,
/// where penalty(c) = max(0, degree - lhs).
class SlsScorer {
 public:
  SlsScorer(std::span<const PbConstraint> cores, const Objective& objective, uint32_t num_vars,
            std::vector<Int> weights, Int soft_weight);

  void reset(const Assignment& a);
  Int score(Var v) const;
  void flip(Var v);

  const Assignment& assignment() const { return assignment_; }
  size_t num_unsat() const { return unsat_.size(); }
  const std::vector<uint32_t>& unsat() const { return unsat_; }
  Int cost() const { return cost_; }
  std::vector<Int>& weights() { return weights_; }
  uint64_t ticks() const { return ticks_; }
  bool satisfied(uint32_t ci) const { return lhs_[ci] >= cores_[ci].degree; }
  const PbConstraint& constraint(uint32_t ci) const { return cores_[ci]; }

 private:
  struct Occ {
    uint32_t cons;
    Int coef;
    bool negated;
  };
  Int penalty(uint32_t ci, Int lhs) const { return max(Int(0), cores_[ci].degree - lhs); }
  void mark(uint32_t ci);

  std::span<const PbConstraint> cores_;
  std::vector<std::vector<Occ>> occ_;
  std::vector<Int> obj_weight_;      // signed cost change of setting var to 1
  std::vector<Int> weights_;
  Int soft_weight_;
  Assignment assignment_;
  std::vector<Int> lhs_;
  std::vector<uint32_t> unsat_;
  std::vector<int64_t> unsat_pos_;
  Int cost_ = 0;
  Int base_cost_ = 0;
  mutable uint64_t ticks_ = 0;
};

}  // namespace pbihs

#endif  // PBIHS_SLS_HPP_
