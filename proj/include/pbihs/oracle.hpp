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

#ifndef PBIHS_ORACLE_HPP_
#define PBIHS_ORACLE_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "pbihs/core.hpp"
#include "pbihs/proof.hpp"

namespace pbihs {

/// Incremental conflict-driven decision procedure for normalized PB
/// constraints under assumptions. Clauses use two watched literals, other
/// constraints a slack counter; conflict analysis learns clauses (first
/// UIP) and failed assumptions are reported as a clausal core. Decisions
/// follow variable activity with saved phases; ties go to the lowest index,
/// so runs are deterministic.
///
/// When a ProofLogger is attached every learned clause and every core is
/// logged as a RUP step. A proof guard literal g, if set, is appended to each
/// logged clause so that the proof sees g ∨ C.
class Oracle {
 public:
  enum class Status { kSat, kUnsat, kInterrupted };

  explicit Oracle(uint32_t num_vars, ProofLogger* proof = nullptr);

  uint32_t num_vars() const { return num_vars_; }
  void ensure_vars(uint32_t num_vars);

  /// Adds a constraint permanently. Returns false if the formula is now
  /// unsatisfiable at the root.
  bool add_constraint(const PbConstraint& c);
  bool add_clause(std::span<const Lit> lits);

  Status solve(std::span<const Lit> assumptions = {});

  /// Complete model after kSat, over variables 1..num_vars().
  const Assignment& model() const { return model_; }
  /// After kUnsat: sum of negated failed assumptions >= 1. Empty (0 >= 1)
  /// when the formula itself is unsatisfiable. Carries the proof id when
  /// logging is on.
  const PbConstraint& core() const { return core_; }

  bool root_unsat() const { return root_unsat_; }

  /// Negative budget means unlimited. Counted per solve() call.
  void set_conflict_budget(int64_t conflicts) { conflict_budget_ = conflicts; }
  /// Polled periodically; returning true interrupts the search.
  void set_terminator(std::function<bool()> stop) { stop_ = std::move(stop); }
  void set_proof_guard(std::optional<Lit> guard) { guard_ = guard; }

  /// Deterministic work counter (propagation visits plus conflicts).
  uint64_t ticks() const { return ticks_; }
  uint64_t conflicts() const { return conflicts_; }
  uint64_t solve_calls() const { return solve_calls_; }

 private:
  struct Cons {
    std::vector<Term> terms;  // clauses: watched literals first; else decreasing coefficient
    Int degree;
    Int slack;  // counter constraints only
    bool learned = false;
    bool clause = false;
    bool deleted = false;
    double activity = 0;
  };
  struct Occ {
    uint32_t cons;
    Int coef;
  };
  struct Watch {
    uint32_t cons;
    Lit blocker;
  };
  static constexpr uint32_t kNoReason = UINT32_MAX;

  int value(Lit l) const {
    int8_t v = values_[l.var().index];
    if (v < 0) return -1;
    return (v == 1) != l.negated() ? 1 : 0;
  }
  int level() const { return static_cast<int>(trail_lim_.size()); }
  void assign(Lit l, uint32_t reason);
  /// Adds a constraint at the root. Returns false on a root conflict.
  bool attach_root(std::vector<Term> terms, Int degree);
  void watch(uint32_t ci);
  /// Assigns literals forced by counter constraint `ci`.
  void fire(uint32_t ci);
  /// Returns the conflicting constraint or kNoReason.
  uint32_t propagate();
  uint32_t propagate_clauses(Lit false_lit);
  void backtrack(int lvl);
  std::vector<Lit> reason_clause(Lit implied) const;
  std::vector<Lit> conflict_clause(uint32_t ci) const;
  /// First-UIP learning; returns the learned clause (asserting literal first)
  /// and the backjump level.
  std::pair<std::vector<Lit>, int> analyze(uint32_t conflict);
  /// Failed assumptions responsible for ~p being implied.
  std::vector<Lit> analyze_final(Lit p);
  std::optional<ConstraintId> log_clause(std::vector<Lit> lits);
  void set_core(std::vector<Lit> failed_assumptions);
  void learn(std::vector<Lit> learnt);
  void reduce_learned();
  bool locked(uint32_t ci) const;

  void bump_var(uint32_t v);
  void bump_cons(uint32_t ci);
  bool heap_less(uint32_t a, uint32_t b) const;
  void heap_up(size_t i);
  void heap_down(size_t i);
  void heap_insert(uint32_t v);
  uint32_t heap_pop();

  uint32_t num_vars_;
  ProofLogger* proof_;
  std::optional<Lit> guard_;

  std::vector<Cons> cons_;
  std::vector<std::vector<Occ>> occ_;  // by literal code: counter constraints where lit occurs
  std::vector<std::vector<Watch>> watches_;  // by literal code: clauses watching lit
  std::vector<int8_t> values_;
  std::vector<int> levels_;
  std::vector<uint32_t> reasons_;
  std::vector<uint32_t> trail_pos_;
  std::vector<Lit> trail_;
  std::vector<size_t> trail_lim_;
  size_t qhead_ = 0;
  bool root_unsat_ = false;

  std::vector<double> activity_;
  double var_inc_ = 1;
  double cons_inc_ = 1;
  std::vector<uint32_t> heap_;
  std::vector<int64_t> heap_pos_;  // -1 when absent
  std::vector<int8_t> phase_;
  size_t num_learned_ = 0;
  size_t max_learned_ = 4000;

  Assignment model_;
  PbConstraint core_;

  int64_t conflict_budget_ = -1;
  std::function<bool()> stop_;
  uint64_t ticks_ = 0;
  uint64_t conflicts_ = 0;
  uint64_t solve_calls_ = 0;
  std::vector<uint8_t> seen_;
};

struct ExtractCoresResult {
  std::vector<Core> new_cores;
  Assignment witness;  // over instance variables; empty when interrupted
  bool interrupted = false;
};

/// Weight-aware core extraction. Starts from assumptions ~l for every
/// objective literal l that gamma sets to 0 and relaxes them core by core:
/// each core lowers the residual weight of its literals by their minimum,
/// and literals whose residual hits zero leave the assumption set. Stops at
/// the first satisfiable call. Throws std::runtime_error if the formula is
/// unsatisfiable.
ExtractCoresResult extract_cores(Oracle& oracle, const Objective& objective, const Assignment& gamma,
                                 uint32_t instance_vars);

}  // namespace pbihs

#endif  // PBIHS_ORACLE_HPP_
