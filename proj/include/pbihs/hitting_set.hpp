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

// Hitting-set optimizers over an accumulated core set and the objective.
//
// Every backend minimizes O subject to the core set K. Proof-producing
// backends also return the id of a logged constraint that states
// O >= proved_lb, which the driver needs for the final conclusion.

#ifndef PBIHS_HITTING_SET_HPP_
#define PBIHS_HITTING_SET_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "pbihs/core.hpp"
#include "pbihs/oracle.hpp"
#include "pbihs/proof.hpp"
#include "pbihs/sls.hpp"

namespace pbihs {

enum class BackendKind { kSis, kSisReified, kCg, kCb, kSlsOnly };
enum class HybridMode { kNone, kOptLb, kAllLb, kForceLb };

const char* backend_name(BackendKind k);
const char* hybrid_name(HybridMode m);
std::optional<BackendKind> parse_backend(std::string_view s);
std::optional<HybridMode> parse_hybrid(std::string_view s);

struct BackendConfig {
  BackendKind kind = BackendKind::kCg;
  HybridMode hybrid = HybridMode::kNone;
  uint64_t cb_budget = 100;  // CG reformulations before CB switches to SIS
  bool stratification = true;
  bool hardening = true;
  bool proof_logging = false;
  int64_t inexact_conflict_budget = 200;  // per call of a proof-free backend
  uint64_t sls_flip_budget_multiplier = 10;
  /// When set, every solve_hs call rewrites this file with (K, O) as OPB.
  std::string debug_export_path;
};

/// Throws std::invalid_argument for combinations that cannot terminate
/// with a proven optimum (SLS_ONLY without a hybrid mode).
void validate(const BackendConfig& cfg);

/// kCandidate: a solution of cost ub from an optimizer whose optimality
/// claim was not confirmed.
enum class HsStatus { kImproved, kOptimal, kCandidate, kInterrupted, kNoSolution };

struct HsResult {
  HsStatus status = HsStatus::kInterrupted;
  Assignment solution;  // over instance variables
  Int cost = 0;
  /// Lower bound on the optimum of (K, O) established by this call, and the
  /// id of the logged constraint O >= proved_lb (absent when trivial or when
  /// proof logging is off).
  std::optional<Int> proved_lb;
  std::optional<ConstraintId> lb_id;
  /// Set by solve_hs: the lower bound the driver may adopt.
  std::optional<Int> lower_bound_out;
  bool from_sls = false;
  bool certified = false;
};

/// Inputs of one optimizer call. `cores` only grows between calls.
struct HsCall {
  std::span<const PbConstraint> cores;
  const Objective& objective;
  uint32_t num_vars;
  std::optional<Int> lb;
  Int ub;
  const Assignment& incumbent;  // a solution of cost ub
};

/// Snapshot of a core-guided reformulation: O^R (weights and literals with
/// the constant of O plus the accumulated increment), the auxiliary
/// constraints C defining counting variables, and the increment itself.
struct ReformulationState {
  Objective reformulated;
  std::vector<PbConstraint> aux;
  Int lb_increment = 0;
  uint64_t steps = 0;
};

class HsBackend {
 public:
  virtual ~HsBackend() = default;
  virtual HsResult minimize(const HsCall& call, bool require_opt) = 0;
  virtual bool certified() const = 0;
  virtual void set_conflict_budget(int64_t conflicts) = 0;
  virtual void set_terminator(std::function<bool()> stop) = 0;
  virtual uint64_t ticks() const = 0;
};

/// Non-reified SIS: a fresh oracle per call with the improving constraint
/// as a hard constraint; proof side reifies it and guards learned clauses.
std::unique_ptr<HsBackend> make_sis_backend(ProofLogger* proof, VarRegistry* vars);

using ReformulationObserver = std::function<void(const ReformulationState&, std::span<const PbConstraint> cores)>;

/// Incremental core-guided optimizer that switches to reified SIS over the
/// reformulated objective after `budget` reformulation steps. Budget 0 is
/// reified SIS, UINT64_MAX is pure core-guided search.
std::unique_ptr<HsBackend> make_reformulation_backend(ProofLogger* proof, VarRegistry* vars, uint64_t budget,
                                                      bool stratification, bool hardening,
                                                      ReformulationObserver observer = {});

/// Backend for `kind` (SLS_ONLY maps to reified SIS, the certified side).
std::unique_ptr<HsBackend> make_backend(const BackendConfig& cfg, ProofLogger* proof, VarRegistry* vars,
                                        ReformulationObserver observer = {});

struct OptimalSolInputs {
  std::optional<size_t> last_new_cores;  // cores from the previous extraction
  uint64_t iterations_since_lb_change = 0;
  uint64_t stagnation_limit = 1000;
};

/// True after an extraction that found no new cores or after a long
/// stretch without lower-bound progress.
bool optimal_sol_heuristic(const OptimalSolInputs& in);

/// Counters of the hitting-set component.
struct HsStats {
  uint64_t sls_calls = 0;
  uint64_t sls_improvements = 0;
  uint64_t sls_skipped = 0;
  uint64_t exact_calls = 0;
  uint64_t inexact_calls = 0;
  uint64_t certified_reruns = 0;
  uint64_t inexact_failures = 0;
  uint64_t discrepancies = 0;
};

/// Loop-level hitting-set component: optional SLS, the optimizer
/// call, the lower-bound rule and the hybrid dispatch.
class HittingSetSolver {
 public:
  HittingSetSolver(const BackendConfig& cfg, bool use_sls_step, SlsConfig sls_cfg, ProofLogger* proof,
                   VarRegistry* vars, ReformulationObserver observer = {});

  HsResult solve_hs(const HsCall& call, bool opt);

  void set_terminator(std::function<bool()> stop);
  const HsStats& stats() const { return stats_; }
  const std::vector<std::string>& discrepancy_log() const { return discrepancies_; }
  SlsState& sls_state() { return sls_; }
  /// Invoked with every SLS-returned assignment before it is used.
  std::function<void(const Assignment&, Int cost, std::span<const PbConstraint> cores)> on_sls_solution;

 private:
  HsResult run_certified(const HsCall& call, bool opt);
  std::optional<HsResult> run_inexact(const HsCall& call, bool opt);
  void finish(HsResult& r, const HsCall& call, bool may_close) const;

  BackendConfig cfg_;
  bool use_sls_step_;
  SlsState sls_;
  std::unique_ptr<HsBackend> certified_;
  std::unique_ptr<HsBackend> inexact_;
  std::optional<SlsState> inexact_sls_;
  VarRegistry inexact_vars_;
  HsStats stats_;
  std::vector<std::string> discrepancies_;
};

/// Writes (K, O) as an OPB instance.
void write_hs_opb(std::ostream& out, std::span<const PbConstraint> cores, const Objective& objective,
                  uint32_t num_vars);

}  // namespace pbihs

#endif  // PBIHS_HITTING_SET_HPP_
