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

#include "pbihs/ihs.hpp"

#include <chrono>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "pbihs/oracle.hpp"
#include "pbihs/proof.hpp"

namespace pbihs {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

// True when every variable of c occurs in the objective.
bool mentions_only_objective(const PbConstraint& c, const std::set<uint32_t>& objective_vars) {
  for (const Term& t : c.terms) {
    if (!objective_vars.contains(t.lit.var().index)) return false;
  }
  return true;
}

class Run {
 public:
  Run(const Instance& inst, const RunConfig& cfg)
      : inst_(inst),
        cfg_(cfg),
        start_(Clock::now()),
        proof_(cfg.proof != nullptr ? ProofLogger(cfg.proof, inst.constraints.size()) : ProofLogger()),
        vars_(inst.num_vars),
        oracle_(inst.num_vars, proof_.enabled() ? &proof_ : nullptr) {}

  RunResult solve();

 private:
  bool should_stop() const {
    if (cfg_.interrupt && cfg_.interrupt->load(std::memory_order_relaxed)) return true;
    return cfg_.time_limit_seconds && seconds_since(start_) >= *cfg_.time_limit_seconds;
  }

  void improve(const Assignment& a, Int c) {
    if (!evaluate_all(a)) throw std::logic_error("incumbent violates an input constraint");
    if (cost(inst_.objective, a) != c) throw std::logic_error("incumbent cost mismatch");
    bounds_.lower_upper(c);
    incumbent_ = a;
    proof_.log_solution(a, inst_.num_vars, c);
    if (cfg_.hooks.on_improvement) cfg_.hooks.on_improvement(c, a);
  }

  bool evaluate_all(const Assignment& a) const {
    for (const PbConstraint& c : inst_.constraints) {
      if (!evaluate(c, a)) return false;
    }
    return true;
  }

  void add_core(PbConstraint c) {
    if (cfg_.hooks.on_core) cfg_.hooks.on_core(c);
    cores_.push_back(std::move(c));
    ++result_.stats.cores;
  }

  Oracle::Status timed_solve() {
    const auto t = Clock::now();
    const Oracle::Status s = oracle_.solve();
    result_.stats.oracle_seconds += seconds_since(t);
    return s;
  }

  RunResult finish(SolveStatus status);
  void conclude_optimal();

  const Instance& inst_;
  const RunConfig& cfg_;
  Clock::time_point start_;
  ProofLogger proof_;
  VarRegistry vars_;
  Oracle oracle_;
  Bounds bounds_;
  std::optional<ConstraintId> lb_id_;
  Assignment incumbent_;
  std::vector<PbConstraint> cores_;
  RunResult result_;
};

RunResult Run::finish(SolveStatus status) {
  result_.status = status;
  if (bounds_.upper()) {
    result_.solution = incumbent_;
    result_.cost = bounds_.upper();
  }
  result_.lower_bound = bounds_.lower();
  result_.stats.oracle_calls = oracle_.solve_calls();
  result_.stats.oracle_conflicts = oracle_.conflicts();
  result_.stats.proof_steps = proof_.steps();
  result_.stats.total_seconds = seconds_since(start_);
  return std::move(result_);
}

void Run::conclude_optimal() {
  if (!proof_.enabled()) return;
  const Int c = *bounds_.upper();
  Pol p;
  p.obj();
  // O <= c - 1 alone is contradictory when c does not exceed the constant.
  if (c > inst_.objective.constant) {
    if (!lb_id_) throw std::logic_error("optimum reached without a logged lower bound");
    p.id(*lb_id_).add();
  }
  proof_.conclude_optimal(c, p);
}

RunResult Run::solve() {
  oracle_.set_terminator([this] { return should_stop(); });
  for (const PbConstraint& c : inst_.constraints) oracle_.add_constraint(c);

  // Feasibility check with no assumptions.
  switch (timed_solve()) {
    case Oracle::Status::kInterrupted:
      result_.interrupted = cfg_.interrupt && cfg_.interrupt->load();
      return finish(SolveStatus::kUnknown);
    case Oracle::Status::kUnsat:
      if (proof_.enabled()) proof_.conclude_infeasible(*oracle_.core().id);
      return finish(SolveStatus::kUnsatisfiable);
    case Oracle::Status::kSat:
      break;
  }
  const Objective& obj = inst_.objective;
  {
    const Assignment first = oracle_.model().restricted(inst_.num_vars);
    improve(first, cost(obj, first));
  }
  if (obj.terms.empty()) {
    bounds_.raise_lower(*bounds_.upper());
    result_.stats.trajectory.push_back({bounds_.lower(), bounds_.upper()});
    conclude_optimal();
    return finish(SolveStatus::kOptimum);
  }

  if (cfg_.seeding) {
    std::set<uint32_t> objective_vars;
    for (const Term& t : obj.terms) objective_vars.insert(t.lit.var().index);
    for (size_t i = 0; i < inst_.constraints.size(); ++i) {
      PbConstraint c = inst_.constraints[i];
      if (c.is_trivial() || !mentions_only_objective(c, objective_vars)) continue;
      if (proof_.enabled()) {
        c.id = ConstraintId{i + 1};
        c.id = proof_.log_core(Core{c});
      }
      add_core(std::move(c));
      ++result_.stats.seeded_cores;
    }
  }

  BackendConfig bcfg = cfg_.backend;
  bcfg.proof_logging = proof_.enabled();
  SlsConfig scfg = cfg_.sls;
  scfg.seed = cfg_.seed;
  HittingSetSolver hs(bcfg, cfg_.use_sls, scfg, proof_.enabled() ? &proof_ : nullptr, &vars_,
                      cfg_.hooks.on_reformulation);
  hs.set_terminator([this] { return should_stop(); });
  hs.on_sls_solution = cfg_.hooks.on_sls_solution;

  std::optional<size_t> last_new_cores;
  uint64_t since_lb_change = 0;
  SolveStatus status = SolveStatus::kUnknown;
  RunStats& st = result_.stats;
  for (;;) {
    if (should_stop()) break;
    ++st.iterations;
    bool opt = optimal_sol_heuristic({last_new_cores, since_lb_change, cfg_.stagnation_limit});
    if (cfg_.force_opt_period != 0 && st.iterations % cfg_.force_opt_period == 0) opt = true;

    const HsCall call{cores_, obj, inst_.num_vars, bounds_.lower(), *bounds_.upper(), incumbent_};
    const auto t = Clock::now();
    HsResult r = hs.solve_hs(call, opt);
    st.hs_seconds += seconds_since(t);
    ++st.hs_calls;
    if (opt) ++st.hs_opt_calls;
    if (r.status == HsStatus::kInterrupted) break;
    if (r.status == HsStatus::kNoSolution) throw std::logic_error("core set has no solution");
    if (cfg_.hooks.on_hs_result) cfg_.hooks.on_hs_result(r, cores_);

    ++since_lb_change;
    if (r.lower_bound_out && (!bounds_.lower() || *r.lower_bound_out > *bounds_.lower())) {
      bounds_.raise_lower(*r.lower_bound_out);
      lb_id_ = r.lb_id;
      since_lb_change = 0;
    }
    if (bounds_.closed()) {
      st.trajectory.push_back({bounds_.lower(), bounds_.upper()});
      status = SolveStatus::kOptimum;
      break;
    }

    const auto t2 = Clock::now();
    ExtractCoresResult ex = extract_cores(oracle_, obj, r.solution, inst_.num_vars);
    st.oracle_seconds += seconds_since(t2);
    if (ex.interrupted) {
      st.trajectory.push_back({bounds_.lower(), bounds_.upper()});
      break;
    }
    const Int c = cost(obj, ex.witness);
    if (c < *bounds_.upper()) improve(ex.witness, c);
    st.trajectory.push_back({bounds_.lower(), bounds_.upper()});
    if (bounds_.closed()) {
      status = SolveStatus::kOptimum;
      break;
    }
    last_new_cores = ex.new_cores.size();
    for (Core& core : ex.new_cores) add_core(std::move(core.constraint));
  }
  st.hs = hs.stats();

  if (status == SolveStatus::kOptimum) {
    conclude_optimal();
    return finish(status);
  }
  const bool interrupted = cfg_.interrupt && cfg_.interrupt->load();
  result_.interrupted = interrupted;
  // A user interrupt reports the incumbent; a time limit reports UNKNOWN.
  return finish(interrupted ? SolveStatus::kSatisfiable : SolveStatus::kUnknown);
}

std::string opt_int(const std::optional<Int>& v) { return v ? v->to_string() : "none"; }

}  // namespace

void validate(const RunConfig& cfg) {
  validate(cfg.backend);
  if (cfg.time_limit_seconds && *cfg.time_limit_seconds < 0) {
    throw std::invalid_argument("time limit must be non-negative");
  }
}

RunResult ihs_solve(const Instance& inst, const RunConfig& cfg) {
  validate(cfg);
  Run run(inst, cfg);
  return run.solve();
}

std::string format_stats(const RunConfig& cfg, const RunResult& r) {
  std::ostringstream os;
  const RunStats& s = r.stats;
  os << "status=" << status_name(r.status) << "\n"
     << "cost=" << opt_int(r.cost) << "\n"
     << "lower_bound=" << opt_int(r.lower_bound) << "\n"
     << "backend=" << backend_name(cfg.backend.kind) << "\n"
     << "hybrid=" << hybrid_name(cfg.backend.hybrid) << "\n"
     << "sls=" << (cfg.use_sls ? "on" : "off") << "\n"
     << "seed=" << cfg.seed << "\n"
     << "iterations=" << s.iterations << "\n"
     << "cores=" << s.cores << "\n"
     << "seeded_cores=" << s.seeded_cores << "\n"
     << "oracle_calls=" << s.oracle_calls << "\n"
     << "oracle_conflicts=" << s.oracle_conflicts << "\n"
     << "hs_calls=" << s.hs_calls << "\n"
     << "hs_opt_calls=" << s.hs_opt_calls << "\n"
     << "hs_exact_calls=" << s.hs.exact_calls << "\n"
     << "hs_inexact_calls=" << s.hs.inexact_calls << "\n"
     << "hs_certified_reruns=" << s.hs.certified_reruns << "\n"
     << "hs_inexact_failures=" << s.hs.inexact_failures << "\n"
     << "hs_discrepancies=" << s.hs.discrepancies << "\n"
     << "sls_calls=" << s.hs.sls_calls << "\n"
     << "sls_improvements=" << s.hs.sls_improvements << "\n"
     << "sls_skipped=" << s.hs.sls_skipped << "\n"
     << "proof_steps=" << s.proof_steps << "\n";
  for (size_t i = 0; i < s.trajectory.size(); ++i) {
    os << "trajectory " << (i + 1) << " " << opt_int(s.trajectory[i].lb) << " " << opt_int(s.trajectory[i].ub)
       << "\n";
  }
  return os.str();
}

std::string format_timing(const RunResult& r) {
  std::ostringstream os;
  os << "total_seconds=" << r.stats.total_seconds << "\n"
     << "oracle_seconds=" << r.stats.oracle_seconds << "\n"
     << "hs_seconds=" << r.stats.hs_seconds << "\n"
     << "peak_memory_kib=" << peak_memory_kib() << "\n";
  return os.str();
}

uint64_t peak_memory_kib() {
  std::ifstream in("/proc/self/status");
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("VmHWM:", 0) == 0) {
      std::istringstream ls(line.substr(6));
      uint64_t kib = 0;
      ls >> kib;
      return kib;
    }
  }
  return 0;
}

}  // namespace pbihs
