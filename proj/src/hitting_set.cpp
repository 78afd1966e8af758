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

#include "pbihs/hitting_set.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <stdexcept>

#include "pbihs/opb.hpp"

namespace pbihs {

const char* backend_name(BackendKind k) {
  switch (k) {
    case BackendKind::kSis:
      return "sis";
    case BackendKind::kSisReified:
      return "sis-reified";
    case BackendKind::kCg:
      return "cg";
    case BackendKind::kCb:
      return "cb";
    case BackendKind::kSlsOnly:
      return "sls-only";
  }
  return "?";
}

const char* hybrid_name(HybridMode m) {
  switch (m) {
    case HybridMode::kNone:
      return "none";
    case HybridMode::kOptLb:
      return "optlb";
    case HybridMode::kAllLb:
      return "alllb";
    case HybridMode::kForceLb:
      return "forcelb";
  }
  return "?";
}

std::optional<BackendKind> parse_backend(std::string_view s) {
  for (BackendKind k : {BackendKind::kSis, BackendKind::kSisReified, BackendKind::kCg, BackendKind::kCb,
                        BackendKind::kSlsOnly}) {
    if (s == backend_name(k)) return k;
  }
  return std::nullopt;
}

std::optional<HybridMode> parse_hybrid(std::string_view s) {
  for (HybridMode m : {HybridMode::kNone, HybridMode::kOptLb, HybridMode::kAllLb, HybridMode::kForceLb}) {
    if (s == hybrid_name(m)) return m;
  }
  return std::nullopt;
}

void validate(const BackendConfig& cfg) {
  if (cfg.kind == BackendKind::kSlsOnly && cfg.hybrid == HybridMode::kNone) {
    throw std::invalid_argument("sls-only needs a hybrid mode: local search cannot prove optimality");
  }
}

bool optimal_sol_heuristic(const OptimalSolInputs& in) {
  if (in.last_new_cores && *in.last_new_cores == 0) return true;
  return in.iterations_since_lb_change >= in.stagnation_limit;
}

void write_hs_opb(std::ostream& out, std::span<const PbConstraint> cores, const Objective& objective,
                  uint32_t num_vars) {
  Instance inst;
  inst.constraints.assign(cores.begin(), cores.end());
  inst.objective = objective;
  inst.num_vars = num_vars;
  inst.has_objective = true;
  out << write_opb(inst);
}

namespace {

ProofLogger& disabled_logger() {
  static ProofLogger logger;
  return logger;
}

HsResult incumbent_result(const HsCall& call) {
  HsResult r;
  r.status = HsStatus::kOptimal;
  r.solution = call.incumbent;
  r.cost = call.ub;
  return r;
}

// (A - d + 1) multiplier that turns the <= half of a reified SIC plus ~r
// into O >= bound.
Int sic_negation_multiplier(const PbConstraint& body) { return body.coef_sum() - body.degree + 1; }

class SisBackend : public HsBackend {
 public:
  SisBackend(ProofLogger* proof, VarRegistry* vars) : proof_(proof ? proof : &disabled_logger()), vars_(vars) {}

  HsResult minimize(const HsCall& call, bool require_opt) override {
    Oracle oracle(call.num_vars, proof_);
    oracle.set_conflict_budget(budget_);
    if (stop_) oracle.set_terminator(stop_);
    struct TickGuard {
      uint64_t& total;
      const Oracle& o;
      ~TickGuard() { total += o.ticks(); }
    } guard{ticks_, oracle};
    for (const PbConstraint& c : call.cores) oracle.add_constraint(c);

    const Objective& o = call.objective;
    Int bound = call.ub;
    std::optional<ReifiedSic> prev;
    std::optional<HsResult> best;
    for (;;) {
      ReifiedSic sic = proof_->log_reified_sic(*vars_, o, bound);
      if (prev && proof_->enabled() && chainable(*prev) && chainable(sic)) {
        // ~r_new + r_old >= 1 keeps clauses guarded by r_old usable.
        const Int k_old = sic_negation_multiplier(prev->body);
        proof_->log_pol(
            Pol().id(sic.implies).id(prev->implied_by).add().div(max(sic.body.degree, k_old)));
      }
      oracle.set_proof_guard(Lit::negative(sic.indicator));
      oracle.add_constraint(sic.body);
      switch (oracle.solve()) {
        case Oracle::Status::kInterrupted:
          return HsResult{};
        case Oracle::Status::kSat: {
          HsResult r;
          r.solution = oracle.model().restricted(call.num_vars);
          r.cost = cost(o, r.solution);
          if (r.cost >= bound) throw std::logic_error("solution violates the improving constraint");
          r.status = HsStatus::kImproved;
          if (!require_opt) return r;
          bound = r.cost;
          best = std::move(r);
          prev = sic;
          continue;
        }
        case Oracle::Status::kUnsat:
          break;
      }
      HsResult r = best ? std::move(*best) : incumbent_result(call);
      r.status = HsStatus::kOptimal;
      r.proved_lb = bound;
      if (proof_->enabled() && !sic.body.is_contradiction()) {
        r.lb_id = proof_->log_pol(Pol()
                                      .id(sic.implied_by)
                                      .id(*oracle.core().id)
                                      .mul(sic_negation_multiplier(sic.body))
                                      .add());
      }
      return r;
    }
  }

  bool certified() const override { return proof_->enabled(); }
  void set_conflict_budget(int64_t c) override { budget_ = c; }
  void set_terminator(std::function<bool()> stop) override { stop_ = std::move(stop); }
  uint64_t ticks() const override { return ticks_; }

 private:
  static bool chainable(const ReifiedSic& s) { return !s.body.is_contradiction() && !s.body.is_trivial(); }

  ProofLogger* proof_;
  VarRegistry* vars_;
  int64_t budget_ = -1;
  std::function<bool()> stop_;
  uint64_t ticks_ = 0;
};

class ReformulationBackend : public HsBackend {
 public:
  ReformulationBackend(ProofLogger* proof, VarRegistry* vars, uint64_t budget, bool stratification,
                       bool hardening, ReformulationObserver observer)
      : proof_(proof ? proof : &disabled_logger()),
        vars_(vars),
        budget_(budget),
        stratification_(stratification),
        hardening_(hardening),
        observer_(std::move(observer)) {}

  HsResult minimize(const HsCall& call, bool require_opt) override {
    if (!oracle_) {
      oracle_ = std::make_unique<Oracle>(call.num_vars, proof_);
      objective_ = call.objective;
      reform_ = call.objective.terms;
    }
    oracle_->set_conflict_budget(conflict_budget_);
    if (stop_) oracle_->set_terminator(stop_);
    const uint64_t ticks_before = oracle_->ticks();
    for (; cores_added_ < call.cores.size(); ++cores_added_) oracle_->add_constraint(call.cores[cores_added_]);
    HsResult r;
    std::optional<HsResult> cg;
    if (steps_ < budget_) cg = core_guided(call, require_opt);
    r = cg ? std::move(*cg) : solution_improving(call, require_opt);
    ticks_ += oracle_->ticks() - ticks_before;
    return r;
  }

  bool certified() const override { return proof_->enabled(); }
  void set_conflict_budget(int64_t c) override { conflict_budget_ = c; }
  void set_terminator(std::function<bool()> stop) override { stop_ = std::move(stop); }
  uint64_t ticks() const override { return ticks_; }

 private:
  Objective reformulated_objective() const {
    return Objective{reform_, objective_.constant + lb_inc_};
  }

  ReformulationState snapshot() const {
    return ReformulationState{reformulated_objective(), aux_, lb_inc_, steps_};
  }

  // Id of O >= constant + lb_inc, from R plus one literal axiom per O^R term.
  std::optional<ConstraintId> core_guided_lb() {
    if (!proof_->enabled() || lb_inc_ == 0) return std::nullopt;
    if (lb_cache_ && lb_cache_->first == steps_) return lb_cache_->second;
    Pol p;
    p.id(*r_id_);
    for (const Term& t : reform_) p.axiom(t.lit).mul(t.coef).add();
    const ConstraintId id = proof_->log_pol(p);
    lb_cache_ = {steps_, id};
    return id;
  }

  std::optional<Int> next_stratum(Int below) const {
    std::optional<Int> next;
    for (const Term& t : reform_) {
      if (t.coef < below && (!next || t.coef > *next)) next = t.coef;
    }
    return next;
  }

  std::optional<HsResult> core_guided(const HsCall& call, bool require_opt) {
    std::optional<Int> threshold;
    if (stratification_ && !reform_.empty()) {
      threshold = reform_.front().coef;
      for (const Term& t : reform_) threshold = max(*threshold, t.coef);
    }
    std::vector<Lit> assumptions;
    for (;;) {
      assumptions.clear();
      bool all = true;
      for (const Term& t : reform_) {
        const bool hard = hardening_ && t.coef + lb_inc_ + objective_.constant > call.ub;
        if (!threshold || t.coef >= *threshold || hard) {
          assumptions.push_back(~t.lit);
        } else {
          all = false;
        }
      }
      const Oracle::Status status = oracle_->solve(assumptions);
      if (status == Oracle::Status::kInterrupted) return HsResult{};
      if (status == Oracle::Status::kSat) {
        HsResult r;
        r.solution = oracle_->model().restricted(call.num_vars);
        r.cost = cost(objective_, r.solution);
        if (all) {
          if (r.cost != objective_.constant + lb_inc_) {
            throw std::logic_error("core-guided solution cost differs from the reformulation bound");
          }
          r.status = HsStatus::kOptimal;
          r.proved_lb = r.cost;
          r.lb_id = core_guided_lb();
          return r;
        }
        if (!require_opt && r.cost < call.ub) {
          r.status = HsStatus::kImproved;
          return r;
        }
        threshold = next_stratum(*threshold);
        continue;
      }
      const PbConstraint core = oracle_->core();
      if (core.terms.empty()) throw std::runtime_error("core set is unsatisfiable");
      if (steps_ >= budget_) return std::nullopt;
      reformulate(core);
      if (observer_) observer_(snapshot(), call.cores);
    }
  }

  void reformulate(const PbConstraint& core) {
    std::map<Lit, size_t> index;
    for (size_t i = 0; i < reform_.size(); ++i) index[reform_[i].lit] = i;
    Int w = reform_.at(index.at(core.terms.front().lit)).coef;
    for (const Term& t : core.terms) w = min(w, reform_[index.at(t.lit)].coef);

    const size_t k = core.terms.size();
    std::optional<ConstraintId> d_id = core.id;
    std::vector<Var> counters;
    for (size_t j = 2; j <= k; ++j) {
      const Var o = vars_->register_fresh_var("count");
      oracle_->ensure_vars(o.index);
      std::vector<Term> body_terms;
      for (const Term& t : core.terms) body_terms.push_back({1, t.lit});
      for (Var c : counters) body_terms.push_back({1, Lit::negative(c)});
      const PbConstraint body = normalize(body_terms, Relation::kGe, Int(static_cast<unsigned long>(j))).front();
      const PbConstraint implies = reify_implies(o, body);
      const PbConstraint implied_by = reify_implied_by(o, body);
      oracle_->add_constraint(implies);
      oracle_->add_constraint(implied_by);
      aux_.push_back(implies);
      aux_.push_back(implied_by);
      if (proof_->enabled()) {
        const ConstraintId imp = proof_->log_reify(o, ReifyDir::kEquiv, body).first;
        d_id = proof_->log_pol(Pol()
                                   .id(*d_id)
                                   .mul(Int(static_cast<unsigned long>(j - 1)))
                                   .id(imp)
                                   .add()
                                   .div(Int(static_cast<unsigned long>(j))));
      }
      counters.push_back(o);
    }
    if (proof_->enabled()) {
      Pol p;
      p.id(*d_id).mul(w);
      if (r_id_) p.id(*r_id_).add();
      r_id_ = proof_->log_pol(p);
    }
    for (const Term& t : core.terms) reform_[index.at(t.lit)].coef -= w;
    std::erase_if(reform_, [](const Term& t) { return t.coef == 0; });
    for (Var c : counters) reform_.push_back({w, Lit::positive(c)});
    lb_inc_ += w;
    ++steps_;
  }

  HsResult solution_improving(const HsCall& call, bool require_opt) {
    const Objective reformulated = reformulated_objective();
    Int bound = call.ub;
    std::optional<HsResult> best;
    for (;;) {
      const ReifiedSic sic = proof_->log_reified_sic(*vars_, reformulated, bound);
      oracle_->ensure_vars(sic.indicator.index);
      oracle_->add_constraint(reify_implies(sic.indicator, sic.body));
      const Lit r = Lit::positive(sic.indicator);
      const Oracle::Status status = oracle_->solve(std::span<const Lit>(&r, 1));
      if (status == Oracle::Status::kInterrupted) return HsResult{};
      if (status == Oracle::Status::kSat) {
        HsResult res;
        res.solution = oracle_->model().restricted(call.num_vars);
        res.cost = cost(objective_, res.solution);
        if (res.cost >= bound) throw std::logic_error("solution violates the improving constraint");
        res.status = HsStatus::kImproved;
        if (!require_opt) return res;
        bound = res.cost;
        best = std::move(res);
        continue;
      }
      HsResult res = best ? std::move(*best) : incumbent_result(call);
      res.status = HsStatus::kOptimal;
      res.proved_lb = bound;
      if (proof_->enabled()) {
        if (sic.body.is_contradiction()) {
          res.lb_id = core_guided_lb();
        } else {
          ConstraintId id = proof_->log_pol(Pol()
                                                .id(sic.implied_by)
                                                .id(*oracle_->core().id)
                                                .mul(sic_negation_multiplier(sic.body))
                                                .add());
          if (r_id_) id = proof_->log_pol(Pol().id(id).id(*r_id_).add());
          res.lb_id = id;
        }
      }
      return res;
    }
  }

  ProofLogger* proof_;
  VarRegistry* vars_;
  uint64_t budget_;
  bool stratification_;
  bool hardening_;
  ReformulationObserver observer_;

  std::unique_ptr<Oracle> oracle_;
  Objective objective_;
  std::vector<Term> reform_;  // O^R without constant
  std::vector<PbConstraint> aux_;
  Int lb_inc_ = 0;
  uint64_t steps_ = 0;
  std::optional<ConstraintId> r_id_;  // O - O^R >= lb_inc
  std::optional<std::pair<uint64_t, ConstraintId>> lb_cache_;
  size_t cores_added_ = 0;
  int64_t conflict_budget_ = -1;
  std::function<bool()> stop_;
  uint64_t ticks_ = 0;
};

}  // namespace

std::unique_ptr<HsBackend> make_sis_backend(ProofLogger* proof, VarRegistry* vars) {
  return std::make_unique<SisBackend>(proof, vars);
}

std::unique_ptr<HsBackend> make_reformulation_backend(ProofLogger* proof, VarRegistry* vars, uint64_t budget,
                                                      bool stratification, bool hardening,
                                                      ReformulationObserver observer) {
  return std::make_unique<ReformulationBackend>(proof, vars, budget, stratification, hardening,
                                                std::move(observer));
}

std::unique_ptr<HsBackend> make_backend(const BackendConfig& cfg, ProofLogger* proof, VarRegistry* vars,
                                        ReformulationObserver observer) {
  switch (cfg.kind) {
    case BackendKind::kSis:
      return make_sis_backend(proof, vars);
    case BackendKind::kSisReified:
    case BackendKind::kSlsOnly:
      return make_reformulation_backend(proof, vars, 0, cfg.stratification, cfg.hardening, std::move(observer));
    case BackendKind::kCg:
      return make_reformulation_backend(proof, vars, UINT64_MAX, cfg.stratification, cfg.hardening,
                                        std::move(observer));
    case BackendKind::kCb:
      return make_reformulation_backend(proof, vars, cfg.cb_budget, cfg.stratification, cfg.hardening,
                                        std::move(observer));
  }
  throw std::invalid_argument("unknown backend");
}

HittingSetSolver::HittingSetSolver(const BackendConfig& cfg, bool use_sls_step, SlsConfig sls_cfg,
                                   ProofLogger* proof, VarRegistry* vars, ReformulationObserver observer)
    : cfg_(cfg),
      use_sls_step_(use_sls_step),
      sls_(sls_cfg),
      inexact_vars_(vars->instance_vars()) {
  validate(cfg);
  if (!cfg.proof_logging) proof = nullptr;
  certified_ = make_backend(cfg, proof, vars, std::move(observer));
  if (cfg.hybrid != HybridMode::kNone) {
    if (cfg.kind == BackendKind::kSlsOnly) {
      SlsConfig inexact_cfg = sls_cfg;
      inexact_cfg.seed = sls_cfg.seed + 1;
      inexact_cfg.flip_multiplier = cfg.sls_flip_budget_multiplier;
      inexact_sls_.emplace(inexact_cfg);
    } else {
      inexact_ = make_backend(cfg, nullptr, &inexact_vars_);
      inexact_->set_conflict_budget(cfg.inexact_conflict_budget);
    }
  }
}

void HittingSetSolver::set_terminator(std::function<bool()> stop) {
  certified_->set_terminator(stop);
  if (inexact_) inexact_->set_terminator(stop);
}

HsResult HittingSetSolver::run_certified(const HsCall& call, bool opt) {
  ++stats_.exact_calls;
  const uint64_t before = certified_->ticks();
  HsResult r = certified_->minimize(call, opt);
  sls_.record_optimizer_ticks(certified_->ticks() - before + 1);
  r.certified = cfg_.proof_logging;
  return r;
}

std::optional<HsResult> HittingSetSolver::run_inexact(const HsCall& call, bool opt) {
  ++stats_.inexact_calls;
  HsResult r;
  if (inexact_sls_) {
    std::optional<Assignment> s = sls_search(call.cores, call.objective, call.num_vars, *inexact_sls_);
    if (!s) return std::nullopt;
    r.cost = cost(call.objective, *s);
    r.solution = std::move(*s);
    if (on_sls_solution) on_sls_solution(r.solution, r.cost, call.cores);
    if (r.cost > call.ub) return std::nullopt;
    r.status = r.cost < call.ub ? HsStatus::kImproved : HsStatus::kOptimal;
    r.from_sls = true;
  } else {
    const uint64_t before = inexact_->ticks();
    r = inexact_->minimize(call, opt);
    sls_.record_optimizer_ticks(inexact_->ticks() - before + 1);
    if (r.status == HsStatus::kInterrupted) return std::nullopt;
  }
  // Claims of a proof-free optimizer, never adopted as bounds directly.
  r.proved_lb.reset();
  r.lb_id.reset();
  if (r.cost == call.ub || opt) r.proved_lb = r.cost;
  return r;
}

void HittingSetSolver::finish(HsResult& r, const HsCall& call, bool may_close) const {
  r.lower_bound_out = call.lb;
  if (r.status == HsStatus::kInterrupted) return;
  // A proved optimum of the core set is a lower bound for the instance.
  if (may_close && r.proved_lb && *r.proved_lb >= r.cost) {
    r.lower_bound_out = r.cost;
    r.status = HsStatus::kOptimal;
    return;
  }
  if (r.status == HsStatus::kOptimal) {
    // An unconfirmed claim is only a solution.
    r.status = r.cost < call.ub ? HsStatus::kImproved : HsStatus::kCandidate;
  }
}

HsResult HittingSetSolver::solve_hs(const HsCall& call, bool opt) {
  if (!cfg_.debug_export_path.empty()) {
    std::ofstream out(cfg_.debug_export_path);
    write_hs_opb(out, call.cores, call.objective, call.num_vars);
  }
  if (use_sls_step_) {
    if (use_sls(sls_)) {
      ++stats_.sls_calls;
      if (!sls_.previous()) sls_.set_previous(call.incumbent);
      std::optional<Assignment> s = sls_search(call.cores, call.objective, call.num_vars, sls_);
      if (s) {
        const Int c = cost(call.objective, *s);
        if (on_sls_solution) on_sls_solution(*s, c, call.cores);
        if (c < call.ub) {
          ++stats_.sls_improvements;
          HsResult r;
          r.status = HsStatus::kImproved;
          r.solution = std::move(*s);
          r.cost = c;
          r.from_sls = true;
          r.lower_bound_out = call.lb;
          return r;
        }
      }
    } else {
      ++stats_.sls_skipped;
    }
  }

  auto certify = [&](const HsResult& claim) {
    ++stats_.certified_reruns;
    HsResult c = run_certified(call, true);
    if (c.status != HsStatus::kInterrupted && claim.proved_lb && *claim.proved_lb != c.cost) {
      ++stats_.discrepancies;
      discrepancies_.push_back("inexact optimizer claimed bound " + claim.proved_lb->to_string() +
                               ", certified optimum " + c.cost.to_string());
    }
    finish(c, call, true);
    return c;
  };

  HsResult r;
  switch (cfg_.hybrid) {
    case HybridMode::kNone:
      r = run_certified(call, opt);
      finish(r, call, true);
      return r;
    case HybridMode::kForceLb:
      if (opt) {
        r = run_certified(call, true);
        finish(r, call, true);
        return r;
      }
      if (std::optional<HsResult> in = run_inexact(call, false)) {
        finish(*in, call, false);
        return *in;
      }
      ++stats_.inexact_failures;
      r = run_certified(call, false);
      finish(r, call, true);
      return r;
    case HybridMode::kOptLb:
    case HybridMode::kAllLb: {
      std::optional<HsResult> in = run_inexact(call, opt);
      if (!in) {
        ++stats_.inexact_failures;
        r = run_certified(call, opt);
        finish(r, call, true);
        return r;
      }
      const bool would_refine = in->proved_lb.has_value();
      const bool would_close = would_refine && *in->proved_lb >= call.ub;
      if (cfg_.hybrid == HybridMode::kOptLb ? would_close : would_refine) return certify(*in);
      finish(*in, call, false);
      return *in;
    }
  }
  return r;
}

}  // namespace pbihs
