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

#include "pbihs/oracle.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace pbihs {

namespace {

// Luby sequence 1 1 2 1 1 2 4 ... (0-based index).
uint64_t luby(uint64_t i) {
  uint64_t size = 1;
  int seq = 0;
  while (size < i + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  uint64_t x = i;
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  return uint64_t{1} << seq;
}

constexpr uint64_t kRestartUnit = 64;

}  // namespace

Oracle::Oracle(uint32_t num_vars, ProofLogger* proof) : num_vars_(0), proof_(proof) {
  ensure_vars(num_vars);
}

void Oracle::ensure_vars(uint32_t num_vars) {
  if (num_vars <= num_vars_) return;
  const uint32_t old = num_vars_;
  num_vars_ = num_vars;
  values_.resize(num_vars + 1, -1);
  levels_.resize(num_vars + 1, 0);
  reasons_.resize(num_vars + 1, kNoReason);
  trail_pos_.resize(num_vars + 1, 0);
  seen_.resize(num_vars + 1, 0);
  occ_.resize(2 * (num_vars + 1));
  watches_.resize(2 * (num_vars + 1));
  activity_.resize(num_vars + 1, 0.0);
  heap_pos_.resize(num_vars + 1, -1);
  phase_.resize(num_vars + 1, 0);
  for (uint32_t v = old + 1; v <= num_vars; ++v) heap_insert(v);
}

// ---------------------------------------------------------------------------
// Decision heap: highest activity first, lowest index on ties.

bool Oracle::heap_less(uint32_t a, uint32_t b) const {
  return activity_[a] > activity_[b] || (activity_[a] == activity_[b] && a < b);
}

void Oracle::heap_up(size_t i) {
  const uint32_t v = heap_[i];
  while (i > 0) {
    const size_t parent = (i - 1) / 2;
    if (!heap_less(v, heap_[parent])) break;
    heap_[i] = heap_[parent];
    heap_pos_[heap_[i]] = static_cast<int64_t>(i);
    i = parent;
  }
  heap_[i] = v;
  heap_pos_[v] = static_cast<int64_t>(i);
}

void Oracle::heap_down(size_t i) {
  const uint32_t v = heap_[i];
  for (;;) {
    size_t child = 2 * i + 1;
    if (child >= heap_.size()) break;
    if (child + 1 < heap_.size() && heap_less(heap_[child + 1], heap_[child])) ++child;
    if (!heap_less(heap_[child], v)) break;
    heap_[i] = heap_[child];
    heap_pos_[heap_[i]] = static_cast<int64_t>(i);
    i = child;
  }
  heap_[i] = v;
  heap_pos_[v] = static_cast<int64_t>(i);
}

void Oracle::heap_insert(uint32_t v) {
  if (heap_pos_[v] >= 0) return;
  heap_.push_back(v);
  heap_up(heap_.size() - 1);
}

uint32_t Oracle::heap_pop() {
  const uint32_t top = heap_.front();
  heap_pos_[top] = -1;
  const uint32_t last = heap_.back();
  heap_.pop_back();
  if (!heap_.empty()) {
    heap_[0] = last;
    heap_down(0);
  }
  return top;
}

void Oracle::bump_var(uint32_t v) {
  activity_[v] += var_inc_;
  if (activity_[v] > 1e100) {
    for (double& a : activity_) a *= 1e-100;
    var_inc_ *= 1e-100;
  }
  if (heap_pos_[v] >= 0) heap_up(static_cast<size_t>(heap_pos_[v]));
}

void Oracle::bump_cons(uint32_t ci) {
  Cons& c = cons_[ci];
  if (!c.learned) return;
  c.activity += cons_inc_;
  if (c.activity > 1e20) {
    for (Cons& k : cons_) k.activity *= 1e-20;
    cons_inc_ *= 1e-20;
  }
}

// ---------------------------------------------------------------------------

void Oracle::assign(Lit l, uint32_t reason) {
  const uint32_t v = l.var().index;
  values_[v] = l.negated() ? 0 : 1;
  levels_[v] = level();
  reasons_[v] = reason;
  trail_pos_[v] = static_cast<uint32_t>(trail_.size());
  trail_.push_back(l);
}

void Oracle::watch(uint32_t ci) {
  const std::vector<Term>& t = cons_[ci].terms;
  watches_[t[0].lit.code()].push_back({ci, t[1].lit});
  watches_[t[1].lit.code()].push_back({ci, t[0].lit});
}

bool Oracle::attach_root(std::vector<Term> terms, Int degree) {
  for (Term& t : terms) t.coef = min(t.coef, degree);
  const auto ci = static_cast<uint32_t>(cons_.size());
  if (degree == 1) {
    std::stable_partition(terms.begin(), terms.end(), [&](const Term& t) { return value(t.lit) != 0; });
    if (terms.empty() || value(terms[0].lit) == 0) return false;
    const bool unit = terms.size() == 1 || value(terms[1].lit) == 0;
    cons_.push_back(Cons{std::move(terms), degree, 0, false, true});
    if (cons_[ci].terms.size() >= 2) watch(ci);
    if (unit && value(cons_[ci].terms[0].lit) == -1) assign(cons_[ci].terms[0].lit, ci);
    return true;
  }
  std::stable_sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.coef > b.coef; });
  Int slack = -degree;
  for (const Term& t : terms) {
    if (value(t.lit) != 0) slack += t.coef;
  }
  for (const Term& t : terms) occ_[t.lit.code()].push_back({ci, t.coef});
  cons_.push_back(Cons{std::move(terms), degree, slack, false, false});
  if (slack < 0) return false;
  fire(ci);
  return true;
}

void Oracle::fire(uint32_t ci) {
  const Cons& c = cons_[ci];
  for (const Term& t : c.terms) {
    if (t.coef <= c.slack) break;
    if (value(t.lit) == -1) assign(t.lit, ci);
  }
}

uint32_t Oracle::propagate_clauses(Lit false_lit) {
  std::vector<Watch>& ws = watches_[false_lit.code()];
  size_t i = 0;
  size_t j = 0;
  while (i < ws.size()) {
    const Watch w = ws[i++];
    ++ticks_;
    Cons& c = cons_[w.cons];
    if (c.deleted) continue;
    if (value(w.blocker) == 1) {
      ws[j++] = w;
      continue;
    }
    std::vector<Term>& t = c.terms;
    if (t[0].lit == false_lit) std::swap(t[0], t[1]);
    const Lit first = t[0].lit;
    if (first != w.blocker && value(first) == 1) {
      ws[j++] = {w.cons, first};
      continue;
    }
    bool moved = false;
    for (size_t k = 2; k < t.size(); ++k) {
      if (value(t[k].lit) != 0) {
        std::swap(t[1], t[k]);
        watches_[t[1].lit.code()].push_back({w.cons, first});
        moved = true;
        break;
      }
    }
    if (moved) continue;
    ws[j++] = {w.cons, first};
    if (value(first) == 0) {
      while (i < ws.size()) ws[j++] = ws[i++];
      ws.resize(j);
      return w.cons;
    }
    assign(first, w.cons);
  }
  ws.resize(j);
  return kNoReason;
}

uint32_t Oracle::propagate() {
  while (qhead_ < trail_.size()) {
    const Lit false_lit = ~trail_[qhead_++];
    uint32_t conflict = kNoReason;
    // All counters are updated even after a conflict so that backtracking
    // can restore them exactly.
    for (const Occ& o : occ_[false_lit.code()]) {
      ++ticks_;
      Cons& c = cons_[o.cons];
      c.slack -= o.coef;
      if (conflict != kNoReason) continue;
      if (c.slack < 0) {
        conflict = o.cons;
      } else if (c.terms.front().coef > c.slack) {
        fire(o.cons);
      }
    }
    if (conflict != kNoReason) return conflict;
    conflict = propagate_clauses(false_lit);
    if (conflict != kNoReason) return conflict;
  }
  return kNoReason;
}

void Oracle::backtrack(int lvl) {
  if (level() <= lvl) return;
  const size_t pos = trail_lim_[lvl];
  for (size_t i = trail_.size(); i-- > pos;) {
    const Lit l = trail_[i];
    if (i < qhead_) {
      for (const Occ& o : occ_[(~l).code()]) cons_[o.cons].slack += o.coef;
    }
    const uint32_t v = l.var().index;
    phase_[v] = values_[v];
    values_[v] = -1;
    reasons_[v] = kNoReason;
    heap_insert(v);
  }
  trail_.resize(pos);
  trail_lim_.resize(lvl);
  qhead_ = std::min(qhead_, pos);
}

std::vector<Lit> Oracle::reason_clause(Lit implied) const {
  const uint32_t pos = trail_pos_[implied.var().index];
  std::vector<Lit> out{implied};
  for (const Term& t : cons_[reasons_[implied.var().index]].terms) {
    if (t.lit != implied && value(t.lit) == 0 && trail_pos_[t.lit.var().index] < pos) out.push_back(t.lit);
  }
  return out;
}

std::vector<Lit> Oracle::conflict_clause(uint32_t ci) const {
  std::vector<Lit> out;
  for (const Term& t : cons_[ci].terms) {
    if (value(t.lit) == 0) out.push_back(t.lit);
  }
  return out;
}

std::pair<std::vector<Lit>, int> Oracle::analyze(uint32_t conflict) {
  std::vector<Lit> learnt{Lit()};
  int path = 0;
  bump_cons(conflict);
  std::vector<Lit> clause = conflict_clause(conflict);
  size_t skip = 0;  // reason clauses start with the implied literal
  size_t idx = trail_.size();
  Lit p;
  for (;;) {
    for (size_t i = skip; i < clause.size(); ++i) {
      const uint32_t v = clause[i].var().index;
      if (seen_[v] || levels_[v] == 0) continue;
      seen_[v] = 1;
      bump_var(v);
      if (levels_[v] >= level()) {
        ++path;
      } else {
        learnt.push_back(clause[i]);
      }
    }
    while (!seen_[trail_[idx - 1].var().index]) --idx;
    p = trail_[--idx];
    seen_[p.var().index] = 0;
    if (--path == 0) break;
    bump_cons(reasons_[p.var().index]);
    clause = reason_clause(p);
    skip = 1;
  }
  learnt[0] = ~p;
  int bt = 0;
  if (learnt.size() > 1) {
    size_t best = 1;
    for (size_t i = 2; i < learnt.size(); ++i) {
      if (levels_[learnt[i].var().index] > levels_[learnt[best].var().index]) best = i;
    }
    std::swap(learnt[1], learnt[best]);
    bt = levels_[learnt[1].var().index];
  }
  for (Lit l : learnt) seen_[l.var().index] = 0;
  var_inc_ /= 0.95;
  cons_inc_ /= 0.999;
  return {std::move(learnt), bt};
}

std::vector<Lit> Oracle::analyze_final(Lit p) {
  std::vector<Lit> failed{p};
  if (levels_[p.var().index] == 0) return failed;
  seen_[p.var().index] = 1;
  for (size_t i = trail_.size(); i-- > trail_lim_[0];) {
    const Lit l = trail_[i];
    const uint32_t v = l.var().index;
    if (!seen_[v]) continue;
    if (reasons_[v] == kNoReason) {
      if (l != ~p) failed.push_back(l);
    } else {
      std::vector<Lit> r = reason_clause(l);
      for (size_t j = 1; j < r.size(); ++j) {
        if (levels_[r[j].var().index] > 0) seen_[r[j].var().index] = 1;
      }
    }
    seen_[v] = 0;
  }
  seen_[p.var().index] = 0;
  return failed;
}

std::optional<ConstraintId> Oracle::log_clause(std::vector<Lit> lits) {
  if (proof_ == nullptr || !proof_->enabled()) return std::nullopt;
  if (guard_) lits.push_back(*guard_);
  std::vector<Term> terms;
  terms.reserve(lits.size());
  for (Lit l : lits) terms.push_back({1, l});
  PbConstraint c = normalize(terms, Relation::kGe, 1).front();
  return proof_->log_rup(c);
}

void Oracle::set_core(std::vector<Lit> failed_assumptions) {
  std::vector<Lit> negs;
  negs.reserve(failed_assumptions.size());
  for (Lit a : failed_assumptions) negs.push_back(~a);
  std::vector<Term> terms;
  for (Lit l : negs) terms.push_back({1, l});
  core_ = normalize(terms, Relation::kGe, 1).front();
  core_.id = log_clause(negs);
}

void Oracle::learn(std::vector<Lit> learnt) {
  log_clause(learnt);
  std::vector<Term> terms;
  terms.reserve(learnt.size());
  for (Lit l : learnt) terms.push_back({1, l});
  const auto ci = static_cast<uint32_t>(cons_.size());
  cons_.push_back(Cons{std::move(terms), 1, 0, true, true});
  if (learnt.size() >= 2) watch(ci);
  ++num_learned_;
  bump_cons(ci);
  assign(learnt[0], ci);
}

bool Oracle::locked(uint32_t ci) const {
  const Lit l = cons_[ci].terms[0].lit;
  return value(l) == 1 && reasons_[l.var().index] == ci;
}

void Oracle::reduce_learned() {
  std::vector<uint32_t> candidates;
  for (uint32_t ci = 0; ci < cons_.size(); ++ci) {
    const Cons& c = cons_[ci];
    if (c.learned && !c.deleted && c.terms.size() > 2 && !locked(ci)) candidates.push_back(ci);
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](uint32_t a, uint32_t b) { return cons_[a].activity < cons_[b].activity; });
  for (size_t i = 0; i < candidates.size() / 2; ++i) {
    Cons& c = cons_[candidates[i]];
    c.deleted = true;
    std::vector<Term>().swap(c.terms);
    --num_learned_;
  }
  max_learned_ += max_learned_ / 10;
}

bool Oracle::add_constraint(const PbConstraint& c) {
  if (root_unsat_) return false;
  backtrack(0);
  if (c.is_trivial()) return true;
  uint32_t max_var = 0;
  for (const Term& t : c.terms) max_var = std::max(max_var, t.lit.var().index);
  ensure_vars(max_var);
  if (!attach_root(c.terms, c.degree) || propagate() != kNoReason) {
    root_unsat_ = true;
    return false;
  }
  return true;
}

bool Oracle::add_clause(std::span<const Lit> lits) {
  std::vector<Term> terms;
  for (Lit l : lits) terms.push_back({1, l});
  return add_constraint(normalize(terms, Relation::kGe, 1).front());
}

Oracle::Status Oracle::solve(std::span<const Lit> assumptions) {
  ++solve_calls_;
  backtrack(0);
  for (Lit a : assumptions) ensure_vars(a.var().index);
  if (root_unsat_) {
    core_ = PbConstraint{{}, 1, std::nullopt};
    core_.id = log_clause({});
    return Status::kUnsat;
  }
  int64_t call_conflicts = 0;
  uint64_t restart_index = 0;
  uint64_t since_restart = 0;
  for (;;) {
    const uint32_t conflict = propagate();
    if (conflict != kNoReason) {
      ++conflicts_;
      ++ticks_;
      ++call_conflicts;
      ++since_restart;
      if (level() == 0) {
        root_unsat_ = true;
        core_ = PbConstraint{{}, 1, std::nullopt};
        core_.id = log_clause({});
        return Status::kUnsat;
      }
      auto [learnt, bt] = analyze(conflict);
      backtrack(bt);
      learn(std::move(learnt));
      if ((conflict_budget_ >= 0 && call_conflicts >= conflict_budget_) || (stop_ && stop_())) {
        backtrack(0);
        return Status::kInterrupted;
      }
      if (since_restart >= luby(restart_index) * kRestartUnit) {
        since_restart = 0;
        ++restart_index;
        backtrack(0);
        if (num_learned_ >= max_learned_) reduce_learned();
      }
      continue;
    }
    if (static_cast<size_t>(level()) < assumptions.size()) {
      const Lit a = assumptions[level()];
      const int v = value(a);
      if (v == 0) {
        std::vector<Lit> failed = analyze_final(a);
        backtrack(0);
        set_core(std::move(failed));
        return Status::kUnsat;
      }
      trail_lim_.push_back(trail_.size());
      if (v == -1) assign(a, kNoReason);
      continue;
    }
    uint32_t next = 0;
    while (!heap_.empty()) {
      const uint32_t v = heap_pop();
      if (values_[v] == -1) {
        next = v;
        break;
      }
    }
    if (next == 0) {
      model_ = Assignment(num_vars_);
      for (uint32_t v = 1; v <= num_vars_; ++v) model_.set(Var{v}, values_[v] == 1);
      backtrack(0);
      return Status::kSat;
    }
    trail_lim_.push_back(trail_.size());
    assign(Lit::make(Var{next}, phase_[next] != 1), kNoReason);
  }
}

ExtractCoresResult extract_cores(Oracle& oracle, const Objective& objective, const Assignment& gamma,
                                 uint32_t instance_vars) {
  ExtractCoresResult result;
  std::vector<Lit> assumptions;
  std::map<Lit, Int> residual;
  for (const Term& t : objective.terms) {
    if (!gamma.value(t.lit)) {
      assumptions.push_back(~t.lit);
      residual[t.lit] = t.coef;
    }
  }
  for (;;) {
    switch (oracle.solve(assumptions)) {
      case Oracle::Status::kInterrupted:
        result.interrupted = true;
        return result;
      case Oracle::Status::kSat:
        result.witness = oracle.model().restricted(instance_vars);
        return result;
      case Oracle::Status::kUnsat:
        break;
    }
    const PbConstraint& core = oracle.core();
    if (core.terms.empty()) throw std::runtime_error("formula is unsatisfiable");
    Int w_min = residual.at(core.terms.front().lit);
    for (const Term& t : core.terms) w_min = min(w_min, residual.at(t.lit));
    for (const Term& t : core.terms) {
      Int& r = residual.at(t.lit);
      r -= w_min;
      if (r == 0) std::erase(assumptions, ~t.lit);
    }
    result.new_cores.push_back(Core{core});
  }
}

}  // namespace pbihs
