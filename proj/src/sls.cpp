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

#include "pbihs/sls.hpp"

#include <algorithm>
#include <numeric>

namespace pbihs {

bool use_sls(std::span<const uint64_t> optimizer_samples, std::span<const uint64_t> sls_samples) {
  if (optimizer_samples.size() < 3 || sls_samples.size() < 3) return true;
  // Compare means without division: sum_o / n_o <= sum_s / n_s.
  const Int opt_sum = std::accumulate(optimizer_samples.begin(), optimizer_samples.end(), Int(0),
                                      [](Int acc, uint64_t v) { return acc + Int(static_cast<unsigned long>(v)); });
  const Int sls_sum = std::accumulate(sls_samples.begin(), sls_samples.end(), Int(0),
                                      [](Int acc, uint64_t v) { return acc + Int(static_cast<unsigned long>(v)); });
  return opt_sum * Int(sls_samples.size()) > sls_sum * Int(optimizer_samples.size());
}

bool use_sls(const SlsState& state) { return use_sls(state.optimizer_ticks(), state.sls_ticks()); }

Assignment perturb(const Assignment& start, std::span<const Var> vars, uint32_t rho_percent,
                   std::mt19937_64& rng) {
  const size_t n = vars.size();
  const size_t k = std::min(n, (static_cast<size_t>(rho_percent) * n + 99) / 100);
  std::vector<Var> pool(vars.begin(), vars.end());
  // Partial Fisher-Yates: the first k entries are a uniform sample.
  for (size_t i = 0; i < k; ++i) {
    const size_t j = i + static_cast<size_t>(rng() % (n - i));
    std::swap(pool[i], pool[j]);
  }
  Assignment out = start;
  for (size_t i = 0; i < k; ++i) out.set(pool[i], !out.value(pool[i]));
  return out;
}

SlsScorer::SlsScorer(std::span<const PbConstraint> cores, const Objective& objective, uint32_t num_vars,
                     std::vector<Int> weights, Int soft_weight)
    : cores_(cores),
      occ_(num_vars + 1),
      obj_weight_(num_vars + 1, Int(0)),
      weights_(std::move(weights)),
      soft_weight_(soft_weight),
      lhs_(cores.size(), Int(0)),
      unsat_pos_(cores.size(), -1) {
  weights_.resize(cores.size(), Int(1));
  for (uint32_t ci = 0; ci < cores.size(); ++ci) {
    for (const Term& t : cores[ci].terms) occ_[t.lit.var().index].push_back({ci, t.coef, t.lit.negated()});
  }
  base_cost_ = objective.constant;
  for (const Term& t : objective.terms) {
    const uint32_t v = t.lit.var().index;
    if (t.lit.negated()) {
      obj_weight_[v] -= t.coef;
      base_cost_ += t.coef;
    } else {
      obj_weight_[v] += t.coef;
    }
  }
}

void SlsScorer::mark(uint32_t ci) {
  const bool sat = lhs_[ci] >= cores_[ci].degree;
  const bool listed = unsat_pos_[ci] >= 0;
  if (sat && listed) {
    const auto pos = static_cast<size_t>(unsat_pos_[ci]);
    unsat_pos_[unsat_.back()] = static_cast<int64_t>(pos);
    unsat_[pos] = unsat_.back();
    unsat_.pop_back();
    unsat_pos_[ci] = -1;
  } else if (!sat && !listed) {
    unsat_pos_[ci] = static_cast<int64_t>(unsat_.size());
    unsat_.push_back(ci);
  }
}

void SlsScorer::reset(const Assignment& a) {
  assignment_ = a;
  unsat_.clear();
  std::fill(unsat_pos_.begin(), unsat_pos_.end(), -1);
  cost_ = base_cost_;
  for (uint32_t v = 1; v < obj_weight_.size(); ++v) {
    if (obj_weight_[v] != 0 && a.value(Var{v})) cost_ += obj_weight_[v];
  }
  for (uint32_t ci = 0; ci < cores_.size(); ++ci) {
    Int lhs = 0;
    for (const Term& t : cores_[ci].terms) {
      if (a.value(t.lit)) lhs += t.coef;
    }
    lhs_[ci] = lhs;
    mark(ci);
  }
}

Int SlsScorer::score(Var v) const {
  const bool now = assignment_.value(v);
  Int s = 0;
  for (const Occ& o : occ_[v.index]) {
    ++ticks_;
    const bool lit_true = now != o.negated;
    const Int after = lit_true ? lhs_[o.cons] - o.coef : lhs_[o.cons] + o.coef;
    s -= weights_[o.cons] * (penalty(o.cons, after) - penalty(o.cons, lhs_[o.cons]));
  }
  const Int cost_delta = now ? -obj_weight_[v.index] : obj_weight_[v.index];
  return s - soft_weight_ * cost_delta;
}

void SlsScorer::flip(Var v) {
  const bool now = assignment_.value(v);
  for (const Occ& o : occ_[v.index]) {
    ++ticks_;
    const bool lit_true = now != o.negated;
    lhs_[o.cons] += lit_true ? -o.coef : o.coef;
    mark(o.cons);
  }
  cost_ += now ? -obj_weight_[v.index] : obj_weight_[v.index];
  assignment_.set(v, !now);
}

namespace {

struct Found {
  Assignment assignment;
  Int cost;
};

template <typename T>
const T& pick(const std::vector<T>& items, std::mt19937_64& rng) {
  return items[static_cast<size_t>(rng() % items.size())];
}

class Search {
 public:
  Search(SlsScorer& scorer, std::span<const Var> vars, const Objective& objective, SlsState& state)
      : scorer_(scorer), vars_(vars), objective_(objective), state_(state) {}

  std::optional<Found> run(const Assignment& start, uint64_t budget) {
    scorer_.reset(start);
    std::optional<Found> best;
    record(best);
    for (uint64_t f = 0; f < budget; ++f) {
      std::optional<Var> v = greedy();
      if (!v) v = escape();
      if (!v) break;
      scorer_.flip(*v);
      ++state_.flips;
      record(best);
    }
    return best;
  }

 private:
  void record(std::optional<Found>& best) const {
    if (scorer_.num_unsat() != 0) return;
    if (!best || scorer_.cost() < best->cost) best = Found{scorer_.assignment(), scorer_.cost()};
  }

  // Best strictly positive flip, ties broken uniformly.
  std::optional<Var> greedy() {
    const SlsConfig& cfg = state_.config();
    std::vector<Var> top;
    Int best = 0;
    auto consider = [&](Var v) {
      const Int s = scorer_.score(v);
      if (s <= 0 || s < best) return;
      if (s > best) {
        best = s;
        top.clear();
      }
      top.push_back(v);
    };
    if (vars_.size() > cfg.bms_threshold) {
      for (size_t i = 0; i < cfg.bms_samples; ++i) consider(vars_[static_cast<size_t>(state_.rng()() % vars_.size())]);
    } else {
      for (Var v : vars_) consider(v);
    }
    if (top.empty()) return std::nullopt;
    return pick(top, state_.rng());
  }

  std::optional<Var> escape() {
    std::vector<Int>& w = scorer_.weights();
    if (state_.rng()() % 100 < state_.config().smooth_percent) {
      for (uint32_t ci = 0; ci < w.size(); ++ci) {
        if (w[ci] > 1 && scorer_.satisfied(ci)) w[ci] -= 1;
      }
    } else {
      for (uint32_t ci : scorer_.unsat()) w[ci] += 1;
    }
    std::vector<Var> candidates;
    if (scorer_.num_unsat() != 0) {
      const uint32_t ci = pick(scorer_.unsat(), state_.rng());
      for (const Term& t : scorer_.constraint(ci).terms) {
        if (!scorer_.assignment().value(t.lit)) candidates.push_back(t.lit.var());
      }
    } else {
      for (const Term& t : objective_.terms) {
        if (scorer_.assignment().value(t.lit)) candidates.push_back(t.lit.var());
      }
    }
    if (candidates.empty()) return std::nullopt;
    std::vector<Var> top;
    std::optional<Int> best;
    for (Var v : candidates) {
      const Int s = scorer_.score(v);
      if (best && s < *best) continue;
      if (!best || s > *best) {
        best = s;
        top.clear();
      }
      top.push_back(v);
    }
    return pick(top, state_.rng());
  }

  SlsScorer& scorer_;
  std::span<const Var> vars_;
  const Objective& objective_;
  SlsState& state_;
};

}  // namespace

std::optional<Assignment> sls_search(std::span<const PbConstraint> cores, const Objective& objective,
                                     uint32_t num_vars, SlsState& state, std::optional<uint64_t> flip_budget) {
  ++state.calls;
  Assignment zero(num_vars);
  for (uint32_t v = 1; v <= num_vars; ++v) zero.set(Var{v}, false);
  if (cores.empty()) {
    state.set_previous(zero);
    state.record_sls_ticks(1);
    return zero;
  }
  std::vector<Var> vars;
  for (const Term& t : objective.terms) vars.push_back(t.lit.var());

  Assignment start = zero;
  if (state.previous()) {
    for (uint32_t v = 1; v <= num_vars; ++v) {
      if (state.previous()->assigned(Var{v})) start.set(Var{v}, state.previous()->value(Var{v}));
    }
  }
  const SlsConfig& cfg = state.config();
  const uint64_t budget = flip_budget.value_or(cfg.flip_multiplier * vars.size());

  SlsScorer scorer(cores, objective, num_vars, std::move(state.weights()), cfg.soft_weight);
  Search search(scorer, vars, objective, state);
  std::optional<Found> phase1 = search.run(start, budget);
  const Assignment restart = perturb(start, vars, cfg.rho_percent, state.rng());
  std::optional<Found> phase2 = search.run(restart, budget);
  state.weights() = std::move(scorer.weights());
  state.record_sls_ticks(scorer.ticks() + 1);

  std::optional<Found> best = phase2;
  if (phase1 && (!best || phase1->cost < best->cost)) best = phase1;
  if (!best) return std::nullopt;
  state.set_previous(best->assignment);
  return best->assignment;
}

}  // namespace pbihs
