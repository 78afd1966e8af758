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

#include "pbihs/checker.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace pbihs {

namespace {

// ---------------------------------------------------------------------------
// Parsing

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> out;
  size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    if (c == ';') {
      out.push_back(line.substr(i, 1));
      ++i;
      continue;
    }
    size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r' && line[j] != ';') ++j;
    out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::optional<Lit> parse_lit(std::string_view tok) {
  bool neg = false;
  if (!tok.empty() && tok[0] == '~') {
    neg = true;
    tok.remove_prefix(1);
  }
  if (tok.size() < 2 || tok[0] != 'x') return std::nullopt;
  uint64_t v = 0;
  for (char c : tok.substr(1)) {
    if (c < '0' || c > '9') return std::nullopt;
    v = v * 10 + static_cast<uint64_t>(c - '0');
    if (v >= (uint64_t{1} << 30)) return std::nullopt;
  }
  if (v == 0) return std::nullopt;
  return Lit::make(Var{static_cast<uint32_t>(v)}, neg);
}

class ParseFailure {
 public:
  explicit ParseFailure(std::string m) : message(std::move(m)) {}
  std::string message;
};

Int parse_int(std::string_view tok) {
  std::optional<Int> v = Int::parse(tok);
  if (!v) throw ParseFailure("bad integer '" + std::string(tok) + "'");
  return *v;
}

// Parses "terms >= degree" from toks[i..end) and normalizes it.
PbConstraint parse_constraint(const std::vector<std::string_view>& toks, size_t i, size_t end) {
  std::vector<Term> terms;
  while (i < end && toks[i] != ">=") {
    if (i + 1 >= end) throw ParseFailure("incomplete term");
    Int coef = parse_int(toks[i]);
    std::optional<Lit> lit = parse_lit(toks[i + 1]);
    if (!lit) throw ParseFailure("bad literal '" + std::string(toks[i + 1]) + "'");
    terms.push_back({coef, *lit});
    i += 2;
  }
  if (i + 2 != end) throw ParseFailure("expected '>= <degree>'");
  Int degree = parse_int(toks[i + 1]);
  return normalize(terms, Relation::kGe, degree).front();
}

std::vector<PolToken> parse_postfix(const std::vector<std::string_view>& toks, size_t i, size_t end) {
  std::vector<PolToken> out;
  for (; i < end; ++i) {
    std::string_view t = toks[i];
    PolToken tok{};
    if (t == "+") {
      tok.kind = PolToken::Kind::kAdd;
    } else if (t == "s") {
      tok.kind = PolToken::Kind::kSaturate;
    } else if (t == "obj") {
      tok.kind = PolToken::Kind::kObj;
    } else if (auto lit = parse_lit(t)) {
      tok.kind = PolToken::Kind::kAxiom;
      tok.lit = *lit;
    } else {
      Int v = parse_int(t);
      if (i + 1 < end && (toks[i + 1] == "*" || toks[i + 1] == "d")) {
        tok.kind = toks[i + 1] == "*" ? PolToken::Kind::kMul : PolToken::Kind::kDiv;
        tok.k = v;
        ++i;
      } else {
        if (v <= 0) throw ParseFailure("constraint ids are positive");
        tok.kind = PolToken::Kind::kId;
        tok.id = static_cast<uint64_t>(v.to_int64());
      }
    }
    out.push_back(tok);
  }
  if (out.empty()) throw ParseFailure("empty derivation");
  return out;
}

ProofStep parse_step(const std::vector<std::string_view>& toks) {
  const std::string_view kw = toks[0];
  size_t end = toks.size();
  if (toks.back() != ";") throw ParseFailure("missing ';'");
  --end;
  if (kw == "pol") return PolStep{parse_postfix(toks, 1, end)};
  if (kw == "rup") return RupStep{parse_constraint(toks, 1, end)};
  if (kw == "red") {
    if (end < 3) throw ParseFailure("incomplete reification");
    std::optional<Lit> lit = parse_lit(toks[1]);
    if (!lit || lit->negated()) throw ParseFailure("reification needs a positive variable");
    ReifyDir dir;
    if (toks[2] == "=>") {
      dir = ReifyDir::kImplies;
    } else if (toks[2] == "<=") {
      dir = ReifyDir::kImpliedBy;
    } else if (toks[2] == "<=>") {
      dir = ReifyDir::kEquiv;
    } else {
      throw ParseFailure("bad reification direction '" + std::string(toks[2]) + "'");
    }
    return ReifyStep{lit->var(), dir, parse_constraint(toks, 3, end)};
  }
  if (kw == "soli") {
    if (end < 2) throw ParseFailure("solution without cost");
    SolutionStep s{parse_int(toks[1]), {}};
    for (size_t i = 2; i < end; ++i) {
      std::optional<Lit> lit = parse_lit(toks[i]);
      if (!lit) throw ParseFailure("bad literal '" + std::string(toks[i]) + "'");
      s.lits.push_back(*lit);
    }
    return s;
  }
  if (kw == "conclude") {
    if (end >= 3 && toks[1] == "optimal") {
      return ConcludeOptimalStep{parse_int(toks[2]), parse_postfix(toks, 3, end)};
    }
    if (end == 3 && toks[1] == "infeasible") {
      Int id = parse_int(toks[2]);
      if (id <= 0) throw ParseFailure("constraint ids are positive");
      return ConcludeInfeasibleStep{static_cast<uint64_t>(id.to_int64())};
    }
    throw ParseFailure("malformed conclusion");
  }
  throw ParseFailure("unknown rule '" + std::string(kw) + "'");
}

// ---------------------------------------------------------------------------
// Unit propagation over the derived database

class RupEngine {
 public:
  void ensure_var(uint32_t v) {
    if (v >= values_.size()) {
      values_.resize(v + 1, -1);
      occ_.resize(2 * (v + 1));
      watches_.resize(2 * (v + 1));
    }
  }

  bool root_conflict() const { return root_conflict_; }

  void add_root(const PbConstraint& c) {
    if (root_conflict_) return;
    root_conflict_ = !attach(c) || !propagate();
  }

  /// True iff adding `c` at a temporary level propagates to a conflict.
  bool refutes(const PbConstraint& c) {
    if (root_conflict_) return true;
    const size_t root_trail = trail_.size();
    const size_t before = cons_.size();
    temporary_ = true;
    const bool conflict = !attach(c) || !propagate();
    temporary_ = false;
    // Undo the temporary level.
    for (size_t i = trail_.size(); i-- > root_trail;) {
      const Lit l = trail_[i];
      if (i < qhead_) {
        for (const auto& [ci, a] : occ_[(~l).code()]) cons_[ci].slack += a;
      }
      values_[l.var().index] = -1;
    }
    trail_.resize(root_trail);
    qhead_ = root_trail;
    while (cons_.size() > before) {
      for (const Term& t : cons_.back().terms) occ_[t.lit.code()].pop_back();
      cons_.pop_back();
    }
    return conflict;
  }

 private:
  struct Cons {
    std::vector<Term> terms;  // clauses: watched literals first; else decreasing coefficient
    Int degree;
    Int slack;
  };
  struct Watch {
    uint32_t cons;
    Lit blocker;
  };

  int lit_value(Lit l) const {
    int8_t v = values_[l.var().index];
    if (v < 0) return -1;
    return (v == 1) != l.negated() ? 1 : 0;
  }

  void assign(Lit l) {
    values_[l.var().index] = l.negated() ? 0 : 1;
    trail_.push_back(l);
  }

  // Returns false on immediate conflict. Permanent clauses are watched,
  // everything else keeps a slack counter.
  bool attach(const PbConstraint& c) {
    for (const Term& t : c.terms) ensure_var(t.lit.var().index);
    Cons k{c.terms, c.degree, 0};
    for (Term& t : k.terms) t.coef = min(t.coef, k.degree);
    if (!temporary_ && k.degree == 1) {
      const auto idx = static_cast<uint32_t>(clauses_.size());
      std::stable_partition(k.terms.begin(), k.terms.end(), [&](const Term& t) { return lit_value(t.lit) != 0; });
      if (k.terms.empty() || lit_value(k.terms[0].lit) == 0) return false;
      const bool unit = k.terms.size() == 1 || lit_value(k.terms[1].lit) == 0;
      if (k.terms.size() >= 2) {
        watches_[k.terms[0].lit.code()].push_back({idx, k.terms[1].lit});
        watches_[k.terms[1].lit.code()].push_back({idx, k.terms[0].lit});
      }
      if (unit && lit_value(k.terms[0].lit) == -1) assign(k.terms[0].lit);
      clauses_.push_back(std::move(k.terms));
      return true;
    }
    std::sort(k.terms.begin(), k.terms.end(), [](const Term& a, const Term& b) { return a.coef > b.coef; });
    Int slack = -k.degree;
    for (const Term& t : k.terms) {
      if (lit_value(t.lit) != 0) slack += t.coef;
    }
    k.slack = slack;
    const auto idx = static_cast<uint32_t>(cons_.size());
    for (const Term& t : k.terms) occ_[t.lit.code()].push_back({idx, t.coef});
    cons_.push_back(std::move(k));
    if (slack < 0) return false;
    fire(idx);
    return true;
  }

  // Assigns every unassigned literal whose coefficient exceeds the slack.
  void fire(uint32_t idx) {
    const Cons& k = cons_[idx];
    for (const Term& t : k.terms) {
      if (t.coef <= k.slack) break;
      if (lit_value(t.lit) == -1) assign(t.lit);
    }
  }

  bool propagate_clauses(Lit false_lit) {
    std::vector<Watch>& ws = watches_[false_lit.code()];
    size_t i = 0;
    size_t j = 0;
    while (i < ws.size()) {
      const Watch w = ws[i++];
      if (lit_value(w.blocker) == 1) {
        ws[j++] = w;
        continue;
      }
      std::vector<Term>& t = clauses_[w.cons];
      if (t[0].lit == false_lit) std::swap(t[0], t[1]);
      const Lit first = t[0].lit;
      if (first != w.blocker && lit_value(first) == 1) {
        ws[j++] = {w.cons, first};
        continue;
      }
      bool moved = false;
      for (size_t k = 2; k < t.size(); ++k) {
        if (lit_value(t[k].lit) != 0) {
          std::swap(t[1], t[k]);
          watches_[t[1].lit.code()].push_back({w.cons, first});
          moved = true;
          break;
        }
      }
      if (moved) continue;
      ws[j++] = {w.cons, first};
      if (lit_value(first) == 0) {
        while (i < ws.size()) ws[j++] = ws[i++];
        ws.resize(j);
        return false;
      }
      assign(first);
    }
    ws.resize(j);
    return true;
  }

  bool propagate() {
    while (qhead_ < trail_.size()) {
      const Lit false_lit = ~trail_[qhead_++];
      // Every counter of this literal is updated so that undo stays exact.
      bool conflict = false;
      for (const auto& [ci, a] : occ_[false_lit.code()]) {
        Cons& k = cons_[ci];
        k.slack -= a;
        if (k.slack < 0) {
          conflict = true;
        } else if (!conflict && k.terms.front().coef > k.slack) {
          fire(ci);
        }
      }
      if (conflict || !propagate_clauses(false_lit)) return false;
    }
    return true;
  }

  std::vector<Cons> cons_;
  std::vector<std::vector<Term>> clauses_;
  std::vector<std::vector<std::pair<uint32_t, Int>>> occ_;
  std::vector<std::vector<Watch>> watches_;
  std::vector<int8_t> values_;
  std::vector<Lit> trail_;
  size_t qhead_ = 0;
  bool root_conflict_ = false;
  bool temporary_ = false;
};

// ---------------------------------------------------------------------------
// Cutting-planes arithmetic

// sum c_v x_v >= degree over positive literals, any coefficient sign.
struct Linear {
  std::map<uint32_t, Int> coefs;
  Int degree = 0;

  static Linear from(const PbConstraint& c) {
    Linear l;
    l.degree = c.degree;
    for (const Term& t : c.terms) {
      if (t.lit.negated()) {
        l.coefs[t.lit.var().index] -= t.coef;
        l.degree -= t.coef;
      } else {
        l.coefs[t.lit.var().index] += t.coef;
      }
    }
    return l;
  }

  PbConstraint normalized() const {
    std::vector<Term> terms;
    for (const auto& [v, c] : coefs) {
      if (c != 0) terms.push_back({c, Lit::positive(Var{v})});
    }
    return normalize(terms, Relation::kGe, degree).front();
  }
};

class StepFailure {
 public:
  explicit StepFailure(std::string m) : message(std::move(m)) {}
  std::string message;
};

class Checker {
 public:
  explicit Checker(const Instance& inst) : inst_(inst) {
    db_.push_back(std::nullopt);  // ids start at 1
    used_.resize(inst.num_vars + 1, true);
    for (const PbConstraint& c : inst.constraints) {
      for (const Term& t : c.terms) mark_used(t.lit.var());
      db_.push_back(c);
      engine_.add_root(c);
    }
  }

  CheckResult run(const ProofLog& proof) {
    CheckResult r;
    if (proof.input_constraints != inst_.constraints.size()) {
      r.reason = "proof declares " + std::to_string(proof.input_constraints) +
                 " input constraints, instance has " + std::to_string(inst_.constraints.size());
      return r;
    }
    for (size_t i = 0; i < proof.steps.size(); ++i) {
      r.step_index = i + 1;
      r.line = i < proof.step_lines.size() ? proof.step_lines[i] : 0;
      if (concluded_) {
        r.reason = "step after conclusion";
        return r;
      }
      try {
        std::visit([this](const auto& s) { apply(s); }, proof.steps[i]);
      } catch (const StepFailure& f) {
        r.reason = f.message;
        return r;
      } catch (const std::exception& e) {
        r.reason = std::string("arithmetic failure: ") + e.what();
        return r;
      }
    }
    if (!concluded_) {
      r.step_index = proof.steps.size() + 1;
      r.reason = "proof has no conclusion";
      return r;
    }
    r.accepted = true;
    r.step_index = 0;
    r.line = 0;
    r.optimal_cost = optimal_;
    r.infeasible = infeasible_;
    return r;
  }

 private:
  void mark_used(Var v) {
    if (v.index >= used_.size()) used_.resize(v.index + 1, false);
    used_[v.index] = true;
  }
  bool fresh(Var v) const {
    return v.index > inst_.num_vars && (v.index >= used_.size() || !used_[v.index]);
  }

  void store(PbConstraint c) {
    for (const Term& t : c.terms) mark_used(t.lit.var());
    engine_.add_root(c);
    db_.push_back(std::move(c));
  }

  const PbConstraint& lookup(uint64_t id) const {
    if (id == 0 || id >= db_.size()) throw StepFailure("reference to unknown constraint id " + std::to_string(id));
    if (!db_[id]) throw StepFailure("constraint id " + std::to_string(id) + " is not available");
    return *db_[id];
  }

  PbConstraint evaluate(const std::vector<PolToken>& toks, const std::optional<PbConstraint>& obj) {
    std::vector<Linear> stack;
    auto pop = [&] {
      if (stack.empty()) throw StepFailure("postfix stack underflow");
      Linear l = std::move(stack.back());
      stack.pop_back();
      return l;
    };
    for (const PolToken& t : toks) {
      switch (t.kind) {
        case PolToken::Kind::kId:
          stack.push_back(Linear::from(lookup(t.id)));
          break;
        case PolToken::Kind::kAxiom: {
          mark_used(t.lit.var());
          stack.push_back(Linear::from(PbConstraint{{{1, t.lit}}, 0, std::nullopt}));
          break;
        }
        case PolToken::Kind::kObj:
          if (!obj) throw StepFailure("'obj' is only available in an optimality conclusion");
          stack.push_back(Linear::from(*obj));
          break;
        case PolToken::Kind::kAdd: {
          Linear b = pop();
          Linear a = pop();
          for (const auto& [v, c] : b.coefs) a.coefs[v] += c;
          a.degree += b.degree;
          stack.push_back(std::move(a));
          break;
        }
        case PolToken::Kind::kMul: {
          if (t.k <= 0) throw StepFailure("multiplier must be positive");
          Linear a = pop();
          for (auto& [v, c] : a.coefs) c *= t.k;
          a.degree *= t.k;
          stack.push_back(std::move(a));
          break;
        }
        case PolToken::Kind::kDiv: {
          if (t.k <= 0) throw StepFailure("divisor must be positive");
          PbConstraint n = pop().normalized();
          for (Term& term : n.terms) term.coef = ceil_div(term.coef, t.k);
          n.degree = ceil_div(n.degree, t.k);
          stack.push_back(Linear::from(n));
          break;
        }
        case PolToken::Kind::kSaturate: {
          PbConstraint n = pop().normalized();
          for (Term& term : n.terms) term.coef = min(term.coef, n.degree);
          std::erase_if(n.terms, [](const Term& term) { return term.coef <= 0; });
          stack.push_back(Linear::from(n));
          break;
        }
      }
    }
    if (stack.size() != 1) throw StepFailure("postfix expression leaves " + std::to_string(stack.size()) + " entries");
    return stack.back().normalized();
  }

  void apply(const PolStep& s) { store(evaluate(s.tokens, std::nullopt)); }

  void apply(const RupStep& s) {
    if (!s.constraint.is_trivial() && !engine_.refutes(negate(s.constraint))) {
      throw StepFailure("constraint is not implied by reverse unit propagation: " + s.constraint.to_string());
    }
    store(s.constraint);
  }

  void apply(const ReifyStep& s) {
    if (!fresh(s.var)) throw StepFailure("reification variable x" + std::to_string(s.var.index) + " is not fresh");
    for (const Term& t : s.constraint.terms) {
      if (t.lit.var() == s.var) throw StepFailure("reified constraint mentions its own variable");
    }
    mark_used(s.var);
    const PbConstraint& c = s.constraint;
    const Int d = c.degree;
    if (s.dir == ReifyDir::kImplies || s.dir == ReifyDir::kEquiv) {
      std::vector<Term> raw = c.terms;
      raw.push_back({d, Lit::negative(s.var)});
      store(normalize(raw, Relation::kGe, d).front());
    }
    if (s.dir == ReifyDir::kImpliedBy || s.dir == ReifyDir::kEquiv) {
      Int sum = 0;
      std::vector<Term> raw;
      for (const Term& t : c.terms) {
        sum += t.coef;
        raw.push_back({t.coef, ~t.lit});
      }
      const Int k = sum - d + 1;
      raw.push_back({k, Lit::positive(s.var)});
      store(normalize(raw, Relation::kGe, k).front());
    }
  }

  void apply(const SolutionStep& s) {
    Assignment a(inst_.num_vars);
    for (Lit l : s.lits) {
      if (l.var().index > inst_.num_vars) throw StepFailure("solution mentions non-input variable " + l.to_string());
      if (a.assigned(l.var())) throw StepFailure("solution assigns x" + std::to_string(l.var().index) + " twice");
      a.set(l.var(), !l.negated());
    }
    if (!a.complete()) throw StepFailure("solution does not assign every input variable");
    for (size_t i = 0; i < inst_.constraints.size(); ++i) {
      if (!pbihs::evaluate(inst_.constraints[i], a)) {
        throw StepFailure("solution violates input constraint " + std::to_string(i + 1));
      }
    }
    Int c = cost(inst_.objective, a);
    if (c != s.cost) throw StepFailure("solution cost is " + c.to_string() + ", claimed " + s.cost.to_string());
    logged_costs_.insert(c);
  }

  void apply(const ConcludeOptimalStep& s) {
    if (!logged_costs_.contains(s.cost)) {
      throw StepFailure("no logged solution has cost " + s.cost.to_string());
    }
    // O <= c - 1
    PbConstraint obj =
        normalize(inst_.objective.terms, Relation::kLe, s.cost - 1 - inst_.objective.constant).front();
    PbConstraint result = evaluate(s.tokens, obj);
    if (!result.is_contradiction()) {
      throw StepFailure("final derivation does not reach a contradiction: " + result.to_string());
    }
    optimal_ = s.cost;
    concluded_ = true;
  }

  void apply(const ConcludeInfeasibleStep& s) {
    if (!lookup(s.id).is_contradiction()) {
      throw StepFailure("constraint " + std::to_string(s.id) + " is not a contradiction");
    }
    infeasible_ = true;
    concluded_ = true;
  }

  const Instance& inst_;
  std::vector<std::optional<PbConstraint>> db_;
  std::vector<bool> used_;
  RupEngine engine_;
  std::set<Int> logged_costs_;
  std::optional<Int> optimal_;
  bool infeasible_ = false;
  bool concluded_ = false;
};

}  // namespace

std::variant<ProofLog, ProofParseError> parse_proof(std::string_view text) {
  ProofLog log;
  bool header = false;
  bool counts = false;
  size_t line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++line_no;
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    std::vector<std::string_view> toks = split_tokens(line);
    if (toks.empty() || toks[0][0] == '*') continue;
    try {
      if (!header) {
        if (toks.size() != 2 || toks[0] != "pbihs-proof" || toks[1] != "1") {
          return ProofParseError{line_no, "missing 'pbihs-proof 1' header"};
        }
        header = true;
        continue;
      }
      if (!counts) {
        if (toks.size() != 2 || toks[0] != "f") return ProofParseError{line_no, "expected 'f <count>'"};
        Int m = parse_int(toks[1]);
        if (m < 0) return ProofParseError{line_no, "negative constraint count"};
        log.input_constraints = static_cast<uint64_t>(m.to_int64());
        counts = true;
        continue;
      }
      log.steps.push_back(parse_step(toks));
      log.step_lines.push_back(line_no);
    } catch (const ParseFailure& f) {
      return ProofParseError{line_no, f.message};
    } catch (const std::exception& e) {
      return ProofParseError{line_no, e.what()};
    }
  }
  if (!header || !counts) return ProofParseError{line_no, "incomplete proof header"};
  return log;
}

CheckResult check(const Instance& instance, const ProofLog& proof) {
  // The database also grows by the second half of <=> reifications; ids
  // follow ProofLogger's numbering because Checker::store runs once per
  // emitted constraint.
  Checker checker(instance);
  return checker.run(proof);
}

CheckResult check(const Instance& instance, std::string_view proof_text) {
  auto parsed = parse_proof(proof_text);
  if (auto* err = std::get_if<ProofParseError>(&parsed)) {
    CheckResult r;
    r.line = err->line;
    r.reason = "parse error: " + err->message;
    return r;
  }
  return check(instance, std::get<ProofLog>(parsed));
}

}  // namespace pbihs
