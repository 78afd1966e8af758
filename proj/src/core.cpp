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

#include "pbihs/core.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace pbihs {

std::string Lit::to_string() const {
  return (negated() ? "~x" : "x") + std::to_string(var().index);
}

Int PbConstraint::coef_sum() const {
  Int s = 0;
  for (const Term& t : terms) s += t.coef;
  return s;
}

bool PbConstraint::is_clause() const {
  if (degree != 1) return false;
  return std::all_of(terms.begin(), terms.end(), [](const Term& t) { return t.coef == 1; });
}

std::string PbConstraint::to_string() const {
  std::ostringstream os;
  for (const Term& t : terms) os << "+" << t.coef << " " << t.lit.to_string() << " ";
  os << ">= " << degree;
  return os.str();
}

Int Objective::weight_sum() const {
  Int s = 0;
  for (const Term& t : terms) s += t.coef;
  return s;
}

void Assignment::resize(uint32_t num_vars) { values_.resize(num_vars + 1, kUnassigned); }

void Assignment::set(Var v, bool value) {
  if (v.index == 0) throw ContractViolation("variable index 0");
  if (v.index >= values_.size()) resize(v.index);
  values_[v.index] = value ? 1 : 0;
}

void Assignment::unset(Var v) {
  if (v.index < values_.size()) values_[v.index] = kUnassigned;
}

bool Assignment::value(Var v) const {
  if (!assigned(v)) {
    throw ContractViolation("variable x" + std::to_string(v.index) + " is unassigned");
  }
  return values_[v.index] == 1;
}

bool Assignment::complete() const {
  return std::none_of(values_.begin() + (values_.empty() ? 0 : 1), values_.end(),
                      [](int8_t x) { return x == kUnassigned; });
}

Assignment Assignment::restricted(uint32_t n) const {
  Assignment out(n);
  for (uint32_t v = 1; v <= n && v < values_.size(); ++v) {
    if (values_[v] != kUnassigned) out.set(Var{v}, values_[v] == 1);
  }
  return out;
}

void Bounds::raise_lower(Int value) {
  if (lower_ && value < *lower_) throw ContractViolation("lower bound would decrease");
  if (upper_ && value > *upper_) throw ContractViolation("lower bound would exceed upper bound");
  lower_ = value;
}

void Bounds::lower_upper(Int value) {
  if (upper_ && value > *upper_) throw ContractViolation("upper bound would increase");
  if (lower_ && value < *lower_) throw ContractViolation("upper bound would drop below lower bound");
  upper_ = value;
}

namespace {

// Merges raw terms into coefficients over positive literals plus a constant
// shift: a*~x contributes a - a*x.
std::map<uint32_t, Int> merge_positive(std::span<const Term> raw, Int& shift) {
  std::map<uint32_t, Int> coefs;
  for (const Term& t : raw) {
    if (t.lit.var().index == 0) throw ContractViolation("variable index 0");
    if (t.lit.negated()) {
      shift += t.coef;
      coefs[t.lit.var().index] -= t.coef;
    } else {
      coefs[t.lit.var().index] += t.coef;
    }
  }
  return coefs;
}

// sum c_v x_v >= rhs over positive literals, coefficients of any sign.
PbConstraint normalize_ge(const std::map<uint32_t, Int>& coefs, Int rhs) {
  PbConstraint out;
  for (const auto& [v, c] : coefs) {
    if (c == 0) continue;
    if (c > 0) {
      out.terms.push_back({c, Lit::positive(Var{v})});
    } else {
      // c*x = |c|*~x - |c|
      out.terms.push_back({-c, Lit::negative(Var{v})});
      rhs += -c;
    }
  }
  out.degree = rhs < 0 ? Int(0) : rhs;
  return out;
}

}  // namespace

std::vector<PbConstraint> normalize(std::span<const Term> raw_terms, Relation relation, Int rhs) {
  Int shift = 0;
  std::map<uint32_t, Int> coefs = merge_positive(raw_terms, shift);
  Int ge_rhs = rhs - shift;  // sum c_v x_v >= rhs - shift
  std::vector<PbConstraint> out;
  auto negated_coefs = [&] {
    std::map<uint32_t, Int> n;
    for (const auto& [v, c] : coefs) n[v] = -c;
    return n;
  };
  switch (relation) {
    case Relation::kGe:
      out.push_back(normalize_ge(coefs, ge_rhs));
      break;
    case Relation::kLe:
      out.push_back(normalize_ge(negated_coefs(), -ge_rhs));
      break;
    case Relation::kEq:
      out.push_back(normalize_ge(coefs, ge_rhs));
      out.push_back(normalize_ge(negated_coefs(), -ge_rhs));
      break;
  }
  return out;
}

Objective normalize_objective(std::span<const Term> raw_terms, Int constant) {
  Int shift = 0;
  std::map<uint32_t, Int> coefs = merge_positive(raw_terms, shift);
  Objective o;
  o.constant = constant + shift;
  for (const auto& [v, w] : coefs) {
    if (w == 0) continue;
    if (w > 0) {
      o.terms.push_back({w, Lit::positive(Var{v})});
    } else {
      // w*x = w + |w|*~x
      o.terms.push_back({-w, Lit::negative(Var{v})});
      o.constant += w;
    }
  }
  return o;
}

bool evaluate(const PbConstraint& c, const Assignment& a) {
  Int lhs = 0;
  for (const Term& t : c.terms) {
    if (a.value(t.lit)) lhs += t.coef;
  }
  return lhs >= c.degree;
}

Int cost(const Objective& o, const Assignment& a) {
  Int total = o.constant;
  for (const Term& t : o.terms) {
    if (a.value(t.lit)) total += t.coef;
  }
  return total;
}

std::vector<Var> collect_vars(std::span<const PbConstraint> constraints) {
  std::vector<Var> vars;
  for (const PbConstraint& c : constraints) {
    for (const Term& t : c.terms) vars.push_back(t.lit.var());
  }
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  return vars;
}

bool entailed_by_bruteforce(std::span<const PbConstraint> formula, const PbConstraint& c) {
  std::vector<PbConstraint> all(formula.begin(), formula.end());
  all.push_back(c);
  std::vector<Var> vars = collect_vars(all);
  if (vars.size() > kMaxBruteForceVars) {
    throw ContractViolation("entailed_by_bruteforce: " + std::to_string(vars.size()) +
                            " variables exceed the enumeration guard");
  }
  uint32_t max_index = vars.empty() ? 0 : vars.back().index;
  Assignment a(max_index);
  const uint64_t count = uint64_t{1} << vars.size();
  for (uint64_t mask = 0; mask < count; ++mask) {
    for (size_t i = 0; i < vars.size(); ++i) a.set(vars[i], ((mask >> i) & 1u) != 0);
    bool models_formula = std::all_of(formula.begin(), formula.end(),
                                      [&](const PbConstraint& f) { return evaluate(f, a); });
    if (models_formula && !evaluate(c, a)) return false;
  }
  return true;
}

PbConstraint negate(const PbConstraint& c) {
  // not(sum a l >= d)  <=>  sum a l <= d - 1
  std::vector<PbConstraint> n = normalize(c.terms, Relation::kLe, c.degree - 1);
  return n.front();
}

}  // namespace pbihs
