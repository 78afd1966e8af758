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

#include "pbihs/proof.hpp"

namespace pbihs {

Var VarRegistry::register_fresh_var(const std::string& hint) {
  Var v{next_++};
  hints_.push_back(hint);
  return v;
}

const std::string& VarRegistry::hint(Var v) const {
  static const std::string kInstance = "input";
  if (v.index <= instance_vars_) return kInstance;
  return hints_.at(v.index - instance_vars_ - 1);
}

void Pol::token(const std::string& t) {
  if (!text_.empty()) text_.push_back(' ');
  text_ += t;
}

Pol& Pol::id(ConstraintId c) {
  token(std::to_string(c.value));
  return *this;
}
Pol& Pol::axiom(Lit l) {
  token(l.to_string());
  return *this;
}
Pol& Pol::obj() {
  token("obj");
  return *this;
}
Pol& Pol::add() {
  token("+");
  return *this;
}
Pol& Pol::mul(Int k) {
  token(k.to_string());
  token("*");
  return *this;
}
Pol& Pol::div(Int k) {
  token(k.to_string());
  token("d");
  return *this;
}
Pol& Pol::saturate() {
  token("s");
  return *this;
}

ProofLogger::ProofLogger(std::ostream* out, size_t input_constraints)
    : out_(out), next_id_(input_constraints + 1) {
  if (out_ != nullptr) *out_ << "pbihs-proof 1\nf " << input_constraints << "\n";
}

ConstraintId ProofLogger::issue() {
  ++steps_;
  return ConstraintId{next_id_++};
}

void ProofLogger::write_constraint(const PbConstraint& c) {
  for (const Term& t : c.terms) *out_ << "+" << t.coef << " " << t.lit.to_string() << " ";
  *out_ << ">= " << c.degree;
}

ConstraintId ProofLogger::log_pol(const Pol& p) {
  if (!enabled()) return {};
  *out_ << "pol " << p.text() << " ;\n";
  return issue();
}

ConstraintId ProofLogger::log_rup(const PbConstraint& c) {
  if (!enabled()) return {};
  *out_ << "rup ";
  write_constraint(c);
  *out_ << " ;\n";
  return issue();
}

std::pair<ConstraintId, std::optional<ConstraintId>> ProofLogger::log_reify(
    Var fresh, ReifyDir dir, const PbConstraint& c) {
  if (!enabled()) return {ConstraintId{}, std::nullopt};
  static constexpr const char* kDir[] = {"=>", "<=", "<=>"};
  *out_ << "red x" << fresh.index << " " << kDir[static_cast<int>(dir)] << " ";
  write_constraint(c);
  *out_ << " ;\n";
  ConstraintId first = issue();
  if (dir != ReifyDir::kEquiv) return {first, std::nullopt};
  // The second half consumes an id without a separate line.
  return {first, ConstraintId{next_id_++}};
}

void ProofLogger::log_solution(const Assignment& a, uint32_t num_vars, Int cost) {
  if (!enabled()) return;
  *out_ << "soli " << cost;
  for (uint32_t v = 1; v <= num_vars; ++v) {
    *out_ << (a.value(Var{v}) ? " x" : " ~x") << v;
  }
  *out_ << " ;\n";
  ++steps_;
}

void ProofLogger::conclude_optimal(Int cost, const Pol& derivation) {
  if (!enabled()) return;
  *out_ << "conclude optimal " << cost << " " << derivation.text() << " ;\n";
  out_->flush();
}

void ProofLogger::conclude_infeasible(ConstraintId contradiction) {
  if (!enabled()) return;
  *out_ << "conclude infeasible " << contradiction.value << " ;\n";
  out_->flush();
}

void ProofLogger::comment(const std::string& text) {
  if (!enabled()) return;
  *out_ << "* " << text << "\n";
}

PbConstraint improving_constraint(const Objective& o, Int bound) {
  // sum w l + const <= bound - 1
  PbConstraint c = normalize(o.terms, Relation::kLe, bound - 1 - o.constant).front();
  if (c.is_contradiction()) return PbConstraint{{}, 1, std::nullopt};
  if (c.is_trivial()) return PbConstraint{{}, 0, std::nullopt};
  return c;
}

PbConstraint reify_implies(Var x, const PbConstraint& c) {
  // d*~x + sum a l >= d
  std::vector<Term> raw = c.terms;
  raw.push_back({c.degree, Lit::negative(x)});
  return normalize(raw, Relation::kGe, c.degree).front();
}

PbConstraint reify_implied_by(Var x, const PbConstraint& c) {
  // (A - d + 1)*x + sum a ~l >= A - d + 1
  Int k = c.coef_sum() - c.degree + 1;
  std::vector<Term> raw;
  raw.reserve(c.terms.size() + 1);
  for (const Term& t : c.terms) raw.push_back({t.coef, ~t.lit});
  raw.push_back({k, Lit::positive(x)});
  return normalize(raw, Relation::kGe, k).front();
}

ReifiedSic ProofLogger::log_reified_sic(VarRegistry& vars, const Objective& o, Int bound) {
  ReifiedSic sic;
  sic.indicator = vars.register_fresh_var("sic");
  sic.body = improving_constraint(o, bound);
  if (enabled()) {
    auto [first, second] = log_reify(sic.indicator, ReifyDir::kEquiv, sic.body);
    sic.implies = first;
    sic.implied_by = *second;
  }
  return sic;
}

ConstraintId ProofLogger::log_core(const Core& core) {
  if (!enabled()) return {};
  if (core.constraint.id && core.constraint.id->value != 0) {
    return log_pol(Pol().id(*core.constraint.id).mul(1));
  }
  return log_rup(core.constraint);
}

}  // namespace pbihs
