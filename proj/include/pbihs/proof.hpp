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

// Proof logging for a whole solver run in a cutting-planes text format.
//
//   pbihs-proof 1
//   f <m>                                input constraints get ids 1..m
//   pol <postfix> ;                      cutting planes; new id
//   rup <constraint> ;                   reverse unit propagation; new id
//   red <x> <dir> <constraint> ;         reification of a fresh variable,
//                                        dir is =>, <= or <=> (two ids)
//   soli <cost> <lit>... ;               a solution over all input variables
//   conclude optimal <c> <postfix> ;     postfix may use `obj` (O <= c-1)
//   conclude infeasible <id> ;
//
// Postfix tokens: a constraint id, a literal axiom (x3 / ~x3 meaning l >= 0),
// `+`, `<k> *`, `<k> d` (divide, rounding up) and `s` (saturate).

#ifndef PBIHS_PROOF_HPP_
#define PBIHS_PROOF_HPP_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "pbihs/core.hpp"

namespace pbihs {

/// Issues variables that are unused by the instance and by every earlier
/// proof step. Both oracle-side and backend-side auxiliaries come from here.
class VarRegistry {
 public:
  explicit VarRegistry(uint32_t instance_vars) : instance_vars_(instance_vars), next_(instance_vars + 1) {}

  Var register_fresh_var(const std::string& hint);
  uint32_t instance_vars() const { return instance_vars_; }
  /// Highest variable index issued so far (instance variables included).
  uint32_t max_var() const { return next_ - 1; }
  const std::string& hint(Var v) const;

 private:
  uint32_t instance_vars_;
  uint32_t next_;
  std::vector<std::string> hints_;
};

/// Postfix cutting-planes expression under construction.
class Pol {
 public:
  Pol& id(ConstraintId c);
  Pol& axiom(Lit l);
  Pol& obj();
  Pol& add();
  Pol& mul(Int k);
  Pol& div(Int k);
  Pol& saturate();
  const std::string& text() const { return text_; }
  bool empty() const { return text_.empty(); }

 private:
  void token(const std::string& t);
  std::string text_;
};

enum class ReifyDir { kImplies, kImpliedBy, kEquiv };

struct ReifiedSic {
  Var indicator;
  ConstraintId implies;     // r => (O <= bound - 1)
  ConstraintId implied_by;  // r <= (O <= bound - 1)
  PbConstraint body;        // normalized O <= bound - 1
};

/// Append-only proof writer. Constructed without a stream it is disabled:
/// every logging call returns an empty id and does no work.
class ProofLogger {
 public:
  ProofLogger() = default;
  ProofLogger(std::ostream* out, size_t input_constraints);

  bool enabled() const { return out_ != nullptr; }
  /// Next id that will be issued.
  uint64_t next_id() const { return next_id_; }
  uint64_t steps() const { return steps_; }

  ConstraintId log_pol(const Pol& p);
  ConstraintId log_rup(const PbConstraint& c);
  /// Returns the id of the first emitted constraint and, for kEquiv, the
  /// id of the <= half as second.
  std::pair<ConstraintId, std::optional<ConstraintId>> log_reify(Var fresh, ReifyDir dir,
                                                                const PbConstraint& c);
  void log_solution(const Assignment& a, uint32_t num_vars, Int cost);
  void conclude_optimal(Int cost, const Pol& derivation);
  void conclude_infeasible(ConstraintId contradiction);
  void comment(const std::string& text);

  /// Reifies a solution-improving constraint O < bound over a fresh
  /// indicator. The body is O <= bound - 1 in normal form, canonicalized to
  /// ">= 1" when unsatisfiable and ">= 0" when trivially true.
  ReifiedSic log_reified_sic(VarRegistry& vars, const Objective& o, Int bound);

  /// Registers a core under its own id. A core that is already a logged
  /// constraint is aliased by multiplying it by 1; otherwise it is checked
  /// by reverse unit propagation.
  ConstraintId log_core(const Core& core);

 private:
  ConstraintId issue();
  void write_constraint(const PbConstraint& c);

  std::ostream* out_ = nullptr;
  uint64_t next_id_ = 1;
  uint64_t steps_ = 0;
};

/// Body of the solution-improving constraint O <= bound - 1, normalized.
PbConstraint improving_constraint(const Objective& o, Int bound);

/// The two reification constraints for a fresh x and normalized C.
PbConstraint reify_implies(Var x, const PbConstraint& c);
PbConstraint reify_implied_by(Var x, const PbConstraint& c);

}  // namespace pbihs

#endif  // PBIHS_PROOF_HPP_
