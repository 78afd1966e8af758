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

// Domain types for pseudo-Boolean formulas: literals, normalized
// constraints, objectives, assignments and cores.

#ifndef PBIHS_CORE_HPP_
#define PBIHS_CORE_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pbihs/int.hpp"

namespace pbihs {

/// Raised when a caller breaks a documented precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// 1-based variable index.
struct Var {
  uint32_t index = 0;
  friend constexpr auto operator<=>(Var, Var) = default;
};

class Lit {
 public:
  constexpr Lit() = default;
  static constexpr Lit positive(Var v) { return Lit(v.index << 1); }
  static constexpr Lit negative(Var v) { return Lit((v.index << 1) | 1u); }
  static constexpr Lit make(Var v, bool negated) {
    return negated ? negative(v) : positive(v);
  }
  static constexpr Lit from_code(uint32_t code) { return Lit(code); }

  constexpr Var var() const { return Var{code_ >> 1}; }
  constexpr bool negated() const { return (code_ & 1u) != 0; }
  constexpr uint32_t code() const { return code_; }
  constexpr Lit operator~() const { return Lit(code_ ^ 1u); }

  friend constexpr auto operator<=>(Lit, Lit) = default;

  /// OPB spelling: "x3" or "~x3".
  std::string to_string() const;

 private:
  explicit constexpr Lit(uint32_t code) : code_(code) {}
  uint32_t code_ = 0;
};

struct Term {
  Int coef;
  Lit lit;
  friend bool operator==(const Term&, const Term&) = default;
};

/// Identifier of a constraint inside a proof log. Issued sequentially.
struct ConstraintId {
  uint64_t value = 0;
  friend constexpr auto operator<=>(ConstraintId, ConstraintId) = default;
};

/// Normalized constraint: sum of coef*lit >= degree with positive
/// coefficients over distinct variables, terms ordered by variable.
struct PbConstraint {
  std::vector<Term> terms;
  Int degree = 0;
  std::optional<ConstraintId> id;

  Int coef_sum() const;
  /// True when no assignment can reach the degree.
  bool is_contradiction() const { return degree > coef_sum(); }
  bool is_trivial() const { return degree <= 0; }
  bool is_clause() const;
  std::string to_string() const;

  friend bool operator==(const PbConstraint& a, const PbConstraint& b) {
    return a.terms == b.terms && a.degree == b.degree;
  }
};

/// Minimization objective sum(weight*lit) + constant. After normalization
/// all weights are positive and variables are distinct.
struct Objective {
  std::vector<Term> terms;
  Int constant = 0;

  Int weight_sum() const;
  bool empty() const { return terms.empty(); }
};

/// Partial or complete 0/1 assignment indexed by variable.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(uint32_t num_vars) : values_(num_vars + 1, kUnassigned) {}

  uint32_t num_vars() const { return values_.empty() ? 0 : static_cast<uint32_t>(values_.size() - 1); }
  void resize(uint32_t num_vars);

  void set(Var v, bool value);
  void unset(Var v);
  bool assigned(Var v) const {
    return v.index < values_.size() && values_[v.index] != kUnassigned;
  }
  /// Value of a variable; throws ContractViolation when unassigned.
  bool value(Var v) const;
  bool value(Lit l) const { return value(l.var()) != l.negated(); }
  /// True when every variable 1..num_vars() has a value.
  bool complete() const;
  /// Restriction to variables 1..n (others dropped or left unassigned).
  Assignment restricted(uint32_t n) const;

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  static constexpr int8_t kUnassigned = -1;
  std::vector<int8_t> values_;
};

/// Entailed constraint over objective literals.
struct Core {
  PbConstraint constraint;
};

/// Lower/upper bound pair on the optimal cost. An absent lower bound is
/// -infinity, an absent upper bound +infinity. Updates that would weaken a
/// bound or cross the other bound throw ContractViolation.
class Bounds {
 public:
  const std::optional<Int>& lower() const { return lower_; }
  const std::optional<Int>& upper() const { return upper_; }
  void raise_lower(Int value);
  void lower_upper(Int value);
  bool closed() const { return lower_ && upper_ && *lower_ == *upper_; }

 private:
  std::optional<Int> lower_;
  std::optional<Int> upper_;
};

struct Instance {
  std::vector<PbConstraint> constraints;
  Objective objective;
  uint32_t num_vars = 0;
  bool has_objective = false;
};

enum class Relation { kGe, kLe, kEq };

/// Brings a raw linear constraint into normal form. Duplicate variables are
/// merged, negative coefficients are turned positive by literal flipping and
/// the degree is clamped at zero. Equalities yield two constraints.
std::vector<PbConstraint> normalize(std::span<const Term> raw_terms, Relation relation, Int rhs);

/// Normalizes a raw objective: merges duplicates and flips negative weights
/// into the constant.
Objective normalize_objective(std::span<const Term> raw_terms, Int constant);

bool evaluate(const PbConstraint& c, const Assignment& a);
Int cost(const Objective& o, const Assignment& a);

/// Brute-force entailment check over the union of variables in `formula`
/// and `c`. Refuses more than kMaxBruteForceVars distinct variables.
inline constexpr uint32_t kMaxBruteForceVars = 24;
bool entailed_by_bruteforce(std::span<const PbConstraint> formula, const PbConstraint& c);

/// Literal-wise negation of a normalized constraint (sum < degree) in normal form.
PbConstraint negate(const PbConstraint& c);

/// Every variable mentioned by a constraint set, sorted.
std::vector<Var> collect_vars(std::span<const PbConstraint> constraints);

}  // namespace pbihs

#endif  // PBIHS_CORE_HPP_
