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

// Standalone checker for the proof format written by ProofLogger. It shares
// only the instance parser and constraint normalization with the solver.

#ifndef PBIHS_CHECKER_HPP_
#define PBIHS_CHECKER_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pbihs/core.hpp"
#include "pbihs/proof.hpp"

namespace pbihs {

struct PolToken {
  enum class Kind { kId, kAxiom, kObj, kAdd, kMul, kDiv, kSaturate };
  Kind kind;
  uint64_t id = 0;
  Lit lit;
  Int k = 0;
};

struct PolStep {
  std::vector<PolToken> tokens;
};
struct RupStep {
  PbConstraint constraint;
};
struct ReifyStep {
  Var var;
  ReifyDir dir;
  PbConstraint constraint;
};
struct SolutionStep {
  Int cost;
  std::vector<Lit> lits;
};
struct ConcludeOptimalStep {
  Int cost;
  std::vector<PolToken> tokens;
};
struct ConcludeInfeasibleStep {
  uint64_t id = 0;
};

using ProofStep = std::variant<PolStep, RupStep, ReifyStep, SolutionStep, ConcludeOptimalStep,
                               ConcludeInfeasibleStep>;

struct ProofLog {
  uint64_t input_constraints = 0;
  std::vector<ProofStep> steps;
  std::vector<size_t> step_lines;  // source line of each step
};

struct ProofParseError {
  size_t line = 0;
  std::string message;
};

std::variant<ProofLog, ProofParseError> parse_proof(std::string_view text);

struct CheckResult {
  bool accepted = false;
  std::optional<Int> optimal_cost;  // set on an accepted optimality claim
  bool infeasible = false;          // set on an accepted infeasibility claim
  size_t step_index = 0;            // 1-based failing step (0: header)
  size_t line = 0;                  // source line of the failing step
  std::string reason;
};

CheckResult check(const Instance& instance, const ProofLog& proof);
CheckResult check(const Instance& instance, std::string_view proof_text);

}  // namespace pbihs

#endif  // PBIHS_CHECKER_HPP_
