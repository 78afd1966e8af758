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

// OPB (PB competition) instance reader/writer and competition-style result
// lines.

#ifndef PBIHS_OPB_HPP_
#define PBIHS_OPB_HPP_

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "pbihs/core.hpp"

namespace pbihs {

struct ParseDiagnostic {
  enum class Severity { kError, kWarning };
  size_t line = 0;    // 1-based
  size_t column = 0;  // 1-based
  std::string message;
  Severity severity = Severity::kError;

  std::string to_string() const;
};

struct ParseResult {
  std::optional<Instance> instance;  // absent iff an error was reported
  std::vector<ParseDiagnostic> diagnostics;

  bool ok() const { return instance.has_value(); }
  /// First error diagnostic; only meaningful when !ok().
  const ParseDiagnostic& error() const;
};

ParseResult parse_opb(std::string_view text);
ParseResult parse_opb_file(const std::string& path);

/// Canonical OPB text. A non-zero objective constant is written as a bare
/// integer term on the min: line, which parse_opb accepts back.
std::string write_opb(const Instance& inst);

enum class SolveStatus { kOptimum, kSatisfiable, kUnsatisfiable, kUnknown };

const char* status_name(SolveStatus s);

/// Writes the final "o"/"s"/"v" block. OPTIMUM and SATISFIABLE require both
/// cost and assignment. With include_cost_line false the "o" line is left
/// out, for callers that already streamed it.
void emit_result(std::ostream& os, SolveStatus status, const std::optional<Int>& cost,
                 const Assignment* assignment, bool include_cost_line = true);
std::string emit_result(SolveStatus status, const std::optional<Int>& cost,
                        const Assignment* assignment);

}  // namespace pbihs

#endif  // PBIHS_OPB_HPP_
