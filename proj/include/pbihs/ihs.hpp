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

// The implicit hitting set main loop.

#ifndef PBIHS_IHS_HPP_
#define PBIHS_IHS_HPP_

#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "pbihs/core.hpp"
#include "pbihs/hitting_set.hpp"
#include "pbihs/opb.hpp"
#include "pbihs/sls.hpp"

namespace pbihs {

/// Callbacks for monitoring a run. All are optional.
struct RunHooks {
  /// Each new upper bound, after the incumbent has been verified.
  std::function<void(Int cost, const Assignment& incumbent)> on_improvement;
  /// Every core added to the core set (seeded ones included).
  std::function<void(const PbConstraint& core)> on_core;
  /// Every hitting-set result, with the core set it was computed for.
  std::function<void(const HsResult&, std::span<const PbConstraint> cores)> on_hs_result;
  std::function<void(const Assignment&, Int cost, std::span<const PbConstraint> cores)> on_sls_solution;
  ReformulationObserver on_reformulation;
};

struct RunConfig {
  BackendConfig backend;
  bool use_sls = false;
  SlsConfig sls;
  bool seeding = true;
  std::optional<double> time_limit_seconds;
  uint64_t seed = 1;  // overrides sls.seed
  /// Proof output; null disables logging.
  std::ostream* proof = nullptr;
  uint64_t force_opt_period = 1000;
  uint64_t stagnation_limit = 1000;
  /// Polled during search; a set flag stops the run.
  const std::atomic<bool>* interrupt = nullptr;
  RunHooks hooks;
};

struct TrajectoryPoint {
  std::optional<Int> lb;
  std::optional<Int> ub;
};

struct RunStats {
  uint64_t iterations = 0;
  uint64_t cores = 0;
  uint64_t seeded_cores = 0;
  uint64_t oracle_calls = 0;
  uint64_t oracle_conflicts = 0;
  uint64_t hs_calls = 0;
  uint64_t hs_opt_calls = 0;
  HsStats hs;
  uint64_t proof_steps = 0;
  std::vector<TrajectoryPoint> trajectory;  // one entry per iteration
  // Wall-clock seconds; not part of the deterministic statistics.
  double oracle_seconds = 0;
  double hs_seconds = 0;
  double total_seconds = 0;
};

struct RunResult {
  SolveStatus status = SolveStatus::kUnknown;
  std::optional<Assignment> solution;
  std::optional<Int> cost;
  std::optional<Int> lower_bound;
  bool interrupted = false;  // stopped by the interrupt flag
  RunStats stats;
};

/// Throws std::invalid_argument for invalid configurations.
void validate(const RunConfig& cfg);

RunResult ihs_solve(const Instance& inst, const RunConfig& cfg);

/// Deterministic key=value statistics (no wall times), one per line,
/// followed by "trajectory <iteration> <lb> <ub>" lines.
std::string format_stats(const RunConfig& cfg, const RunResult& r);
/// Wall times and memory, key=value.
std::string format_timing(const RunResult& r);

/// Peak resident set size in KiB, or 0 when unknown.
uint64_t peak_memory_kib();

}  // namespace pbihs

#endif  // PBIHS_IHS_HPP_
