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

// Benchmark sweeps over a directory of OPB files.

#ifndef PBIHS_BENCH_HPP_
#define PBIHS_BENCH_HPP_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "pbihs/ihs.hpp"

namespace pbihs {

struct BenchConfig {
  std::string label;
  RunConfig run;
  bool proof = false;  // log to a byte-counting sink
};

/// Parses a comma-separated config list. Each entry is a backend name
/// followed by '+'-separated options: sls, proof, noseed,
/// hybrid=<mode>, cb-budget=<n>, seed=<n>. Example: "cg,sis+sls,cb+cb-budget=20".
/// Throws std::invalid_argument on malformed entries.
std::vector<BenchConfig> parse_bench_configs(std::string_view text);

struct BenchRow {
  std::string instance;  // file name
  std::string config;
  std::string status;  // solver status, or ERROR
  std::optional<Int> cost;
  double wall_seconds = 0;
  uint64_t peak_memory_kib = 0;
  uint64_t iterations = 0;
  std::optional<uint64_t> proof_bytes;
  std::string error;
};

std::string bench_csv_header();
std::string bench_csv_row(const BenchRow& row);

struct BenchReport {
  std::vector<BenchRow> rows;
  std::string summary;  // solved counts per config
};

/// Runs every config on every .opb file of `dir` (sorted by name). Rows are
/// appended to `csv` (header first) as they complete. Failures become rows.
BenchReport run_bench(const std::string& dir, const std::vector<BenchConfig>& configs, double time_limit_seconds,
                      std::ostream* csv);

}  // namespace pbihs

#endif  // PBIHS_BENCH_HPP_
