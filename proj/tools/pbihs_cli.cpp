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

// pbihs command line: solve, check and bench.

#include <csignal>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pbihs/pbihs.h"

namespace {

constexpr int kExitProven = 0;
constexpr int kExitUsage = 1;
constexpr int kExitSatisfiable = 10;
constexpr int kExitUnknown = 20;

extern "C" void on_signal(int) { pbihs_interrupt(); }

void print_improvement(const char* cost, void*) {
  std::printf("o %s\n", cost);
  std::fflush(stdout);
}

int report_error(const char* what) {
  std::fprintf(stderr, "pbihs: %s: %s\n", what, pbihs_last_error());
  return kExitUsage;
}

struct SolveOptions {
  std::string instance;
  std::string backend = "cg";
  std::string hybrid = "none";
  std::string sls = "off";
  std::string seeding = "on";
  std::optional<std::string> proof;
  std::optional<std::string> stats;
  std::optional<uint64_t> seed;
  std::optional<double> time_limit;
  std::optional<uint64_t> cb_budget;
};

int run_solve(const SolveOptions& o) {
  pbihs_instance* inst = nullptr;
  if (pbihs_instance_from_file(o.instance.c_str(), &inst) != PBIHS_OK) return report_error("cannot read instance");
  pbihs_config* cfg = nullptr;
  pbihs_config_new(&cfg);
  std::vector<std::pair<std::string, std::string>> settings = {
      {"backend", o.backend}, {"hybrid", o.hybrid}, {"sls", o.sls}, {"seeding", o.seeding}};
  if (o.proof) settings.emplace_back("proof", *o.proof);
  if (o.stats) settings.emplace_back("stats", *o.stats);
  if (o.seed) settings.emplace_back("seed", std::to_string(*o.seed));
  if (o.time_limit) settings.emplace_back("time-limit", std::to_string(*o.time_limit));
  if (o.cb_budget) settings.emplace_back("cb-budget", std::to_string(*o.cb_budget));
  for (const auto& [key, value] : settings) {
    if (pbihs_config_set(cfg, key.c_str(), value.c_str()) != PBIHS_OK) {
      pbihs_config_free(cfg);
      pbihs_instance_free(inst);
      return report_error("invalid option");
    }
  }
  pbihs_config_set_improvement_callback(cfg, print_improvement, nullptr);

  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  pbihs_result* result = nullptr;
  const pbihs_error err = pbihs_solve(inst, cfg, &result);
  pbihs_config_free(cfg);
  pbihs_instance_free(inst);
  if (err != PBIHS_OK) return report_error("solve failed");

  const char* lb = pbihs_result_lower_bound(result);
  const char* ub = pbihs_result_cost(result);
  std::printf("c bounds lb=%s ub=%s\n", lb ? lb : "none", ub ? ub : "none");
  std::fputs(pbihs_result_output(result), stdout);
  std::fflush(stdout);
  const pbihs_status status = pbihs_result_status(result);
  pbihs_result_free(result);
  switch (status) {
    case PBIHS_OPTIMUM:
    case PBIHS_UNSATISFIABLE:
      return kExitProven;
    case PBIHS_SATISFIABLE:
      return kExitSatisfiable;
    case PBIHS_UNKNOWN:
      return kExitUnknown;
  }
  return kExitUnknown;
}

int run_check(const std::string& instance, const std::string& proof) {
  pbihs_check_result* r = nullptr;
  if (pbihs_check_files(instance.c_str(), proof.c_str(), &r) != PBIHS_OK) return report_error("check failed");
  std::printf("%s\n", pbihs_check_message(r));
  const int accepted = pbihs_check_accepted(r);
  pbihs_check_result_free(r);
  return accepted ? 0 : 1;
}

int run_bench(const std::string& dir, const std::string& configs, double time_limit, const std::string& out) {
  std::signal(SIGINT, on_signal);
  pbihs_bench_result* r = nullptr;
  if (pbihs_bench(dir.c_str(), configs.c_str(), time_limit, out.c_str(), &r) != PBIHS_OK) {
    return report_error("bench failed");
  }
  std::fputs(pbihs_bench_summary(r), stdout);
  pbihs_bench_result_free(r);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pbihs: implicit hitting set pseudo-Boolean optimizer"};
  app.require_subcommand(1);
  app.set_version_flag("--version", pbihs_version());

  SolveOptions so;
  CLI::App* solve = app.add_subcommand("solve", "Minimize an OPB instance");
  solve->add_option("instance", so.instance, "OPB file")->required();
  solve->add_option("--backend", so.backend, "Hitting-set optimizer")
      ->check(CLI::IsMember({"sis", "sis-reified", "cg", "cb", "sls-only"}));
  solve->add_option("--hybrid", so.hybrid, "Lower-bound certification scheme")
      ->check(CLI::IsMember({"none", "optlb", "alllb", "forcelb"}));
  solve->add_option("--sls", so.sls, "Local search before each optimizer call")->check(CLI::IsMember({"on", "off"}));
  solve->add_option("--seeding", so.seeding, "Seed the core set with objective-only constraints")
      ->check(CLI::IsMember({"on", "off"}));
  solve->add_option("--proof", so.proof, "Write a proof to this path");
  solve->add_option("--stats", so.stats, "Write key=value statistics to this path");
  solve->add_option("--seed", so.seed, "Random seed");
  solve->add_option("--time-limit", so.time_limit, "Time limit in seconds")->check(CLI::NonNegativeNumber);
  solve->add_option("--cb-budget", so.cb_budget, "Reformulation steps before CB switches to SIS");

  std::string check_instance;
  std::string check_proof;
  CLI::App* check = app.add_subcommand("check", "Verify a proof against an OPB instance");
  check->add_option("instance", check_instance, "OPB file")->required();
  check->add_option("proof", check_proof, "Proof file")->required();

  std::string bench_dir;
  std::string bench_configs = "cg";
  double bench_limit = 60;
  std::string bench_out = "results.csv";
  CLI::App* bench = app.add_subcommand("bench", "Run configurations over a directory of OPB files");
  bench->add_option("dir", bench_dir, "Directory of .opb files")->required()->check(CLI::ExistingDirectory);
  bench->add_option("--configs", bench_configs, "Comma-separated configs, e.g. cg,sis+sls,cb+hybrid=optlb");
  bench->add_option("--time-limit", bench_limit, "Per-run time limit in seconds")->check(CLI::NonNegativeNumber);
  bench->add_option("--out", bench_out, "CSV output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (*solve) return run_solve(so);
  if (*check) return run_check(check_instance, check_proof);
  return run_bench(bench_dir, bench_configs, bench_limit, bench_out);
}
