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

// Exercises the shared library through its C header only.

#include <unistd.h>

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "pbihs/pbihs.h"

namespace {

namespace fs = std::filesystem;

const char* kTriangle =
    "min: +1 x1 +1 x2 +1 x3 ;\n+1 x1 +1 x2 >= 1 ;\n+1 x2 +1 x3 >= 1 ;\n+1 x1 +1 x3 >= 1 ;\n";

fs::path temp(const std::string& name) {
  return fs::temp_directory_path() / ("pbihs_capi_" + std::to_string(::getpid()) + "_" + name);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

struct Handles {
  pbihs_instance* inst = nullptr;
  pbihs_config* cfg = nullptr;
  pbihs_result* res = nullptr;
  ~Handles() {
    pbihs_result_free(res);
    pbihs_config_free(cfg);
    pbihs_instance_free(inst);
  }
};

TEST_CASE("version string") { CHECK(std::strlen(pbihs_version()) > 0); }

TEST_CASE("solve an instance from a string") {
  Handles h;
  REQUIRE(pbihs_instance_from_string(kTriangle, &h.inst) == PBIHS_OK);
  CHECK(pbihs_instance_num_vars(h.inst) == 3);
  CHECK(pbihs_instance_num_constraints(h.inst) == 3);
  REQUIRE(pbihs_config_new(&h.cfg) == PBIHS_OK);
  REQUIRE(pbihs_solve(h.inst, h.cfg, &h.res) == PBIHS_OK);
  CHECK(pbihs_result_status(h.res) == PBIHS_OPTIMUM);
  CHECK(std::string(pbihs_result_cost(h.res)) == "2");
  CHECK(std::string(pbihs_result_lower_bound(h.res)) == "2");
  int sum = 0;
  for (uint32_t v = 1; v <= 3; ++v) sum += pbihs_result_value(h.res, v);
  CHECK(sum == 2);
  CHECK(pbihs_result_value(h.res, 4) == -1);
  const std::string out = pbihs_result_output(h.res);
  CHECK(out.rfind("s OPTIMUM FOUND\nv ", 0) == 0);
  CHECK(std::string(pbihs_result_stats(h.res)).find("status=OPTIMUM FOUND") != std::string::npos);
  CHECK(std::strlen(pbihs_result_timing(h.res)) > 0);
  CHECK(pbihs_result_iterations(h.res) >= 1);
}

TEST_CASE("every backend and hybrid is reachable through config keys") {
  const char* backends[] = {"sis", "sis-reified", "cg", "cb"};
  const char* hybrids[] = {"none", "optlb", "alllb", "forcelb"};
  for (const char* b : backends) {
    for (const char* m : hybrids) {
      CAPTURE(b);
      CAPTURE(m);
      Handles h;
      REQUIRE(pbihs_instance_from_string(kTriangle, &h.inst) == PBIHS_OK);
      REQUIRE(pbihs_config_new(&h.cfg) == PBIHS_OK);
      REQUIRE(pbihs_config_set(h.cfg, "backend", b) == PBIHS_OK);
      REQUIRE(pbihs_config_set(h.cfg, "hybrid", m) == PBIHS_OK);
      REQUIRE(pbihs_config_set(h.cfg, "sls", "on") == PBIHS_OK);
      REQUIRE(pbihs_config_set(h.cfg, "cb-budget", "1") == PBIHS_OK);
      REQUIRE(pbihs_solve(h.inst, h.cfg, &h.res) == PBIHS_OK);
      CHECK(std::string(pbihs_result_cost(h.res)) == "2");
    }
  }
}

TEST_CASE("bad arguments are reported with a message") {
  pbihs_instance* inst = nullptr;
  CHECK(pbihs_instance_from_string("+1 x1 >= 1", &inst) == PBIHS_ERR_PARSE);
  CHECK(inst == nullptr);
  CHECK(std::string(pbihs_last_error()).find("missing ';'") != std::string::npos);
  CHECK(pbihs_instance_from_file("/nonexistent/file.opb", &inst) != PBIHS_OK);
  CHECK(pbihs_instance_from_string(nullptr, &inst) == PBIHS_ERR_INVALID_ARGUMENT);

  pbihs_config* cfg = nullptr;
  REQUIRE(pbihs_config_new(&cfg) == PBIHS_OK);
  CHECK(pbihs_config_set(cfg, "backend", "mip") == PBIHS_ERR_INVALID_ARGUMENT);
  CHECK(pbihs_config_set(cfg, "colour", "red") == PBIHS_ERR_INVALID_ARGUMENT);
  CHECK(pbihs_config_set(cfg, "seed", "-3") == PBIHS_ERR_INVALID_ARGUMENT);
  CHECK(pbihs_config_set(cfg, "time-limit", "soon") == PBIHS_ERR_INVALID_ARGUMENT);
  CHECK(pbihs_config_set(cfg, "sls", "maybe") == PBIHS_ERR_INVALID_ARGUMENT);
  CHECK(std::strlen(pbihs_last_error()) > 0);

  // SLS_ONLY without a hybrid cannot prove optimality.
  REQUIRE(pbihs_config_set(cfg, "backend", "sls-only") == PBIHS_OK);
  REQUIRE(pbihs_instance_from_string(kTriangle, &inst) == PBIHS_OK);
  pbihs_result* res = nullptr;
  CHECK(pbihs_solve(inst, cfg, &res) == PBIHS_ERR_INVALID_ARGUMENT);
  CHECK(res == nullptr);
  pbihs_instance_free(inst);
  pbihs_config_free(cfg);
}

struct Improvements {
  std::vector<std::string> costs;
};

void record(const char* cost, void* user) { static_cast<Improvements*>(user)->costs.emplace_back(cost); }

TEST_CASE("the improvement callback sees strictly decreasing costs") {
  Handles h;
  REQUIRE(pbihs_instance_from_string(kTriangle, &h.inst) == PBIHS_OK);
  REQUIRE(pbihs_config_new(&h.cfg) == PBIHS_OK);
  Improvements seen;
  pbihs_config_set_improvement_callback(h.cfg, record, &seen);
  REQUIRE(pbihs_solve(h.inst, h.cfg, &h.res) == PBIHS_OK);
  REQUIRE_FALSE(seen.costs.empty());
  CHECK(seen.costs.back() == "2");
  for (size_t i = 1; i < seen.costs.size(); ++i) CHECK(std::stol(seen.costs[i]) < std::stol(seen.costs[i - 1]));
}

TEST_CASE("proof files written by solve are accepted by check") {
  const fs::path opb = temp("tri.opb");
  const fs::path proof = temp("tri.proof");
  const fs::path stats = temp("tri.stats");
  std::ofstream(opb) << kTriangle;
  Handles h;
  REQUIRE(pbihs_instance_from_file(opb.c_str(), &h.inst) == PBIHS_OK);
  REQUIRE(pbihs_config_new(&h.cfg) == PBIHS_OK);
  REQUIRE(pbihs_config_set(h.cfg, "proof", proof.c_str()) == PBIHS_OK);
  REQUIRE(pbihs_config_set(h.cfg, "stats", stats.c_str()) == PBIHS_OK);
  REQUIRE(pbihs_solve(h.inst, h.cfg, &h.res) == PBIHS_OK);
  CHECK(slurp(stats) == pbihs_result_stats(h.res));

  pbihs_check_result* c = nullptr;
  REQUIRE(pbihs_check_files(opb.c_str(), proof.c_str(), &c) == PBIHS_OK);
  CHECK(pbihs_check_accepted(c) == 1);
  CHECK(pbihs_check_infeasible(c) == 0);
  CHECK(std::string(pbihs_check_cost(c)) == "2");
  pbihs_check_result_free(c);

  // Truncate the conclusion away.
  std::string text = slurp(proof);
  text = text.substr(0, text.rfind("conclude"));
  std::ofstream(proof) << text;
  REQUIRE(pbihs_check_files(opb.c_str(), proof.c_str(), &c) == PBIHS_OK);
  CHECK(pbihs_check_accepted(c) == 0);
  CHECK(pbihs_check_cost(c) == nullptr);
  CHECK(std::string(pbihs_check_message(c)).find("no conclusion") != std::string::npos);
  pbihs_check_result_free(c);
  fs::remove(opb);
  fs::remove(proof);
  fs::remove(stats);
}

TEST_CASE("an interrupt before solving reports the first incumbent") {
  Handles h;
  REQUIRE(pbihs_instance_from_string(kTriangle, &h.inst) == PBIHS_OK);
  REQUIRE(pbihs_config_new(&h.cfg) == PBIHS_OK);
  pbihs_interrupt();
  REQUIRE(pbihs_solve(h.inst, h.cfg, &h.res) == PBIHS_OK);
  pbihs_clear_interrupt();
  const pbihs_status s = pbihs_result_status(h.res);
  CHECK((s == PBIHS_SATISFIABLE || s == PBIHS_UNKNOWN || s == PBIHS_OPTIMUM));
  if (s == PBIHS_SATISFIABLE) CHECK(pbihs_result_cost(h.res) != nullptr);
}

TEST_CASE("infeasible and objective-free instances") {
  Handles a;
  REQUIRE(pbihs_instance_from_string("min: +1 x1 ;\n+1 x1 >= 1 ;\n+1 ~x1 >= 1 ;\n", &a.inst) == PBIHS_OK);
  REQUIRE(pbihs_config_new(&a.cfg) == PBIHS_OK);
  REQUIRE(pbihs_solve(a.inst, a.cfg, &a.res) == PBIHS_OK);
  CHECK(pbihs_result_status(a.res) == PBIHS_UNSATISFIABLE);
  CHECK(pbihs_result_cost(a.res) == nullptr);
  CHECK(std::string(pbihs_result_output(a.res)) == "s UNSATISFIABLE\n");
}

TEST_CASE("bench through the C API") {
  const fs::path dir = temp("bench");
  fs::create_directories(dir);
  std::ofstream(dir / "a.opb") << kTriangle;
  std::ofstream(dir / "b.opb") << "min: +2 x1 +1 x2 ;\n+1 x1 +1 x2 >= 1 ;\n";
  const fs::path csv = temp("bench.csv");
  pbihs_bench_result* r = nullptr;
  REQUIRE(pbihs_bench(dir.c_str(), "cg,sis+sls", 10.0, csv.c_str(), &r) == PBIHS_OK);
  CHECK(pbihs_bench_rows(r) == 4);
  CHECK(std::string(pbihs_bench_summary(r)).find("cg solved=2/2") != std::string::npos);
  pbihs_bench_result_free(r);
  CHECK(pbihs_bench(dir.c_str(), "nonsense", 10.0, nullptr, &r) == PBIHS_ERR_INVALID_ARGUMENT);
  fs::remove_all(dir);
  fs::remove(csv);
}

}  // namespace
