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

#include "pbihs/pbihs.h"

#include <atomic>
#include <charconv>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <variant>

#include "pbihs/bench.hpp"
#include "pbihs/checker.hpp"
#include "pbihs/ihs.hpp"
#include "pbihs/opb.hpp"

struct pbihs_instance {
  pbihs::Instance inst;
};

struct pbihs_config {
  pbihs::RunConfig run;
  std::string proof_path;
  std::string stats_path;
  pbihs_improvement_fn on_improvement = nullptr;
  void* user_data = nullptr;
};

struct pbihs_result {
  pbihs::RunResult result;
  std::string cost;
  std::string lower_bound;
  std::string output;
  std::string stats;
  std::string timing;
};

struct pbihs_check_result {
  pbihs::CheckResult result;
  std::string cost;
  std::string message;
};

struct pbihs_bench_result {
  pbihs::BenchReport report;
};

namespace {

thread_local std::string g_last_error;
std::atomic<bool> g_interrupt{false};
static_assert(std::atomic<bool>::is_always_lock_free);

pbihs_error fail(pbihs_error code, std::string message) {
  g_last_error = std::move(message);
  return code;
}

bool parse_on_off(const std::string& v, bool& out) {
  if (v == "on") {
    out = true;
  } else if (v == "off") {
    out = false;
  } else {
    return false;
  }
  return true;
}

bool parse_u64(const std::string& v, uint64_t& out) {
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  return ec == std::errc() && ptr == v.data() + v.size() && !v.empty();
}

pbihs_error parse_into(pbihs::ParseResult parsed, pbihs_instance** out) {
  if (!parsed.ok()) return fail(PBIHS_ERR_PARSE, parsed.error().to_string());
  *out = new pbihs_instance{std::move(*parsed.instance)};
  return PBIHS_OK;
}

pbihs_status to_c(pbihs::SolveStatus s) {
  switch (s) {
    case pbihs::SolveStatus::kOptimum: return PBIHS_OPTIMUM;
    case pbihs::SolveStatus::kSatisfiable: return PBIHS_SATISFIABLE;
    case pbihs::SolveStatus::kUnsatisfiable: return PBIHS_UNSATISFIABLE;
    case pbihs::SolveStatus::kUnknown: return PBIHS_UNKNOWN;
  }
  return PBIHS_UNKNOWN;
}

}  // namespace

extern "C" {

const char* pbihs_version(void) { return "1.0.0"; }

const char* pbihs_last_error(void) { return g_last_error.c_str(); }

pbihs_error pbihs_instance_from_file(const char* path, pbihs_instance** out) {
  if (path == nullptr || out == nullptr) return fail(PBIHS_ERR_INVALID_ARGUMENT, "null argument");
  try {
    std::ifstream probe(path);
    if (!probe) return fail(PBIHS_ERR_IO, std::string("cannot open ") + path);
    return parse_into(pbihs::parse_opb_file(path), out);
  } catch (const std::exception& e) {
    return fail(PBIHS_ERR_INTERNAL, e.what());
  }
}

pbihs_error pbihs_instance_from_string(const char* opb_text, pbihs_instance** out) {
  if (opb_text == nullptr || out == nullptr) return fail(PBIHS_ERR_INVALID_ARGUMENT, "null argument");
  try {
    return parse_into(pbihs::parse_opb(opb_text), out);
  } catch (const std::exception& e) {
    return fail(PBIHS_ERR_INTERNAL, e.what());
  }
}

void pbihs_instance_free(pbihs_instance* inst) { delete inst; }

uint32_t pbihs_instance_num_vars(const pbihs_instance* inst) { return inst ? inst->inst.num_vars : 0; }

size_t pbihs_instance_num_constraints(const pbihs_instance* inst) {
  return inst ? inst->inst.constraints.size() : 0;
}

pbihs_error pbihs_config_new(pbihs_config** out) {
  if (out == nullptr) return fail(PBIHS_ERR_INVALID_ARGUMENT, "null argument");
  *out = new pbihs_config;
  return PBIHS_OK;
}

void pbihs_config_free(pbihs_config* cfg) { delete cfg; }

pbihs_error pbihs_config_set(pbihs_config* cfg, const char* key, const char* value) {
  if (cfg == nullptr || key == nullptr || value == nullptr) {
    return fail(PBIHS_ERR_INVALID_ARGUMENT, "null argument");
  }
  const std::string k = key;
  const std::string v = value;
  auto bad = [&] { return fail(PBIHS_ERR_INVALID_ARGUMENT, "invalid value for " + k + ": " + v); };
  pbihs::RunConfig& run = cfg->run;
  if (k == "backend") {
    const auto kind = pbihs::parse_backend(v);
    if (!kind) return bad();
    run.backend.kind = *kind;
  } else if (k == "hybrid") {
    const auto mode = pbihs::parse_hybrid(v);
    if (!mode) return bad();
    run.backend.hybrid = *mode;
  } else if (k == "sls") {
    if (!parse_on_off(v, run.use_sls)) return bad();
  } else if (k == "seeding") {
    if (!parse_on_off(v, run.seeding)) return bad();
  } else if (k == "seed") {
    if (!parse_u64(v, run.seed)) return bad();
  } else if (k == "cb-budget") {
    if (!parse_u64(v, run.backend.cb_budget)) return bad();
  } else if (k == "time-limit") {
    double s = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), s);
    if (ec != std::errc() || ptr != v.data() + v.size() || s < 0) return bad();
    run.time_limit_seconds = s;
  } else if (k == "proof") {
    cfg->proof_path = v;
  } else if (k == "stats") {
    cfg->stats_path = v;
  } else {
    return fail(PBIHS_ERR_INVALID_ARGUMENT, "unknown config key: " + k);
  }
  return PBIHS_OK;
}

void pbihs_config_set_improvement_callback(pbihs_config* cfg, pbihs_improvement_fn fn, void* user_data) {
  if (cfg == nullptr) return;
  cfg->on_improvement = fn;
  cfg->user_data = user_data;
}

pbihs_error pbihs_solve(const pbihs_instance* inst, const pbihs_config* cfg, pbihs_result** out) {
  if (inst == nullptr || cfg == nullptr || out == nullptr) return fail(PBIHS_ERR_INVALID_ARGUMENT, "null argument");
  try {
    pbihs::RunConfig run = cfg->run;
    try {
      pbihs::validate(run);
    } catch (const std::invalid_argument& e) {
      return fail(PBIHS_ERR_INVALID_ARGUMENT, e.what());
    }
    run.interrupt = &g_interrupt;
    if (cfg->on_improvement != nullptr) {
      run.hooks.on_improvement = [cfg](pbihs::Int c, const pbihs::Assignment&) {
        cfg->on_improvement(c.to_string().c_str(), cfg->user_data);
      };
    }
    std::ofstream proof;
    if (!cfg->proof_path.empty()) {
      proof.open(cfg->proof_path, std::ios::binary);
      if (!proof) return fail(PBIHS_ERR_IO, "cannot write proof to " + cfg->proof_path);
      run.proof = &proof;
    }
    auto r = std::make_unique<pbihs_result>();
    r->result = pbihs::ihs_solve(inst->inst, run);
    if (proof.is_open()) {
      proof.close();
      if (!proof) return fail(PBIHS_ERR_IO, "failed writing proof to " + cfg->proof_path);
    }
    const pbihs::RunResult& rr = r->result;
    if (rr.cost) r->cost = rr.cost->to_string();
    if (rr.lower_bound) r->lower_bound = rr.lower_bound->to_string();
    std::ostringstream os;
    pbihs::emit_result(os, rr.status, rr.cost, rr.solution ? &*rr.solution : nullptr, false);
    r->output = os.str();
    r->stats = pbihs::format_stats(run, rr);
    r->timing = pbihs::format_timing(rr);
    if (!cfg->stats_path.empty()) {
      std::ofstream stats(cfg->stats_path, std::ios::binary);
      stats << r->stats;
      if (!stats) return fail(PBIHS_ERR_IO, "cannot write statistics to " + cfg->stats_path);
    }
    *out = r.release();
    return PBIHS_OK;
  } catch (const std::exception& e) {
    return fail(PBIHS_ERR_INTERNAL, e.what());
  }
}

void pbihs_interrupt(void) { g_interrupt.store(true, std::memory_order_relaxed); }

void pbihs_clear_interrupt(void) { g_interrupt.store(false, std::memory_order_relaxed); }

void pbihs_result_free(pbihs_result* r) { delete r; }

pbihs_status pbihs_result_status(const pbihs_result* r) {
  return r ? to_c(r->result.status) : PBIHS_UNKNOWN;
}

const char* pbihs_result_cost(const pbihs_result* r) {
  return r && r->result.cost ? r->cost.c_str() : nullptr;
}

const char* pbihs_result_lower_bound(const pbihs_result* r) {
  return r && r->result.lower_bound ? r->lower_bound.c_str() : nullptr;
}

int pbihs_result_value(const pbihs_result* r, uint32_t var) {
  if (r == nullptr || !r->result.solution || var == 0) return -1;
  const pbihs::Var v{var};
  if (!r->result.solution->assigned(v)) return -1;
  return r->result.solution->value(v) ? 1 : 0;
}

const char* pbihs_result_output(const pbihs_result* r) { return r ? r->output.c_str() : ""; }
const char* pbihs_result_stats(const pbihs_result* r) { return r ? r->stats.c_str() : ""; }
const char* pbihs_result_timing(const pbihs_result* r) { return r ? r->timing.c_str() : ""; }
uint64_t pbihs_result_iterations(const pbihs_result* r) { return r ? r->result.stats.iterations : 0; }

pbihs_error pbihs_check_files(const char* opb_path, const char* proof_path, pbihs_check_result** out) {
  if (opb_path == nullptr || proof_path == nullptr || out == nullptr) {
    return fail(PBIHS_ERR_INVALID_ARGUMENT, "null argument");
  }
  try {
    std::ifstream probe(opb_path);
    if (!probe) return fail(PBIHS_ERR_IO, std::string("cannot open ") + opb_path);
    const pbihs::ParseResult parsed = pbihs::parse_opb_file(opb_path);
    if (!parsed.ok()) return fail(PBIHS_ERR_PARSE, parsed.error().to_string());
    std::ifstream in(proof_path, std::ios::binary);
    if (!in) return fail(PBIHS_ERR_IO, std::string("cannot open ") + proof_path);
    std::ostringstream text;
    text << in.rdbuf();
    auto r = std::make_unique<pbihs_check_result>();
    r->result = pbihs::check(*parsed.instance, text.str());
    const pbihs::CheckResult& c = r->result;
    if (c.optimal_cost) r->cost = c.optimal_cost->to_string();
    if (c.accepted) {
      r->message = c.infeasible ? "accepted: infeasible" : "accepted: optimal cost " + r->cost;
    } else {
      r->message = "rejected at step " + std::to_string(c.step_index) + " (line " + std::to_string(c.line) +
                   "): " + c.reason;
    }
    *out = r.release();
    return PBIHS_OK;
  } catch (const std::exception& e) {
    return fail(PBIHS_ERR_INTERNAL, e.what());
  }
}

void pbihs_check_result_free(pbihs_check_result* r) { delete r; }
int pbihs_check_accepted(const pbihs_check_result* r) { return r && r->result.accepted ? 1 : 0; }
int pbihs_check_infeasible(const pbihs_check_result* r) {
  return r && r->result.accepted && r->result.infeasible ? 1 : 0;
}
const char* pbihs_check_cost(const pbihs_check_result* r) {
  return r && r->result.optimal_cost ? r->cost.c_str() : nullptr;
}
const char* pbihs_check_message(const pbihs_check_result* r) { return r ? r->message.c_str() : ""; }

pbihs_error pbihs_bench(const char* dir, const char* configs, double time_limit_seconds, const char* csv_path,
                        pbihs_bench_result** out) {
  if (dir == nullptr || configs == nullptr || out == nullptr || time_limit_seconds < 0) {
    return fail(PBIHS_ERR_INVALID_ARGUMENT, "invalid argument");
  }
  try {
    std::vector<pbihs::BenchConfig> parsed;
    try {
      parsed = pbihs::parse_bench_configs(configs);
    } catch (const std::invalid_argument& e) {
      return fail(PBIHS_ERR_INVALID_ARGUMENT, e.what());
    }
    for (pbihs::BenchConfig& bc : parsed) bc.run.interrupt = &g_interrupt;
    std::ofstream csv;
    if (csv_path != nullptr) {
      csv.open(csv_path, std::ios::binary);
      if (!csv) return fail(PBIHS_ERR_IO, std::string("cannot write ") + csv_path);
    }
    auto r = std::make_unique<pbihs_bench_result>();
    r->report = pbihs::run_bench(dir, parsed, time_limit_seconds, csv_path ? &csv : nullptr);
    *out = r.release();
    return PBIHS_OK;
  } catch (const std::exception& e) {
    return fail(PBIHS_ERR_INTERNAL, e.what());
  }
}

void pbihs_bench_result_free(pbihs_bench_result* r) { delete r; }
size_t pbihs_bench_rows(const pbihs_bench_result* r) { return r ? r->report.rows.size() : 0; }
const char* pbihs_bench_summary(const pbihs_bench_result* r) { return r ? r->report.summary.c_str() : ""; }

}  // extern "C"
