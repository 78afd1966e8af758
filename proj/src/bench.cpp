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

#include "pbihs/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <filesystem>
#include <map>
#include <sstream>
#include <stdexcept>
#include <streambuf>

#include "pbihs/opb.hpp"

namespace pbihs {

namespace {

// Discards output and counts bytes.
class CountingBuf : public std::streambuf {
 public:
  uint64_t count() const { return count_; }

 protected:
  int_type overflow(int_type ch) override {
    if (!traits_type::eq_int_type(ch, traits_type::eof())) ++count_;
    return traits_type::not_eof(ch);
  }
  std::streamsize xsputn(const char*, std::streamsize n) override {
    count_ += static_cast<uint64_t>(n);
    return n;
  }

 private:
  uint64_t count_ = 0;
};

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  for (;;) {
    const size_t pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

uint64_t parse_u64(std::string_view s, const std::string& what) {
  uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw std::invalid_argument("bad " + what + ": " + std::string(s));
  return v;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::vector<BenchConfig> parse_bench_configs(std::string_view text) {
  std::vector<BenchConfig> out;
  for (const std::string& entry : split(text, ',')) {
    if (entry.empty()) throw std::invalid_argument("empty config entry");
    const std::vector<std::string> parts = split(entry, '+');
    BenchConfig bc;
    bc.label = entry;
    const std::optional<BackendKind> kind = parse_backend(parts[0]);
    if (!kind) throw std::invalid_argument("unknown backend: " + parts[0]);
    bc.run.backend.kind = *kind;
    for (size_t i = 1; i < parts.size(); ++i) {
      const std::string& p = parts[i];
      const size_t eq = p.find('=');
      const std::string key = p.substr(0, eq);
      const std::string value = eq == std::string::npos ? "" : p.substr(eq + 1);
      if (key == "sls" && eq == std::string::npos) {
        bc.run.use_sls = true;
      } else if (key == "proof" && eq == std::string::npos) {
        bc.proof = true;
      } else if (key == "noseed" && eq == std::string::npos) {
        bc.run.seeding = false;
      } else if (key == "hybrid") {
        const std::optional<HybridMode> h = parse_hybrid(value);
        if (!h) throw std::invalid_argument("unknown hybrid mode: " + value);
        bc.run.backend.hybrid = *h;
      } else if (key == "cb-budget") {
        bc.run.backend.cb_budget = parse_u64(value, "cb-budget");
      } else if (key == "seed") {
        bc.run.seed = parse_u64(value, "seed");
      } else {
        throw std::invalid_argument("unknown config option: " + p);
      }
    }
    validate(bc.run);
    out.push_back(std::move(bc));
  }
  return out;
}

std::string bench_csv_header() {
  return "instance,config,status,cost,wall_seconds,peak_memory_kib,iterations,proof_bytes,error";
}

std::string bench_csv_row(const BenchRow& row) {
  std::ostringstream os;
  os << csv_field(row.instance) << "," << csv_field(row.config) << "," << csv_field(row.status) << ","
     << (row.cost ? row.cost->to_string() : "") << "," << row.wall_seconds << "," << row.peak_memory_kib << ","
     << row.iterations << "," << (row.proof_bytes ? std::to_string(*row.proof_bytes) : "") << ","
     << csv_field(row.error);
  return os.str();
}

BenchReport run_bench(const std::string& dir, const std::vector<BenchConfig>& configs, double time_limit_seconds,
                      std::ostream* csv) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  for (const fs::directory_entry& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".opb") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (csv) *csv << bench_csv_header() << "\n" << std::flush;

  BenchReport report;
  for (const fs::path& file : files) {
    const ParseResult parsed = parse_opb_file(file.string());
    for (const BenchConfig& bc : configs) {
      BenchRow row;
      row.instance = file.filename().string();
      row.config = bc.label;
      const auto start = std::chrono::steady_clock::now();
      try {
        if (!parsed.ok()) throw std::runtime_error("parse error: " + parsed.error().to_string());
        RunConfig rc = bc.run;
        rc.time_limit_seconds = time_limit_seconds;
        CountingBuf sink;
        std::ostream proof_out(&sink);
        if (bc.proof) rc.proof = &proof_out;
        const RunResult r = ihs_solve(*parsed.instance, rc);
        row.status = status_name(r.status);
        row.cost = r.cost;
        row.iterations = r.stats.iterations;
        if (bc.proof) row.proof_bytes = sink.count();
        row.wall_seconds = r.stats.total_seconds;
        if (r.status == SolveStatus::kUnknown) row.wall_seconds = time_limit_seconds;
      } catch (const std::exception& e) {
        row.status = "ERROR";
        row.error = e.what();
        row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      }
      row.peak_memory_kib = peak_memory_kib();
      if (csv) *csv << bench_csv_row(row) << "\n" << std::flush;
      report.rows.push_back(std::move(row));
    }
  }

  std::ostringstream summary;
  summary << "instances=" << files.size() << " configs=" << configs.size() << "\n";
  for (const BenchConfig& bc : configs) {
    size_t solved = 0;
    for (const BenchRow& row : report.rows) {
      if (row.config == bc.label && (row.status == status_name(SolveStatus::kOptimum) ||
                                     row.status == status_name(SolveStatus::kUnsatisfiable))) {
        ++solved;
      }
    }
    summary << bc.label << " solved=" << solved << "/" << files.size() << "\n";
  }
  report.summary = summary.str();
  return report;
}

}  // namespace pbihs
