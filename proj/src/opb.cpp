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

#include "pbihs/opb.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace pbihs {

std::string ParseDiagnostic::to_string() const {
  std::ostringstream os;
  os << line << ":" << column << ": "
     << (severity == Severity::kError ? "error" : "warning") << ": " << message;
  return os.str();
}

const ParseDiagnostic& ParseResult::error() const {
  for (const ParseDiagnostic& d : diagnostics) {
    if (d.severity == ParseDiagnostic::Severity::kError) return d;
  }
  throw ContractViolation("ParseResult::error() called on a successful parse");
}

namespace {

// Variable indices stay well inside the 31 bits a Lit can encode.
constexpr uint64_t kMaxVarIndex = (uint64_t{1} << 30) - 1;

enum class TokKind { kMin, kNumber, kLit, kGe, kLe, kEq, kSemi, kBad };

struct Token {
  TokKind kind;
  size_t column;  // 1-based start
  std::string_view text;
};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (is_space(c)) {
      ++i;
      continue;
    }
    size_t start = i;
    auto push = [&](TokKind k, size_t len) {
      out.push_back({k, start + 1, line.substr(start, len)});
      i = start + len;
    };
    if (c == ';') {
      push(TokKind::kSemi, 1);
    } else if (c == '>' && i + 1 < line.size() && line[i + 1] == '=') {
      push(TokKind::kGe, 2);
    } else if (c == '<' && i + 1 < line.size() && line[i + 1] == '=') {
      push(TokKind::kLe, 2);
    } else if (c == '=') {
      push(TokKind::kEq, 1);
    } else if (line.substr(i, 4) == "min:") {
      push(TokKind::kMin, 4);
    } else if (c == '+' || c == '-' || is_digit(c)) {
      size_t j = i + ((c == '+' || c == '-') ? 1 : 0);
      size_t digits = j;
      while (j < line.size() && is_digit(line[j])) ++j;
      if (j == digits) {
        push(TokKind::kBad, j - start == 0 ? 1 : j - start);
      } else {
        push(TokKind::kNumber, j - start);
      }
    } else if (c == '~' || c == 'x') {
      size_t j = i + (c == '~' ? 1 : 0);
      if (j < line.size() && line[j] == 'x') {
        ++j;
        size_t digits = j;
        while (j < line.size() && is_digit(line[j])) ++j;
        if (j > digits) {
          push(TokKind::kLit, j - start);
          continue;
        }
      }
      size_t end = std::max(j, start + 1);
      while (end < line.size() && !is_space(line[end]) && line[end] != ';') ++end;
      push(TokKind::kBad, end - start);
    } else {
      size_t end = start + 1;
      while (end < line.size() && !is_space(line[end]) && line[end] != ';') ++end;
      push(TokKind::kBad, end - start);
    }
  }
  return out;
}

std::optional<uint64_t> parse_index(std::string_view digits) {
  uint64_t v = 0;
  for (char c : digits) {
    v = v * 10 + static_cast<uint64_t>(c - '0');
    if (v > kMaxVarIndex) return std::nullopt;
  }
  return v;
}

std::optional<uint64_t> header_field(std::string_view line, std::string_view key) {
  size_t pos = line.find(key);
  if (pos == std::string_view::npos) return std::nullopt;
  size_t i = pos + key.size();
  while (i < line.size() && is_space(line[i])) ++i;
  size_t start = i;
  while (i < line.size() && is_digit(line[i])) ++i;
  if (i == start || i - start > 12) return std::nullopt;
  return parse_index(line.substr(start, i - start));
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  ParseResult run() {
    size_t line_no = 0;
    size_t pos = 0;
    bool seen_statement = false;
    while (pos <= text_.size()) {
      size_t nl = text_.find('\n', pos);
      std::string_view line =
          text_.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
      ++line_no;
      if (!handle_line(line, line_no, seen_statement)) return fail();
      if (nl == std::string_view::npos) break;
      pos = nl + 1;
    }
    if (declared_constraints_ && *declared_constraints_ != statements_) {
      warn(1, 1, "header declares " + std::to_string(*declared_constraints_) +
                     " constraints, found " + std::to_string(statements_));
    }
    inst_.objective = normalize_objective(raw_objective_, objective_constant_);
    inst_.num_vars = declared_vars_ ? static_cast<uint32_t>(*declared_vars_) : max_var_;
    ParseResult r;
    r.instance = std::move(inst_);
    r.diagnostics = std::move(diags_);
    return r;
  }

 private:
  bool handle_line(std::string_view line, size_t line_no, bool& seen_statement) {
    size_t first = 0;
    while (first < line.size() && is_space(line[first])) ++first;
    if (first == line.size()) return true;
    if (line[first] == '*') {
      if (!seen_statement) {
        if (auto n = header_field(line, "#variable=")) declared_vars_ = n;
        if (auto m = header_field(line, "#constraint=")) declared_constraints_ = m;
      }
      return true;
    }
    seen_statement = true;
    std::vector<Token> toks = tokenize(line);
    return statement(toks, line, line_no);
  }

  bool statement(const std::vector<Token>& toks, std::string_view line, size_t line_no) {
    size_t i = 0;
    bool objective = false;
    if (toks[0].kind == TokKind::kMin) {
      if (has_objective_) return error(line_no, toks[0].column, "duplicate objective line");
      has_objective_ = true;
      inst_.has_objective = true;
      objective = true;
      i = 1;
    }
    std::vector<Term> terms;
    while (i < toks.size() && toks[i].kind == TokKind::kNumber) {
      std::optional<Int> coef = Int::parse(toks[i].text);
      if (!coef) return error(line_no, toks[i].column, "coefficient out of range");
      if (i + 1 < toks.size() && toks[i + 1].kind == TokKind::kLit) {
        std::optional<Lit> lit = literal(toks[i + 1], line_no);
        if (!lit) return false;
        terms.push_back({*coef, *lit});
        i += 2;
      } else if (objective) {
        objective_constant_ += *coef;
        ++i;
      } else if (i + 1 < toks.size() && toks[i + 1].kind != TokKind::kGe &&
                 toks[i + 1].kind != TokKind::kLe && toks[i + 1].kind != TokKind::kEq) {
        return unexpected(toks[i + 1], line_no);
      } else {
        break;
      }
    }
    if (objective) {
      if (i == toks.size()) return error(line_no, end_column(line), "missing ';'");
      if (toks[i].kind != TokKind::kSemi) return unexpected(toks[i], line_no);
      if (i + 1 != toks.size()) return unexpected(toks[i + 1], line_no);
      raw_objective_ = std::move(terms);
      return true;
    }
    if (i == toks.size()) return error(line_no, end_column(line), "missing relation");
    Relation rel;
    switch (toks[i].kind) {
      case TokKind::kGe: rel = Relation::kGe; break;
      case TokKind::kLe: rel = Relation::kLe; break;
      case TokKind::kEq: rel = Relation::kEq; break;
      default: return unexpected(toks[i], line_no);
    }
    ++i;
    if (i == toks.size()) return error(line_no, end_column(line), "missing right-hand side");
    if (toks[i].kind != TokKind::kNumber) return unexpected(toks[i], line_no);
    std::optional<Int> rhs = Int::parse(toks[i].text);
    if (!rhs) return error(line_no, toks[i].column, "right-hand side out of range");
    ++i;
    if (i == toks.size()) return error(line_no, end_column(line), "missing ';'");
    if (toks[i].kind != TokKind::kSemi) return unexpected(toks[i], line_no);
    if (i + 1 != toks.size()) return unexpected(toks[i + 1], line_no);
    try {
      for (PbConstraint& c : normalize(terms, rel, *rhs)) inst_.constraints.push_back(std::move(c));
    } catch (const OverflowError&) {
      return error(line_no, toks[0].column, "constraint coefficients overflow 128 bits");
    }
    ++statements_;
    return true;
  }

  std::optional<Lit> literal(const Token& tok, size_t line_no) {
    bool negated = tok.text[0] == '~';
    std::optional<uint64_t> idx = parse_index(tok.text.substr(negated ? 2 : 1));
    if (!idx) {
      error(line_no, tok.column, "variable index too large");
      return std::nullopt;
    }
    if (*idx == 0) {
      error(line_no, tok.column, "variable index 0");
      return std::nullopt;
    }
    if (declared_vars_ && *idx > *declared_vars_) {
      error(line_no, tok.column,
            "variable x" + std::to_string(*idx) + " exceeds declared #variable= " +
                std::to_string(*declared_vars_));
      return std::nullopt;
    }
    max_var_ = std::max(max_var_, static_cast<uint32_t>(*idx));
    return Lit::make(Var{static_cast<uint32_t>(*idx)}, negated);
  }

  static size_t end_column(std::string_view line) {
    size_t end = line.size();
    while (end > 0 && is_space(line[end - 1])) --end;
    return end == 0 ? 1 : end;
  }

  bool unexpected(const Token& tok, size_t line_no) {
    std::string shown(tok.text.substr(0, 32));
    for (char& c : shown) {
      if (!std::isprint(static_cast<unsigned char>(c))) c = '?';
    }
    return error(line_no, tok.column, "unexpected token '" + shown + "'");
  }

  bool error(size_t line, size_t column, std::string message) {
    diags_.push_back({line, column, std::move(message), ParseDiagnostic::Severity::kError});
    return false;
  }

  void warn(size_t line, size_t column, std::string message) {
    diags_.push_back({line, column, std::move(message), ParseDiagnostic::Severity::kWarning});
  }

  ParseResult fail() {
    ParseResult r;
    r.diagnostics = std::move(diags_);
    return r;
  }

  std::string_view text_;
  Instance inst_;
  std::vector<Term> raw_objective_;
  Int objective_constant_ = 0;
  bool has_objective_ = false;
  std::optional<uint64_t> declared_vars_;
  std::optional<uint64_t> declared_constraints_;
  uint64_t statements_ = 0;
  uint32_t max_var_ = 0;
  std::vector<ParseDiagnostic> diags_;
};

}  // namespace

ParseResult parse_opb(std::string_view text) {
  try {
    return Parser(text).run();
  } catch (const OverflowError& e) {
    ParseResult r;
    r.diagnostics.push_back({1, 1, e.what(), ParseDiagnostic::Severity::kError});
    return r;
  }
}

ParseResult parse_opb_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    ParseResult r;
    r.diagnostics.push_back({0, 0, "cannot open " + path, ParseDiagnostic::Severity::kError});
    return r;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_opb(ss.str());
}

namespace {
void write_terms(std::ostream& os, const std::vector<Term>& terms) {
  for (const Term& t : terms) {
    os << (t.coef < 0 ? "" : "+") << t.coef << " " << t.lit.to_string() << " ";
  }
}
}  // namespace

std::string write_opb(const Instance& inst) {
  std::ostringstream os;
  os << "* #variable= " << inst.num_vars << " #constraint= " << inst.constraints.size() << "\n";
  os << "min: ";
  write_terms(os, inst.objective.terms);
  if (inst.objective.constant != 0) {
    os << (inst.objective.constant < 0 ? "" : "+") << inst.objective.constant << " ";
  }
  os << ";\n";
  for (const PbConstraint& c : inst.constraints) {
    write_terms(os, c.terms);
    os << ">= " << c.degree << " ;\n";
  }
  return os.str();
}

const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimum: return "OPTIMUM FOUND";
    case SolveStatus::kSatisfiable: return "SATISFIABLE";
    case SolveStatus::kUnsatisfiable: return "UNSATISFIABLE";
    case SolveStatus::kUnknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

void emit_result(std::ostream& os, SolveStatus status, const std::optional<Int>& cost,
                 const Assignment* assignment, bool include_cost_line) {
  const bool has_solution = status == SolveStatus::kOptimum || status == SolveStatus::kSatisfiable;
  if (has_solution && (!cost || assignment == nullptr)) {
    throw ContractViolation("emit_result: OPTIMUM/SATISFIABLE require cost and assignment");
  }
  if (has_solution && include_cost_line) os << "o " << *cost << "\n";
  os << "s " << status_name(status);
  if (has_solution) {
    os << "\nv";
    for (uint32_t v = 1; v <= assignment->num_vars(); ++v) {
      os << " " << (assignment->value(Var{v}) ? "x" : "-x") << v;
    }
  }
  os << "\n";
}

std::string emit_result(SolveStatus status, const std::optional<Int>& cost,
                        const Assignment* assignment) {
  std::ostringstream os;
  emit_result(os, status, cost, assignment);
  std::string s = os.str();
  if (!s.empty() && s.back() == '\n') s.pop_back();
  return s;
}

}  // namespace pbihs
