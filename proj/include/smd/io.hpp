/*
 * Copyright 2026 The smd Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

/**
 * @file io.hpp
 * @brief JSON and CSV serialization of matrices, chains and dominance reports.
 *
 * Complex numbers are [re, im] pairs in JSON. Doubles are printed in shortest
 * round-trip form, so parse(print(x)) == x bit for bit.
 */

#include "smd/companion.hpp"
#include "smd/core.hpp"
#include "smd/dominance.hpp"
#include "smd/families.hpp"
#include "smd/solver.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>

namespace smd {

using Json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "1";

enum class MatrixFormat { Json, Csv };

inline MatrixFormat parse_matrix_format(const std::string& name) {
  if (name == "json") return MatrixFormat::Json;
  if (name == "csv") return MatrixFormat::Csv;
  throw Error(ErrorKind::Parse, "unknown matrix format '" + name + "'");
}

/// Picks csv for a ".csv" suffix, json otherwise.
inline MatrixFormat format_from_path(const std::string& path) {
  return path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0 ? MatrixFormat::Csv : MatrixFormat::Json;
}

namespace detail {

inline Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw Error(ErrorKind::Parse, "complex number must be a [re, im] pair");
  const Complex z{j[0].get<double>(), j[1].get<double>()};
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw Error(ErrorKind::Parse, "non-finite entry");
  return z;
}

inline Json vector_to_json(const ComplexVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

inline ComplexVector vector_from_json(const Json& j) {
  if (!j.is_array()) throw Error(ErrorKind::Parse, "expected an array of complex numbers");
  ComplexVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
  return v;
}

inline Json entries_to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(vector_to_json(m.row(i).transpose()));
  return rows;
}

inline ComplexMatrix entries_from_json(const Json& rows, std::optional<int> n) {
  if (!rows.is_array() || rows.empty()) throw Error(ErrorKind::Parse, "entries must be a nonempty array of rows");
  const auto size = static_cast<Eigen::Index>(rows.size());
  if (n && *n != size) throw Error(ErrorKind::NonSquare, "entries do not have n rows");
  ComplexMatrix m(size, size);
  for (Eigen::Index i = 0; i < size; ++i) {
    const Json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != size)
      throw Error(ErrorKind::NonSquare, "row " + std::to_string(i + 1) + " does not have n entries");
    for (Eigen::Index j = 0; j < size; ++j) m(i, j) = complex_from_json(row[static_cast<std::size_t>(j)]);
  }
  return m;
}

/// Line and column (1-based) of a byte offset, for parse diagnostics.
inline std::pair<std::size_t, std::size_t> locate(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

inline Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    const auto [line, column] = locate(text, e.byte > 0 ? e.byte - 1 : 0);
    throw Error(ErrorKind::Parse, "invalid JSON at line " + std::to_string(line) + ", column " +
                                      std::to_string(column));
  }
}

inline std::optional<double> parse_double(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value)) return std::nullopt;
  return value;
}

/// "a", "a+bi", "a-bi", "bi", "i" and "-i".
inline std::optional<Complex> parse_complex_token(std::string_view token) {
  if (token.empty()) return std::nullopt;
  if (token.back() != 'i') {
    const auto re = parse_double(token);
    return re ? std::optional<Complex>(Complex(*re, 0.0)) : std::nullopt;
  }
  token.remove_suffix(1);
  std::size_t split = std::string_view::npos;
  for (std::size_t k = token.size(); k-- > 1;) {
    if ((token[k] == '+' || token[k] == '-') && token[k - 1] != 'e' && token[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  const std::string_view re_part = split == std::string_view::npos ? std::string_view() : token.substr(0, split);
  const std::string_view im_part = split == std::string_view::npos ? token : token.substr(split);
  double re = 0.0;
  if (!re_part.empty()) {
    const auto parsed = parse_double(re_part);
    if (!parsed) return std::nullopt;
    re = *parsed;
  }
  double im = 0.0;
  if (im_part.empty() || im_part == "+") {
    im = 1.0;
  } else if (im_part == "-") {
    im = -1.0;
  } else {
    const auto parsed = parse_double(im_part);
    if (!parsed) return std::nullopt;
    im = *parsed;
  }
  return Complex(re, im);
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline ComplexMatrix parse_csv(const std::string& text) {
  std::vector<std::vector<Complex>> rows;
  std::size_t line_no = 0;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<Complex> row;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      const std::string_view raw =
          std::string_view(line).substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      const auto value = parse_complex_token(trim(raw));
      if (!value)
        throw Error(ErrorKind::Parse, "invalid number at line " + std::to_string(line_no) + ", column " +
                                          std::to_string(start + 1));
      row.push_back(*value);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    rows.push_back(std::move(row));
  }
  const auto n = static_cast<Eigen::Index>(rows.size());
  if (n == 0) throw Error(ErrorKind::Parse, "empty matrix");
  ComplexMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(rows[i].size()) != n)
      throw Error(ErrorKind::NonSquare, "row " + std::to_string(i + 1) + " has " + std::to_string(rows[i].size()) +
                                            " entries, expected " + std::to_string(n));
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

inline std::string slurp(std::istream& in) {
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Error(ErrorKind::Io, "read failed");
  return buffer.str();
}

inline std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
  return in;
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw Error(ErrorKind::Io, "write to '" + path + "' failed");
}

template <typename T>
T field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorKind::Parse, std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw Error(ErrorKind::Parse, std::string("field '") + key + "' has the wrong type");
  }
}

inline void check_schema(const Json& j) {
  if (field<std::string>(j, "schema_version") != kSchemaVersion)
    throw Error(ErrorKind::Parse, "unsupported schema_version");
}

}  // namespace detail

// ---- matrices ----

inline Json matrix_to_json(const ComplexMatrix& m) {
  require_square(m, "matrix");
  return Json{{"n", m.rows()}, {"entries", detail::entries_to_json(m)}};
}

inline ComplexMatrix matrix_from_json(const Json& j) {
  return detail::entries_from_json(detail::field<Json>(j, "entries"), detail::field<int>(j, "n"));
}

inline ComplexMatrix read_matrix(std::istream& in, MatrixFormat format) {
  const std::string text = detail::slurp(in);
  if (format == MatrixFormat::Csv) return detail::parse_csv(text);
  return matrix_from_json(detail::parse_json_text(text));
}

inline ComplexMatrix read_matrix(const std::string& path, MatrixFormat format) {
  auto in = detail::open_in(path);
  return read_matrix(in, format);
}

inline ComplexMatrix read_matrix(const std::string& path) { return read_matrix(path, format_from_path(path)); }

inline void write_matrix(const ComplexMatrix& m, const std::string& path) {
  detail::write_text(path, matrix_to_json(m).dump(2) + "\n");
}

// ---- families and problems ----

inline Json family_kind_to_json(const FamilyKind& kind) {
  Json j{{"family", family_name(kind)}};
  if (family_uses_order(kind.tag)) j["order"] = kind.order;
  if (kind.tag == FamilyTag::RandomSubspace) {
    if (!kind.basis) throw Error(ErrorKind::Validation, "subspace family without a basis");
    Json basis = Json::array();
    for (const auto& b : *kind.basis) basis.push_back(detail::entries_to_json(b));
    j["basis"] = std::move(basis);
  }
  return j;
}

inline FamilyKind family_kind_from_json(const Json& j) {
  FamilyKind kind = FamilyKind::of(parse_family_tag(detail::field<std::string>(j, "family")));
  if (family_uses_order(kind.tag)) kind.order = detail::field<int>(j, "order");
  if (kind.tag == FamilyTag::RandomSubspace) {
    auto basis = std::make_shared<std::vector<ComplexMatrix>>();
    for (const auto& b : detail::field<Json>(j, "basis")) basis->push_back(detail::entries_from_json(b, std::nullopt));
    kind.basis = std::move(basis);
  }
  return kind;
}

inline Json problem_to_json(const DecompositionProblem& problem) {
  Json kinds = Json::array();
  for (const auto& f : problem.factors) kinds.push_back(family_kind_to_json(f.kind));
  return Json{{"n", problem.n}, {"target", target_name(problem.target.tag)}, {"factors", std::move(kinds)}};
}

inline DecompositionProblem problem_from_json(const Json& j) {
  DecompositionProblem problem;
  problem.n = detail::field<int>(j, "n");
  problem.target = TargetSpace{parse_target(detail::field<std::string>(j, "target")), problem.n};
  for (const auto& k : detail::field<Json>(j, "factors"))
    problem.factors.push_back(make_family(family_kind_from_json(k), problem.n));
  problem.validate();
  return problem;
}

// ---- chains ----

inline void validate_chain(const FactorChain& chain) {
  chain.problem.validate();
  if (chain.factors.empty()) throw Error(ErrorKind::Validation, "chain has no factors");
  if (chain.params.size() != chain.problem.factors.size() || chain.factors.size() != chain.problem.factors.size())
    throw Error(ErrorKind::LengthMismatch, "chain params, factors and families differ in length");
  for (std::size_t i = 0; i < chain.factors.size(); ++i) {
    if (chain.params[i].size() != chain.problem.factors[i].param_dim)
      throw Error(ErrorKind::LengthMismatch, "parameter vector " + std::to_string(i) + " has the wrong length");
    if (chain.factors[i].rows() != chain.problem.n || chain.factors[i].cols() != chain.problem.n)
      throw Error(ErrorKind::SizeMismatch, "factor " + std::to_string(i) + " has the wrong size");
  }
}

inline Json chain_to_json(const FactorChain& chain) {
  validate_chain(chain);
  Json params = Json::array();
  for (const auto& p : chain.params) params.push_back(detail::vector_to_json(p));
  Json factors = Json::array();
  for (const auto& f : chain.factors) factors.push_back(detail::entries_to_json(f));
  return Json{{"schema_version", kSchemaVersion},
              {"problem", problem_to_json(chain.problem)},
              {"params", std::move(params)},
              {"factors", std::move(factors)},
              {"residual", chain.residual},
              {"iterations", chain.iterations},
              {"converged", chain.converged}};
}

inline FactorChain chain_from_json(const Json& j) {
  detail::check_schema(j);
  FactorChain chain;
  chain.problem = problem_from_json(detail::field<Json>(j, "problem"));
  for (const auto& p : detail::field<Json>(j, "params")) chain.params.push_back(detail::vector_from_json(p));
  for (const auto& f : detail::field<Json>(j, "factors"))
    chain.factors.push_back(detail::entries_from_json(f, chain.problem.n));
  chain.residual = detail::field<double>(j, "residual");
  chain.iterations = detail::field<int>(j, "iterations");
  chain.converged = detail::field<bool>(j, "converged");
  validate_chain(chain);
  return chain;
}

inline void write_chain(const FactorChain& chain, const std::string& path) {
  detail::write_text(path, chain_to_json(chain).dump(2) + "\n");
}

inline FactorChain read_chain(const std::string& path) {
  auto in = detail::open_in(path);
  return chain_from_json(detail::parse_json_text(detail::slurp(in)));
}

inline bool operator==(const FactorChain& a, const FactorChain& b) {
  if (a.problem.n != b.problem.n || a.problem.target.tag != b.problem.target.tag ||
      a.problem.factors.size() != b.problem.factors.size())
    return false;
  for (std::size_t i = 0; i < a.problem.factors.size(); ++i)
    if (!(a.problem.factors[i].kind == b.problem.factors[i].kind)) return false;
  return a.params == b.params && a.factors == b.factors && a.residual == b.residual &&
         a.iterations == b.iterations && a.converged == b.converged;
}

// ---- options ----

/// Partial objects are allowed; absent keys keep their defaults.
inline FitOptions fit_options_from_json(const Json& j) {
  FitOptions opts;
  if (!j.is_object()) throw Error(ErrorKind::Parse, "options must be a JSON object");
  if (j.contains("max_iterations")) opts.max_iterations = detail::field<int>(j, "max_iterations");
  if (j.contains("residual_tol")) opts.residual_tol = detail::field<double>(j, "residual_tol");
  if (j.contains("damping_init")) opts.damping_init = detail::field<double>(j, "damping_init");
  if (j.contains("restarts")) opts.restarts = detail::field<int>(j, "restarts");
  if (j.contains("seed")) opts.seed = detail::field<std::uint64_t>(j, "seed");
  opts.validate();
  return opts;
}

inline FitOptions read_fit_options(const std::string& path) {
  auto in = detail::open_in(path);
  return fit_options_from_json(detail::parse_json_text(detail::slurp(in)));
}

// ---- reports ----

inline Json report_to_json(const DominanceReport& report) {
  return Json{{"schema_version", kSchemaVersion},
              {"families", report.families},
              {"n", report.n},
              {"r", report.r},
              {"target", target_name(report.target)},
              {"trials", report.trials},
              {"ranks", report.ranks},
              {"d_estimate", report.d_estimate},
              {"target_dim", report.target_dim},
              {"dominant", report.dominant},
              {"tolerance", report.tolerance},
              {"seed", report.seed},
              {"notes", report.notes}};
}

inline DominanceReport report_from_json(const Json& j) {
  detail::check_schema(j);
  DominanceReport report;
  report.families = detail::field<std::vector<std::string>>(j, "families");
  report.n = detail::field<int>(j, "n");
  report.r = detail::field<int>(j, "r");
  report.target = parse_target(detail::field<std::string>(j, "target"));
  report.trials = detail::field<int>(j, "trials");
  report.ranks = detail::field<std::vector<int>>(j, "ranks");
  report.d_estimate = detail::field<int>(j, "d_estimate");
  report.target_dim = detail::field<int>(j, "target_dim");
  report.dominant = detail::field<bool>(j, "dominant");
  report.tolerance = detail::field<double>(j, "tolerance");
  report.seed = detail::field<std::uint64_t>(j, "seed");
  report.notes = detail::field<std::vector<std::string>>(j, "notes");
  return report;
}

inline void write_report(const DominanceReport& report, const std::string& path) {
  detail::write_text(path, report_to_json(report).dump(2) + "\n");
}

inline DominanceReport read_report(const std::string& path) {
  auto in = detail::open_in(path);
  return report_from_json(detail::parse_json_text(detail::slurp(in)));
}

// ---- companion results ----

inline Json companion_result_to_json(const CompanionResult& result) {
  Json j{{"schema_version", kSchemaVersion}, {"status", to_string(result.status)}};
  j["failed_column"] = result.failed_column ? Json(*result.failed_column) : Json(nullptr);
  if (result.coefficients) {
    Json columns = Json::array();
    for (const auto& c : result.coefficients->columns) columns.push_back(detail::vector_to_json(c));
    j["n"] = result.coefficients->n;
    j["columns"] = std::move(columns);
  }
  return j;
}

}  // namespace smd
