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
 * @file cli.hpp
 * @brief The smd command line: verify, table, decompose, companion, bounds, sample.
 *
 * Exit codes: 0 success, 1 usage, 2 I/O or parse, 3 dominance not observed,
 * 4 fit not converged, 5 companion factorization not unique.
 */

#include "smd/companion.hpp"
#include "smd/dominance.hpp"
#include "smd/families.hpp"
#include "smd/io.hpp"
#include "smd/solver.hpp"

#include <CLI11.hpp>

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace smd::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kIo = 2,
  kNotDominant = 3,
  kNotConverged = 4,
  kNotUnique = 5,
};

namespace detail {

/// Default order: k = 2 for the k-diagonal families, s = 0 for Vandermonde, 2n-1 for subspaces.
inline int default_order(FamilyTag tag, int n) {
  switch (tag) {
    case FamilyTag::KDiagonal:
    case FamilyTag::KDiagonalUpper:
    case FamilyTag::KDiagonalLower: return 2;
    case FamilyTag::RandomSubspace: return 2 * n - 1;
    default: return 0;
  }
}

/// Parses "name" or "name:order"; subspace bases derive from `seed`.
inline FamilyKind family_from_token(const std::string& token, int n, std::optional<int> order, std::uint64_t seed) {
  std::string name = token;
  if (const auto colon = token.find(':'); colon != std::string::npos) {
    name = token.substr(0, colon);
    try {
      std::size_t used = 0;
      order = std::stoi(token.substr(colon + 1), &used);
      if (used != token.size() - colon - 1) throw std::invalid_argument(token);
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::ParameterRange, "bad order in '" + token + "'");
    }
  }
  FamilyTag tag;
  try {
    tag = parse_family_tag(name);
  } catch (const Error& e) {
    throw Error(ErrorKind::ParameterRange, e.what());
  }
  const int k = order.value_or(default_order(tag, n));
  if (tag == FamilyTag::RandomSubspace) return random_subspace(n, k, seed);
  return FamilyKind::of(tag, k);
}

/// skew with odd n targets DET_n, the Toeplitz-like families CS_n, everything else C^{n x n}.
inline TargetTag default_target(const std::vector<FamilySpec>& factors) {
  bool all_skew = true;
  bool all_centro = true;
  for (const auto& f : factors) {
    all_skew = all_skew && f.kind.tag == FamilyTag::SkewSymmetric;
    const bool centro = f.kind.tag == FamilyTag::SymmetricToeplitz || f.kind.tag == FamilyTag::PersymmetricHankel ||
                        f.kind.tag == FamilyTag::Centrosymmetric;
    all_centro = all_centro && centro;
  }
  if (all_skew) return skew_target(factors.front().n);
  if (all_centro) return TargetTag::Centrosymmetric;
  return TargetTag::Full;
}

inline std::vector<std::string> split_list(const std::string& list) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = list.find(',', start);
    out.push_back(list.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  for (const auto& s : out)
    if (s.empty()) throw Error(ErrorKind::Parse, "empty family name in chain list");
  return out;
}

inline void print(std::ostream& out, const Json& j) { out << j.dump(2) << "\n"; }

inline Json table_json(int trials, double tol, std::uint64_t seed, int summary_n, bool& all_match) {
  Json rows = Json::array();
  all_match = true;
  for (const auto& row : skew_dimension_table()) {
    const auto problem =
        uniform_problem(FamilyKind::of(FamilyTag::SkewSymmetric), row.n, row.r, skew_target(row.n));
    const auto report = estimate_image_dimension(problem, trials, tol, seed);
    const bool match = report.d_estimate == row.expected_d;
    all_match = all_match && match;
    rows.push_back(Json{{"n", row.n},
                        {"r", row.r},
                        {"expected_d", row.expected_d},
                        {"computed_d", report.d_estimate},
                        {"ranks", report.ranks},
                        {"match", match}});
  }
  Json summary = Json::array();
  for (const auto& row : conclusion_table(summary_n)) {
    summary.push_back(Json{{"family", row.family},
                           {"generic_r", row.generic_r},
                           {"arbitrary_r", row.arbitrary_r ? Json(*row.arbitrary_r) : Json(nullptr)},
                           {"algorithm", row.algorithm}});
  }
  return Json{{"schema_version", kSchemaVersion}, {"skew", std::move(rows)},   {"summary_n", summary_n},
              {"summary", std::move(summary)},       {"all_match", all_match}, {"seed", seed}};
}

inline Json bounds_json(const FamilySpec& spec, TargetTag target_tag) {
  const TargetSpace target{target_tag, spec.n};
  const bool cone = is_linear_family(spec) && spec.param_dim >= 2;
  const int lower = cone ? lower_bound_cone(spec.param_dim, target.dim())
                         : static_cast<int>(ceil_div(target.dim(), std::max(spec.param_dim, 1)));
  return Json{{"family", family_name(spec.kind)},
              {"n", spec.n},
              {"family_dim", spec.param_dim},
              {"target", target_name(target_tag)},
              {"target_dim", target.dim()},
              {"bound", cone ? "cone" : "linear"},
              {"lower_bound", lower},
              {"surjectivity_bound", surjectivity_bound(std::max(lower, 1))}};
}

inline int exit_for(const Error& e) {
  return e.kind() == ErrorKind::Parse || e.kind() == ErrorKind::Io ? kIo : kUsage;
}

}  // namespace detail

/// Runs one subcommand; JSON goes to `out`, diagnostics to `err`.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Structured matrix decompositions: dominance checks and factorizations", "smd"};
  app.require_subcommand(1);

  std::string family;
  int n = 0;
  int r = 0;
  int trials = 5;
  double tol = 1e-8;
  std::uint64_t seed = 0;
  std::optional<int> order;
  std::string target_flag;
  std::string in_path;
  std::string chain_list;
  std::string opts_path;
  std::string format_flag;
  int summary_n = 8;

  auto* verify = app.add_subcommand("verify", "Jacobian-rank dominance check for r factors of one family");
  verify->add_option("--family", family, "family name")->required();
  verify->add_option("--n", n, "matrix size")->required()->check(CLI::PositiveNumber);
  verify->add_option("--r", r, "number of factors")->required()->check(CLI::PositiveNumber);
  verify->add_option("--trials", trials, "random base points")->check(CLI::PositiveNumber);
  verify->add_option("--tol", tol, "relative singular value cutoff")->check(CLI::PositiveNumber);
  verify->add_option("--seed", seed, "base seed");
  verify->add_option("--order", order, "k or s parameter of the family");
  verify->add_option("--target", target_flag, "full, det or centro")->check(CLI::IsMember({"full", "det", "centro"}));

  auto* table = app.add_subcommand("table", "Skew-symmetric image dimensions and factor-count summary");
  table->add_option("--trials", trials, "random base points")->check(CLI::PositiveNumber);
  table->add_option("--tol", tol, "relative singular value cutoff")->check(CLI::PositiveNumber);
  table->add_option("--seed", seed, "base seed");
  table->add_option("--n", summary_n, "size used for the summary rows")->check(CLI::Range(3, 1000));

  auto* decompose = app.add_subcommand("decompose", "Fit a chain of structured factors to a matrix");
  decompose->add_option("--in", in_path, "matrix file (json or csv)")->required();
  decompose->add_option("--chain", chain_list, "comma-separated families, name[:order]")->required();
  decompose->add_option("--opts", opts_path, "FitOptions JSON");
  decompose->add_option("--target", target_flag, "full, det or centro")->check(CLI::IsMember({"full", "det", "centro"}));
  decompose->add_option("--format", format_flag, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  decompose->add_option("--seed", seed, "seed for subspace bases and, without --opts, restarts");

  auto* companion = app.add_subcommand("companion", "Exact product of n companion matrices");
  companion->add_option("--in", in_path, "matrix file (json or csv)")->required();
  companion->add_option("--format", format_flag, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  auto* bounds = app.add_subcommand("bounds", "Factor-count lower bound and 4r+1 surjectivity count");
  bounds->add_option("--family", family, "family name")->required();
  bounds->add_option("--n", n, "matrix size")->required()->check(CLI::PositiveNumber);
  bounds->add_option("--order", order, "k or s parameter of the family");
  bounds->add_option("--target", target_flag, "full, det or centro")->check(CLI::IsMember({"full", "det", "centro"}));

  auto* sample = app.add_subcommand("sample", "Random member of a family as a matrix file");
  sample->add_option("--family", family, "family name")->required();
  sample->add_option("--n", n, "matrix size")->required()->check(CLI::PositiveNumber);
  sample->add_option("--seed", seed, "seed");
  sample->add_option("--order", order, "k or s parameter of the family");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    auto read_input = [&] {
      const MatrixFormat format = format_flag.empty() ? format_from_path(in_path) : parse_matrix_format(format_flag);
      return read_matrix(in_path, format);
    };

    if (*verify) {
      const FamilySpec spec = make_family(detail::family_from_token(family, n, order, seed), n);
      std::vector<FamilySpec> factors(static_cast<std::size_t>(r), spec);
      const TargetTag target = target_flag.empty() ? detail::default_target(factors) : parse_target(target_flag);
      const DecompositionProblem problem{n, std::move(factors), TargetSpace{target, n}};
      const auto report = estimate_image_dimension(problem, trials, tol, seed);
      detail::print(out, report_to_json(report));
      return report.dominant ? kOk : kNotDominant;
    }
    if (*table) {
      bool all_match = false;
      detail::print(out, detail::table_json(trials, tol, seed, summary_n, all_match));
      return all_match ? kOk : kNotDominant;
    }
    if (*decompose) {
      const ComplexMatrix a = read_input();
      const int size = static_cast<int>(a.rows());
      FitOptions opts;
      opts.seed = seed;
      if (!opts_path.empty()) opts = read_fit_options(opts_path);
      DecompositionProblem problem;
      problem.n = size;
      const auto tokens = detail::split_list(chain_list);
      for (std::size_t i = 0; i < tokens.size(); ++i)
        problem.factors.push_back(make_family(detail::family_from_token(tokens[i], size, std::nullopt, seed + i), size));
      const TargetTag target =
          target_flag.empty() ? detail::default_target(problem.factors) : parse_target(target_flag);
      problem.target = TargetSpace{target, size};
      const FactorChain chain = fit_chain(a, problem, opts);
      detail::print(out, chain_to_json(chain));
      if (!chain.converged) err << "not converged: residual " << chain.residual << "\n";
      return chain.converged ? kOk : kNotConverged;
    }
    if (*companion) {
      const auto result = decompose_companion(read_input());
      detail::print(out, companion_result_to_json(result));
      return result.status == CompanionStatus::Unique ? kOk : kNotUnique;
    }
    if (*bounds) {
      const FamilySpec spec = make_family(detail::family_from_token(family, n, order, seed), n);
      const TargetTag target = target_flag.empty() ? detail::default_target({spec}) : parse_target(target_flag);
      detail::print(out, detail::bounds_json(spec, target));
      return kOk;
    }
    if (*sample) {
      const FamilySpec spec = make_family(detail::family_from_token(family, n, order, seed), n);
      detail::print(out, matrix_to_json(sample_point(spec, seed).second));
      return kOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return detail::exit_for(e);
  }
  return kUsage;
}

}  // namespace smd::cli
