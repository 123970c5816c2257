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
 * @file dominance.hpp
 * @brief Multiplication map rho_r(A_1, ..., A_r) = A_1 ... A_r, its differential,
 *        and Jacobian-rank tests for dominance.
 *
 * A full-rank Jacobian at a single point certifies that rho_r is dominant onto
 * the target. Rank deficiency over finitely many random points is only
 * evidence, which is why DominanceReport keeps every observed rank.
 */

#include "smd/core.hpp"
#include "smd/families.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace smd {

enum class TargetTag { Full, DetHypersurface, Centrosymmetric };

inline std::string target_name(TargetTag tag) {
  switch (tag) {
    case TargetTag::Full: return "full";
    case TargetTag::DetHypersurface: return "det";
    case TargetTag::Centrosymmetric: return "centro";
  }
  return "unknown";
}

inline TargetTag parse_target(const std::string& name) {
  if (name == "full") return TargetTag::Full;
  if (name == "det") return TargetTag::DetHypersurface;
  if (name == "centro") return TargetTag::Centrosymmetric;
  throw Error(ErrorKind::Parse, "unknown target '" + name + "'");
}

struct TargetSpace {
  TargetTag tag = TargetTag::Full;
  int n = 0;

  int dim() const {
    switch (tag) {
      case TargetTag::Full: return n * n;
      case TargetTag::DetHypersurface: return n * n - 1;
      case TargetTag::Centrosymmetric: return (n * n + 1) / 2;
    }
    return 0;
  }

  /// Rows of the Jacobian: all n^2 entries, or the independent half for CS_n.
  int coordinate_count() const { return tag == TargetTag::Centrosymmetric ? (n * n + 1) / 2 : n * n; }
};

struct DecompositionProblem {
  int n = 0;
  std::vector<FamilySpec> factors;
  TargetSpace target;

  int total_params() const {
    int total = 0;
    for (const auto& f : factors) total += f.param_dim;
    return total;
  }

  void validate() const {
    if (factors.empty()) throw Error(ErrorKind::Validation, "a problem needs at least one factor");
    if (target.n != n) throw Error(ErrorKind::SizeMismatch, "target size differs from n");
    for (const auto& f : factors)
      if (f.n != n) throw Error(ErrorKind::SizeMismatch, "factor families must share n");
  }
};

/// Same family repeated r times.
inline DecompositionProblem uniform_problem(const FamilyKind& kind, int n, int r, TargetTag target) {
  DecompositionProblem problem{n, {}, TargetSpace{target, n}};
  for (int i = 0; i < r; ++i) problem.factors.push_back(make_family(kind, n));
  return problem;
}

struct DominanceReport {
  std::vector<std::string> families;
  int n = 0;
  int r = 0;
  TargetTag target = TargetTag::Full;
  int trials = 0;
  std::vector<int> ranks;
  int d_estimate = 0;
  int target_dim = 0;
  bool dominant = false;
  double tolerance = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::string> notes;

  bool operator==(const DominanceReport&) const = default;
};

inline DominanceReport make_report(const DecompositionProblem& problem, std::vector<int> ranks,
                                   double rel_tol, std::uint64_t seed) {
  DominanceReport report;
  for (const auto& f : problem.factors) report.families.push_back(family_name(f.kind));
  report.n = problem.n;
  report.r = static_cast<int>(problem.factors.size());
  report.target = problem.target.tag;
  report.trials = static_cast<int>(ranks.size());
  report.d_estimate = ranks.empty() ? 0 : *std::max_element(ranks.begin(), ranks.end());
  report.ranks = std::move(ranks);
  report.target_dim = problem.target.dim();
  report.dominant = report.d_estimate == report.target_dim;
  report.tolerance = rel_tol;
  report.seed = seed;
  return report;
}

inline ComplexMatrix chain_product(std::span<const ComplexMatrix> factors) {
  if (factors.empty()) throw Error(ErrorKind::Validation, "empty factor list");
  ComplexMatrix out = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) {
    if (factors[i].rows() != out.cols()) throw Error(ErrorKind::SizeMismatch, "factors are not conformable");
    out = out * factors[i];
  }
  return out;
}

/// Prefix products A_1...A_{i-1} and suffix products A_{i+1}...A_r of a chain.
class ChainCache {
 public:
  explicit ChainCache(std::span<const ComplexMatrix> base) {
    if (base.empty()) throw Error(ErrorKind::Validation, "empty factor list");
    const std::size_t r = base.size();
    const Eigen::Index n = base.front().rows();
    for (const auto& a : base)
      if (a.rows() != n || a.cols() != n) throw Error(ErrorKind::SizeMismatch, "factors are not conformable");
    prefix_.resize(r);
    suffix_.resize(r);
    prefix_[0] = ComplexMatrix::Identity(n, n);
    suffix_[r - 1] = ComplexMatrix::Identity(n, n);
    if (r > 1) {
      prefix_[1] = base[0];
      suffix_[r - 2] = base[r - 1];
      for (std::size_t i = 2; i < r; ++i) prefix_[i] = prefix_[i - 1] * base[i - 1];
      for (std::size_t i = r - 2; i-- > 0;) suffix_[i] = base[i + 1] * suffix_[i + 1];
    }
  }

  std::size_t size() const { return prefix_.size(); }
  const ComplexMatrix& prefix(std::size_t i) const { return prefix_[i]; }
  const ComplexMatrix& suffix(std::size_t i) const { return suffix_[i]; }

  /// A_1...A_{i-1} X A_{i+1}...A_r
  ComplexMatrix sandwich(std::size_t i, const ComplexMatrix& x) const {
    if (x.rows() != prefix_[i].cols() || x.cols() != suffix_[i].rows())
      throw Error(ErrorKind::SizeMismatch, "tangent has the wrong size");
    return prefix_[i] * x * suffix_[i];
  }

 private:
  std::vector<ComplexMatrix> prefix_;
  std::vector<ComplexMatrix> suffix_;
};

/// d rho_r at the base chain applied to one tangent per factor.
inline ComplexMatrix differential_apply(std::span<const ComplexMatrix> base,
                                        std::span<const ComplexMatrix> tangents) {
  if (base.size() != tangents.size())
    throw Error(ErrorKind::LengthMismatch, "base and tangent lists differ in length");
  const ChainCache cache(base);
  ComplexMatrix sum = cache.sandwich(0, tangents[0]);
  for (std::size_t i = 1; i < base.size(); ++i) sum += cache.sandwich(i, tangents[i]);
  return sum;
}

inline ComplexVector target_coordinates(const TargetSpace& target, const ComplexMatrix& m) {
  ComplexVector v = row_major(m);
  if (target.tag == TargetTag::Centrosymmetric) return v.head(target.coordinate_count());
  return v;
}

/// Jacobian from explicit tangent frames, one column per frame direction.
inline ComplexMatrix jacobian_from_frames(const TargetSpace& target, std::span<const TangentFrame> frames) {
  std::vector<ComplexMatrix> base;
  base.reserve(frames.size());
  Eigen::Index cols = 0;
  for (const auto& f : frames) {
    base.push_back(f.base_point);
    cols += static_cast<Eigen::Index>(f.basis.size());
  }
  const ChainCache cache(base);
  ComplexMatrix jac(target.coordinate_count(), cols);
  Eigen::Index col = 0;
  for (std::size_t i = 0; i < frames.size(); ++i)
    for (const auto& x : frames[i].basis) jac.col(col++) = target_coordinates(target, cache.sandwich(i, x));
  return jac;
}

inline std::vector<TangentFrame> frames_at(const DecompositionProblem& problem,
                                           std::span<const ComplexVector> base_params) {
  problem.validate();
  if (base_params.size() != problem.factors.size())
    throw Error(ErrorKind::LengthMismatch, "one parameter vector per factor is required");
  std::vector<TangentFrame> frames;
  frames.reserve(base_params.size());
  for (std::size_t i = 0; i < base_params.size(); ++i)
    frames.push_back(tangent_basis(problem.factors[i], base_params[i]));
  return frames;
}

inline ComplexMatrix jacobian(const DecompositionProblem& problem, std::span<const ComplexVector> base_params) {
  const auto frames = frames_at(problem, base_params);
  return jacobian_from_frames(problem.target, frames);
}

inline Eigen::VectorXd singular_values(const ComplexMatrix& m) {
  if (m.size() == 0) return Eigen::VectorXd();
  Eigen::BDCSVD<ComplexMatrix> svd(m);
  return svd.singularValues();
}

/// Number of singular values above rel_tol times the largest one.
inline int numerical_rank(const ComplexMatrix& m, double rel_tol) {
  if (!(rel_tol > 0.0)) throw Error(ErrorKind::ParameterRange, "rel_tol must be positive");
  const Eigen::VectorXd sv = singular_values(m);
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > rel_tol * sv(0)) ++rank;
  return rank;
}

/// Jacobian rank at `trials` random points; trial t draws from an engine seeded with seed + t.
inline DominanceReport estimate_image_dimension(const DecompositionProblem& problem, int trials,
                                                double rel_tol, std::uint64_t seed) {
  problem.validate();
  if (trials < 1) throw Error(ErrorKind::ParameterRange, "trials must be >= 1");
  std::vector<int> ranks;
  ranks.reserve(trials);
  for (int t = 0; t < trials; ++t) {
    Rng rng(seed + static_cast<std::uint64_t>(t));
    for (;;) {
      std::vector<ComplexVector> params;
      for (const auto& f : problem.factors) params.push_back(sample_point(f, rng).first);
      try {
        ranks.push_back(numerical_rank(jacobian(problem, params), rel_tol));
        break;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::DegeneratePoint) throw;
      }
    }
  }
  return make_report(problem, std::move(ranks), rel_tol, seed);
}

/// Whether T_{A1} W1 * B + A * T_{A2} W2 fills C^{n x n} at the base pair (A, B).
inline bool two_factor_tangent_test(const FamilySpec& w1, const FamilySpec& w2,
                                    const ComplexMatrix& a, const ComplexMatrix& b,
                                    double rel_tol = 1e-8, int* rank_out = nullptr) {
  if (w1.n != w2.n) throw Error(ErrorKind::SizeMismatch, "families differ in n");
  if (!is_member(w1, a, 1e-10)) throw Error(ErrorKind::NonMember, "first base point is not in W1");
  if (!is_member(w2, b, 1e-10)) throw Error(ErrorKind::NonMember, "second base point is not in W2");
  const std::vector<TangentFrame> frames{tangent_basis(w1, a), tangent_basis(w2, b)};
  const int rank = numerical_rank(jacobian_from_frames(TargetSpace{TargetTag::Full, w1.n}, frames), rel_tol);
  if (rank_out) *rank_out = rank;
  return rank == w1.n * w1.n;
}

/// Necessary condition sum dim W_i >= dim X for a dominant rho_r.
inline bool lower_bound_linear(std::span<const int> dims, int target_dim) {
  long total = 0;
  for (int d : dims) total += d;
  return total >= target_dim;
}

/// Smallest r allowed for cones of equal dimension m: ceil((dim X - 1) / (m - 1)).
inline int lower_bound_cone(int m, int target_dim) {
  if (m <= 1) throw Error(ErrorKind::ParameterRange, "cone bound needs m >= 2");
  return static_cast<int>(ceil_div(target_dim - 1, m - 1));
}

/// rho_{4r+1} is surjective once rho_r is dominant (linear W containing the diagonals).
inline int surjectivity_bound(int r) {
  if (r < 1) throw Error(ErrorKind::ParameterRange, "r must be >= 1");
  return 4 * r + 1;
}

/// Jacobian rank for r symmetric Toeplitz factors at A_{n-i} = S_0 + t_{n-i} S_{n-i},
/// i = r..1, with random complex t; centrosymmetric coordinates.
inline DominanceReport symmetric_toeplitz_witness(int n, int r, double rel_tol, std::uint64_t seed) {
  if (n < 2 || r < 1 || r > n - 1)
    throw Error(ErrorKind::ParameterRange, "need n >= 2 and 1 <= r <= n-1");
  const auto problem = uniform_problem(FamilyKind::of(FamilyTag::SymmetricToeplitz), n, r,
                                       TargetTag::Centrosymmetric);
  Rng rng(seed);
  std::vector<ComplexVector> params;
  for (int i = r; i >= 1; --i) {
    ComplexVector p = ComplexVector::Zero(n);
    p(0) = 1.0;
    p(n - i) = complex_gaussian(rng);
    params.push_back(std::move(p));
  }
  auto report = make_report(problem, {numerical_rank(jacobian(problem, params), rel_tol)}, rel_tol, seed);
  report.notes.push_back("base points S_0 + t S_{n-i}");
  return report;
}

/// One row of the summary of generic and arbitrary factor counts.
struct ConclusionRow {
  std::string family;
  int generic_r = 0;
  std::optional<int> arbitrary_r;
  bool algorithm = false;
};

/// Factor counts derived from the bounds arithmetic above.
///
/// bidiagonal: n lower + n upper factors through LU; for arbitrary matrices the
/// extra diagonal factor of the 4r+1 construction is itself bidiagonal, giving 8n.
/// skew (n >= 8 even): 3 factors, surjective at 4*3+1. symmetric Toeplitz: cone bound
/// on CS_n. companion: n = ceil(n^2 / n), surjective at 4n+1. generalized Vandermonde:
/// n pairs Vand^T * Vand, surjective at 4(2n)+1.
inline std::vector<ConclusionRow> conclusion_table(int n) {
  if (n < 3) throw Error(ErrorKind::ParameterRange, "summary rows need n >= 3");
  std::vector<ConclusionRow> rows;
  const int bidiagonal = 2 * n;
  rows.push_back({"bidiagonal", bidiagonal, surjectivity_bound(bidiagonal) - 1, false});
  rows.push_back({"skew", 3, surjectivity_bound(3), false});
  rows.push_back({"toeplitz-sym", lower_bound_cone(n, (n * n + 1) / 2), std::nullopt, false});
  rows.push_back({"companion", static_cast<int>(ceil_div(n * n, n)), surjectivity_bound(n), true});
  rows.push_back({"vandermonde", 2 * n, surjectivity_bound(2 * n), false});
  return rows;
}

struct SkewTableRow {
  int n;
  int r;
  int expected_d;
};

/// Image dimensions of products of r skew-symmetric n x n matrices reported in the literature.
inline std::vector<SkewTableRow> skew_dimension_table() {
  return {{2, 2, 1},   {2, 3, 1},   {2, 4, 1},    {3, 3, 7},    {3, 4, 8},    {4, 3, 13},
          {4, 4, 15},  {4, 5, 16},  {5, 3, 24},   {6, 3, 35},   {6, 4, 36},   {7, 3, 48},
          {8, 3, 64},  {9, 3, 80},  {10, 3, 100}, {11, 3, 120}, {12, 3, 144}, {14, 3, 196}};
}

/// Skew chains land in DET_n for odd n; even n targets the full space.
inline TargetTag skew_target(int n) { return n % 2 ? TargetTag::DetHypersurface : TargetTag::Full; }

}  // namespace smd
