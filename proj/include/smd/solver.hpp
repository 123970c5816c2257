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
 * @file solver.hpp
 * @brief Numerical chain fitting A ~ A_1 ... A_r with A_i in structured families.
 *
 * fit_chain runs a Levenberg-damped Gauss-Newton iteration on the stacked
 * parameter vector. The map is holomorphic, so the complex Jacobian assembled
 * from d rho_r is used directly. Products of cones have an (r-1)-dimensional
 * scaling fiber, so J^H J is always singular; the damping term keeps the step
 * well defined.
 */

#include "smd/core.hpp"
#include "smd/dominance.hpp"
#include "smd/families.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <optional>
#include <vector>

namespace smd {

struct FitOptions {
  int max_iterations = 200;
  double residual_tol = 1e-8;
  double damping_init = 1e-3;
  int restarts = 8;
  std::uint64_t seed = 0;

  void validate() const {
    if (max_iterations < 1 || !(residual_tol > 0.0) || !(residual_tol < 1.0) || !(damping_init > 0.0) ||
        restarts < 0)
      throw Error(ErrorKind::ParameterRange, "invalid fit options");
  }
};

struct FactorChain {
  DecompositionProblem problem;
  std::vector<ComplexVector> params;
  std::vector<ComplexMatrix> factors;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// ||A_1...A_r - target||_F / max(1, ||target||_F)
inline double chain_residual(std::span<const ComplexMatrix> factors, const ComplexMatrix& target) {
  return (chain_product(factors) - target).norm() / std::max(1.0, target.norm());
}

namespace detail {

inline std::vector<ComplexMatrix> factors_of(const DecompositionProblem& problem,
                                             std::span<const ComplexVector> params) {
  std::vector<ComplexMatrix> out;
  out.reserve(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) out.push_back(parameterize(problem.factors[i], params[i]));
  return out;
}

/// Block sizes of the inductive skew base points: peel 8 (even n >= 16) or 5 (odd n >= 13).
inline std::vector<int> skew_blocks(int n) {
  std::vector<int> blocks;
  while ((n % 2 == 0 && n >= 16) || (n % 2 == 1 && n >= 13)) {
    const int peel = n % 2 == 0 ? 8 : 5;
    blocks.push_back(peel);
    n -= peel;
  }
  blocks.push_back(n);
  return blocks;
}

inline ComplexVector skew_block_point(int n, Rng& rng) {
  ComplexMatrix k = ComplexMatrix::Zero(n, n);
  int offset = 0;
  for (int size : skew_blocks(n)) {
    for (int i = 0; i < size; ++i)
      for (int j = i + 1; j < size; ++j) {
        const Complex z = complex_gaussian(rng);
        k(offset + i, offset + j) = z;
        k(offset + j, offset + i) = -z;
      }
    offset += size;
  }
  ComplexVector p(n * (n - 1) / 2);
  Eigen::Index idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) p(idx++) = k(i, j) + 0.1 * complex_gaussian(rng);
  return p;
}

/// Starting point for factor `slot` of an r-factor chain.
inline ComplexVector initial_params(const FamilySpec& spec, int slot, int r, Rng& rng) {
  const int n = spec.n;
  switch (spec.kind.tag) {
    case FamilyTag::SymmetricToeplitz:
    case FamilyTag::PersymmetricHankel: {
      ComplexVector p = 0.1 * complex_gaussian_vector(rng, n);
      p(0) += 1.0;
      const int k = n - r + slot;
      if (k >= 1 && k < n) p(k) += complex_gaussian(rng);
      return p;
    }
    case FamilyTag::SkewSymmetric: return skew_block_point(n, rng);
    default: break;
  }
  if (contains_identity(spec))
    return params_of(spec, ComplexMatrix::Identity(n, n)) + 0.1 * complex_gaussian_vector(rng, spec.param_dim);
  return sample_point(spec, rng).first;
}

/// Rescales the linear factors so the product has the target's norm.
inline void match_scale(const DecompositionProblem& problem, std::vector<ComplexVector>& params,
                        const ComplexMatrix& target) {
  std::vector<std::size_t> cones;
  for (std::size_t i = 0; i < params.size(); ++i)
    if (is_linear_family(problem.factors[i])) cones.push_back(i);
  if (cones.empty()) return;
  const double product_norm = chain_product(factors_of(problem, params)).norm();
  const double target_norm = target.norm();
  if (!(product_norm > 0.0) || !(target_norm > 0.0)) return;
  const double factor = std::pow(target_norm / product_norm, 1.0 / static_cast<double>(cones.size()));
  for (std::size_t i : cones) params[i] *= factor;
}

/// Target as a member of one factor's family, identities elsewhere.
inline std::optional<std::vector<ComplexVector>> identity_padding(const DecompositionProblem& problem,
                                                                  const ComplexMatrix& target) {
  const int n = problem.n;
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  for (std::size_t slot = 0; slot < problem.factors.size(); ++slot) {
    if (!is_member(problem.factors[slot], target, 1e-13)) continue;
    bool others = true;
    for (std::size_t i = 0; i < problem.factors.size(); ++i)
      if (i != slot && !contains_identity(problem.factors[i])) others = false;
    if (!others) continue;
    std::vector<ComplexVector> params;
    try {
      for (std::size_t i = 0; i < problem.factors.size(); ++i)
        params.push_back(params_of(problem.factors[i], i == slot ? target : id, 1e-13));
    } catch (const Error&) {
      continue;
    }
    return params;
  }
  return std::nullopt;
}

inline std::vector<ComplexVector> split(const DecompositionProblem& problem, const ComplexVector& stacked) {
  std::vector<ComplexVector> out;
  Eigen::Index offset = 0;
  for (const auto& f : problem.factors) {
    out.push_back(stacked.segment(offset, f.param_dim));
    offset += f.param_dim;
  }
  return out;
}

inline ComplexVector stack(std::span<const ComplexVector> params) {
  Eigen::Index total = 0;
  for (const auto& p : params) total += p.size();
  ComplexVector out(total);
  Eigen::Index offset = 0;
  for (const auto& p : params) {
    out.segment(offset, p.size()) = p;
    offset += p.size();
  }
  return out;
}

inline FactorChain finish(const DecompositionProblem& problem, std::vector<ComplexVector> params,
                          const ComplexMatrix& target, int iterations, double tol) {
  FactorChain chain;
  chain.problem = problem;
  chain.factors = factors_of(problem, params);
  chain.params = std::move(params);
  chain.residual = chain_residual(chain.factors, target);
  chain.iterations = iterations;
  chain.converged = chain.residual <= tol;
  return chain;
}

/// One damped Gauss-Newton run from a fixed starting point.
inline FactorChain levenberg_marquardt(const ComplexMatrix& target, const DecompositionProblem& problem,
                                       std::vector<ComplexVector> params, const FitOptions& opts) {
  const ComplexVector goal = target_coordinates(problem.target, target);
  const double scale = std::max(1.0, target.norm());
  auto residual_of = [&](std::span<const ComplexVector> p) -> std::optional<ComplexVector> {
    try {
      return target_coordinates(problem.target, chain_product(factors_of(problem, p))) - goal;
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::DegeneratePoint) return std::nullopt;
      throw;
    }
  };
  auto current = residual_of(params);
  if (!current) return finish(problem, params, target, 0, opts.residual_tol);
  double cost = current->norm();
  double damping = opts.damping_init;
  int iterations = 0;
  while (iterations < opts.max_iterations && cost / scale > 0.25 * opts.residual_tol) {
    ++iterations;
    ComplexMatrix jac;
    try {
      jac = jacobian(problem, params);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DegeneratePoint) throw;
      break;
    }
    const Eigen::Index rows = jac.rows();
    const Eigen::Index cols = jac.cols();
    const double mean_diag = std::max(jac.squaredNorm() / static_cast<double>(cols), 1e-300);
    bool improved = false;
    while (!improved && damping < 1e12) {
      const double lambda = damping * mean_diag;
      ComplexVector step;
      // Same step either way; solve the smaller of the two normal systems.
      if (cols <= rows) {
        ComplexMatrix normal = jac.adjoint() * jac;
        normal.diagonal().array() += lambda;
        step = -normal.ldlt().solve(jac.adjoint() * *current);
      } else {
        ComplexMatrix normal = jac * jac.adjoint();
        normal.diagonal().array() += lambda;
        step = -jac.adjoint() * normal.ldlt().solve(*current);
      }
      const auto trial_params = split(problem, stack(params) + step);
      const auto trial = residual_of(trial_params);
      if (trial && trial->norm() < cost) {
        params = trial_params;
        current = trial;
        cost = trial->norm();
        damping = std::max(damping / 10.0, 1e-12);
        improved = true;
      } else {
        damping *= 10.0;
      }
    }
    if (!improved) break;
  }
  return finish(problem, std::move(params), target, iterations, opts.residual_tol);
}

}  // namespace detail

/// Fits target = A_1...A_r; the best of 1 + opts.restarts starts is returned.
/// Throws Infeasible when sum dim W_i < dim X, unless identity padding already solves it.
inline FactorChain fit_chain(const ComplexMatrix& target, const DecompositionProblem& problem, const FitOptions& opts,
                             const std::optional<std::vector<ComplexVector>>& initial = std::nullopt) {
  require_square(target, "target");
  problem.validate();
  opts.validate();
  if (target.rows() != problem.n) throw Error(ErrorKind::SizeMismatch, "target size differs from problem n");
  std::vector<int> dims;
  for (const auto& f : problem.factors) dims.push_back(f.param_dim);
  // A target sitting inside one factor family is reachable even when the count fails.
  auto padded = initial ? std::nullopt : detail::identity_padding(problem, target);
  if (!padded && !lower_bound_linear(dims, problem.target.dim()))
    throw Error(ErrorKind::Infeasible, "sum of family dimensions is below the target dimension");

  const int r = static_cast<int>(problem.factors.size());
  std::optional<FactorChain> best;
  for (int attempt = 0; attempt <= opts.restarts; ++attempt) {
    std::vector<ComplexVector> start;
    if (attempt == 0 && initial) {
      if (initial->size() != problem.factors.size())
        throw Error(ErrorKind::LengthMismatch, "initial chain has the wrong length");
      start = *initial;
    } else if (attempt == 0 && padded) {
      start = std::move(*padded);
    } else {
      Rng rng(opts.seed + static_cast<std::uint64_t>(attempt));
      for (int i = 0; i < r; ++i) start.push_back(detail::initial_params(problem.factors[i], i, r, rng));
      detail::match_scale(problem, start, target);
    }
    FactorChain chain = detail::levenberg_marquardt(target, problem, std::move(start), opts);
    if (!best || chain.residual < best->residual) best = std::move(chain);
    if (best->converged) break;
  }
  return std::move(*best);
}

/// A = L U without pivoting, L unit lower triangular; NonGeneric on a vanishing pivot.
inline std::pair<ComplexMatrix, ComplexMatrix> lu_no_pivot(const ComplexMatrix& a, double pivot_tol = 1e-12) {
  require_square(a, "LU input");
  const Eigen::Index n = a.rows();
  ComplexMatrix u = a;
  ComplexMatrix l = ComplexMatrix::Identity(n, n);
  const double scale = std::max(a.norm(), std::numeric_limits<double>::min());
  for (Eigen::Index k = 0; k < n; ++k) {
    if (std::abs(u(k, k)) <= pivot_tol * scale)
      throw Error(ErrorKind::NonGeneric, "leading principal minor " + std::to_string(k + 1) + " vanishes");
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const Complex factor = u(i, k) / u(k, k);
      l(i, k) = factor;
      u.row(i).tail(n - k) -= factor * u.row(k).tail(n - k);
      u(i, k) = 0.0;
    }
  }
  return {l, u};
}

/// target = (n lower bidiagonal factors) (n upper bidiagonal factors) through LU.
inline FactorChain decompose_bidiagonal(const ComplexMatrix& target, const FitOptions& opts) {
  require_square(target, "target");
  const int n = static_cast<int>(target.rows());
  if (n < 2) throw Error(ErrorKind::ParameterRange, "bidiagonal decomposition needs n >= 2");
  const auto [l, u] = lu_no_pivot(target);

  FitOptions inner = opts;
  inner.residual_tol = opts.residual_tol * 1e-2;
  const auto lower = uniform_problem(FamilyKind::of(FamilyTag::BidiagonalLower), n, n, TargetTag::Full);
  const auto upper = uniform_problem(FamilyKind::of(FamilyTag::BidiagonalUpper), n, n, TargetTag::Full);
  const FactorChain lchain = fit_chain(l, lower, inner);
  const FactorChain uchain = fit_chain(u, upper, inner);

  DecompositionProblem whole{n, lower.factors, TargetSpace{TargetTag::Full, n}};
  whole.factors.insert(whole.factors.end(), upper.factors.begin(), upper.factors.end());
  std::vector<ComplexVector> params = lchain.params;
  params.insert(params.end(), uchain.params.begin(), uchain.params.end());
  FactorChain chain =
      detail::finish(whole, std::move(params), target, lchain.iterations + uchain.iterations, opts.residual_tol);
  if (!chain.converged) {
    FitOptions polish = opts;
    polish.restarts = 0;
    FactorChain polished = fit_chain(target, whole, polish, chain.params);
    polished.iterations += chain.iterations;
    if (polished.residual < chain.residual) chain = std::move(polished);
  }
  return chain;
}

/// Number of symmetric Toeplitz factors used for an n x n centrosymmetric target.
inline int centrosymmetric_chain_length(int n) {
  return std::max((n + 1) / 2, lower_bound_cone(n, (n * n + 1) / 2));
}

/// target = T_1...T_r with T_i symmetric Toeplitz, or H_1...H_r with H_i = J T_i
/// persymmetric Hankel when use_hankel is set. For odd r the Toeplitz chain is
/// fitted to J*target so that the Hankel product reproduces target itself.
inline FactorChain decompose_centrosymmetric(const ComplexMatrix& target, bool use_hankel, const FitOptions& opts) {
  require_square(target, "target");
  const int n = static_cast<int>(target.rows());
  if (n < 3) throw Error(ErrorKind::ParameterRange, "centrosymmetric decomposition needs n >= 3");
  if (!is_member(make_family(FamilyKind::of(FamilyTag::Centrosymmetric), n), target, 1e-10))
    throw Error(ErrorKind::NonMember, "target is not centrosymmetric");
  const int r = centrosymmetric_chain_length(n);
  const auto toeplitz = uniform_problem(FamilyKind::of(FamilyTag::SymmetricToeplitz), n, r, TargetTag::Centrosymmetric);
  const bool twist = use_hankel && r % 2 == 1;
  const ComplexMatrix goal = twist ? ComplexMatrix(exchange_matrix(n) * target) : target;
  FactorChain chain = fit_chain(goal, toeplitz, opts);
  if (!use_hankel) return chain;
  const auto hankel = uniform_problem(FamilyKind::of(FamilyTag::PersymmetricHankel), n, r, TargetTag::Centrosymmetric);
  const int iterations = chain.iterations;
  return detail::finish(hankel, std::move(chain.params), target, iterations, opts.residual_tol);
}

}  // namespace smd
