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
 * @file vandermonde.hpp
 * @brief Generalized Vandermonde matrices and the roots-of-unity chain
 *        W_i = Vand^T_{s_i} * A_i used to certify dominance.
 *
 * Throughout, w = exp(2 pi i / n) and indices p, q, i, j are 1-based as in
 * the closed forms. Powers of w are reduced modulo n before evaluation.
 */

#include "smd/core.hpp"
#include "smd/dominance.hpp"
#include "smd/families.hpp"

#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace smd {

/// w^e for w = exp(2 pi i / n), exact in the exponent.
inline Complex unit_root_power(int n, long e) {
  const long r = ((e % n) + n) % n;
  if (r == 0) return 1.0;
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(r) / n;
  return std::polar(1.0, angle);
}

struct VandTypeList {
  int n = 0;
  std::vector<int> s;

  bool distinct_mod_n() const {
    for (std::size_t a = 0; a < s.size(); ++a)
      for (std::size_t b = a + 1; b < s.size(); ++b)
        if (((s[a] - s[b]) % n + n) % n == 0) return false;
    return true;
  }

  long sum() const {
    long total = 0;
    for (int v : s) total += v;
    return total;
  }

  bool sum_nonzero() const { return sum() != 0; }

  void require_shape() const {
    if (n < 1 || static_cast<int>(s.size()) != n)
      throw Error(ErrorKind::LengthMismatch, "type list must hold n integers");
  }
};

/// Entry (p, q) = x_q^{s+p-1}.
inline ComplexMatrix vand(int n, int s, const ComplexVector& x) {
  if (x.size() != n) throw Error(ErrorKind::LengthMismatch, "need n nodes");
  return detail::vandermonde_from(x, s);
}

/// A_i with entry (p, q) = w^{-q(p-1+s_i)}; a member of Vand_{s_i} with nodes w^{-q}.
inline ComplexMatrix unit_root_factor(int n, int s) {
  if (n < 1) throw Error(ErrorKind::ParameterRange, "n must be >= 1");
  ComplexMatrix a(n, n);
  for (int p = 1; p <= n; ++p)
    for (int q = 1; q <= n; ++q) a(p - 1, q - 1) = unit_root_power(n, -static_cast<long>(q) * (p - 1 + s));
  return a;
}

/// B_i in Vand^T_{s_i} with nodes w^p, entry (p, q) = w^{p(s_i+q-1)}; B_i A_i = n I.
inline ComplexMatrix unit_root_cofactor(int n, int s) {
  if (n < 1) throw Error(ErrorKind::ParameterRange, "n must be >= 1");
  ComplexMatrix b(n, n);
  for (int p = 1; p <= n; ++p)
    for (int q = 1; q <= n; ++q) b(p - 1, q - 1) = unit_root_power(n, static_cast<long>(p) * (s + q - 1));
  return b;
}

/// Closed form of xi_{p,i,j} = sum_k (k+s_j-1) w^{(p-i)k} * w^{p(s_j-2)-i(s_j-1)}.
inline Complex xi_closed_form(int n, int p, int i, int s_j) {
  if (p != i) {
    const Complex u = unit_root_power(n, p - i);
    return -static_cast<double>(n) * u / (1.0 - u) *
           unit_root_power(n, static_cast<long>(p - i) * s_j - 2L * p + i);
  }
  return static_cast<double>((2L * s_j + n - 1) * n) / 2.0 * unit_root_power(n, -p);
}

/// Block M_p: rows i (target column), columns j (factor), entries xi_{p,i,j}.
inline ComplexMatrix mp_block(const VandTypeList& s, int p) {
  s.require_shape();
  const int n = s.n;
  if (p < 1 || p > n) throw Error(ErrorKind::ParameterRange, "p must lie in [1, n]");
  ComplexMatrix m(n, n);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) m(i - 1, j - 1) = xi_closed_form(n, p, i, s.s[j - 1]);
  return m;
}

/// Full n^2 x n^2 coefficient matrix of d rho_n at the roots-of-unity base point.
/// Row (p-1)n + (q-1) is target entry (p, q); column (i-1)n + (p-1) is node p of factor i.
inline ComplexMatrix vandermonde_coefficient_matrix(const VandTypeList& s) {
  s.require_shape();
  const int n = s.n;
  ComplexMatrix m = ComplexMatrix::Zero(n * n, n * n);
  for (int p = 1; p <= n; ++p) {
    const ComplexMatrix block = mp_block(s, p);
    for (int q = 1; q <= n; ++q)
      for (int i = 1; i <= n; ++i) m((p - 1) * n + (q - 1), (i - 1) * n + (p - 1)) = block(q - 1, i - 1);
  }
  return m;
}

/// M~_p: rows w^{-r s_j} for r = 0..n-1, with row p mod n replaced by alpha_j w^{-p s_j}.
inline ComplexMatrix m_tilde(const VandTypeList& s, int p, const ComplexVector& alphas) {
  s.require_shape();
  const int n = s.n;
  if (p < 1 || p > n) throw Error(ErrorKind::ParameterRange, "p must lie in [1, n]");
  if (alphas.size() != n) throw Error(ErrorKind::LengthMismatch, "need n alphas");
  const int special = p % n;
  ComplexMatrix m(n, n);
  for (int r = 0; r < n; ++r)
    for (int j = 0; j < n; ++j) {
      const Complex entry = unit_root_power(n, -static_cast<long>(r) * s.s[j]);
      m(r, j) = r == special ? alphas(j) * entry : entry;
    }
  return m;
}

/// Vandermonde determinant prod_{a>b} (x_a - x_b) of the nodes w^{-s_j}.
inline Complex node_vandermonde_determinant(const VandTypeList& s) {
  Complex v = 1.0;
  for (int a = 0; a < s.n; ++a)
    for (int b = 0; b < a; ++b) v *= unit_root_power(s.n, -s.s[a]) - unit_root_power(s.n, -s.s[b]);
  return v;
}

/// (direct determinant of M~_p, (V/n) * sum alpha_j).
inline std::pair<Complex, Complex> det_tilde(const VandTypeList& s, int p, const ComplexVector& alphas) {
  s.require_shape();
  if (!s.distinct_mod_n()) throw Error(ErrorKind::DegeneratePoint, "repeated nodes w^{-s_j}");
  const Complex direct = m_tilde(s, p, alphas).determinant();
  const Complex formula = node_vandermonde_determinant(s) / static_cast<double>(s.n) * alphas.sum();
  return {direct, formula};
}

inline ComplexVector default_alphas(const VandTypeList& s) {
  ComplexVector a(s.n);
  for (int j = 0; j < s.n; ++j) a(j) = static_cast<double>(s.s[j]);
  return a;
}

/// Rank of the coefficient matrix; invalid type lists are flagged in the notes, not raised.
inline DominanceReport vandermonde_dominance(const VandTypeList& s, double rel_tol = 1e-8) {
  s.require_shape();
  const int n = s.n;
  DominanceReport report;
  for (int i = 0; i < n; ++i) report.families.push_back("vandermonde-t*unit-root(" + std::to_string(s.s[i]) + ")");
  report.n = n;
  report.r = n;
  report.target = TargetTag::Full;
  report.trials = 1;
  report.ranks = {numerical_rank(vandermonde_coefficient_matrix(s), rel_tol)};
  report.d_estimate = report.ranks.front();
  report.target_dim = n * n;
  report.dominant = report.d_estimate == report.target_dim;
  report.tolerance = rel_tol;
  report.notes.push_back(std::string("distinct_mod_n=") + (s.distinct_mod_n() ? "true" : "false"));
  report.notes.push_back(std::string("sum_nonzero=") + (s.sum_nonzero() ? "true" : "false"));
  return report;
}

}  // namespace smd
