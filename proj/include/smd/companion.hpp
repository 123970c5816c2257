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
 * @file companion.hpp
 * @brief Exact factorization A = C_1 ... C_n into companion matrices.
 *
 * Column q of A satisfies
 *
 *   a_{p,q} = sum_{j=1}^{q-1} a_{p,q-j} c_{q,n-j+1} + c_{q,p-q+1},
 *
 * with c_{q,m} = 0 for m <= 0. Rows p < q only involve c_{q,n-q+2..n} and form a
 * (q-1) x (q-1) system whose matrix is the leading block of A with its columns
 * reversed; rows p >= q then give c_{q,1..n-q+1} directly. The factorization
 * exists and is unique exactly when every such system is nonsingular.
 */

#include "smd/core.hpp"

#include <Eigen/SVD>

#include <optional>
#include <vector>

namespace smd {

struct CompanionCoefficients {
  int n = 0;
  /// columns[q] is the last column of the (q+1)-th factor.
  std::vector<ComplexVector> columns;
};

enum class CompanionStatus { Unique, NoSolution, NonUnique };

inline const char* to_string(CompanionStatus status) {
  switch (status) {
    case CompanionStatus::Unique: return "unique";
    case CompanionStatus::NoSolution: return "no-solution";
    case CompanionStatus::NonUnique: return "non-unique";
  }
  return "unknown";
}

struct CompanionResult {
  CompanionStatus status = CompanionStatus::NoSolution;
  std::optional<CompanionCoefficients> coefficients;
  /// 1-based column q whose subsystem was singular.
  std::optional<int> failed_column;
};

/// Ones on the subdiagonal, c in the last column, zeros elsewhere.
inline ComplexMatrix companion_matrix(const ComplexVector& c) {
  const Eigen::Index n = c.size();
  if (n < 1) throw Error(ErrorKind::ParameterRange, "companion matrix needs n >= 1");
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 1; i < n; ++i) m(i, i - 1) = 1.0;
  m.col(n - 1) = c;
  return m;
}

inline std::vector<ComplexMatrix> companion_factors(const CompanionCoefficients& coeffs) {
  std::vector<ComplexMatrix> out;
  out.reserve(coeffs.columns.size());
  for (const auto& c : coeffs.columns) out.push_back(companion_matrix(c));
  return out;
}

inline CompanionResult decompose_companion(const ComplexMatrix& a, double pivot_tol = 1e-10) {
  require_square(a, "companion input");
  if (!(pivot_tol > 0.0)) throw Error(ErrorKind::ParameterRange, "pivot_tol must be positive");
  const int n = static_cast<int>(a.rows());
  const double scale = a.norm();
  CompanionCoefficients coeffs{n, {}};

  for (int q = 1; q <= n; ++q) {
    const int m = q - 1;
    ComplexVector c = ComplexVector::Zero(n);
    // tail(j-1) holds c_{q,n-j+1}, j = 1..m
    ComplexVector tail = ComplexVector::Zero(m);
    if (m > 0) {
      ComplexMatrix g(m, m);
      for (int p = 0; p < m; ++p)
        for (int j = 1; j <= m; ++j) g(p, j - 1) = a(p, q - 1 - j);
      const ComplexVector rhs = a.col(q - 1).head(m);
      Eigen::JacobiSVD<ComplexMatrix> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const auto& sv = svd.singularValues();
      if (!(sv(m - 1) > pivot_tol * sv(0))) {
        svd.setThreshold(pivot_tol);
        const ComplexVector x = svd.solve(rhs);
        const double residual = (g * x - rhs).norm();
        CompanionResult failed;
        failed.status = residual <= pivot_tol * std::max(1.0, scale) ? CompanionStatus::NonUnique
                                                                     : CompanionStatus::NoSolution;
        failed.failed_column = q;
        return failed;
      }
      tail = svd.solve(rhs);
      for (int j = 1; j <= m; ++j) c(n - j) = tail(j - 1);
    }
    for (int p = q; p <= n; ++p) {
      Complex value = a(p - 1, q - 1);
      for (int j = 1; j <= m; ++j) value -= a(p - 1, q - 1 - j) * tail(j - 1);
      c(p - q) = value;
    }
    coeffs.columns.push_back(std::move(c));
  }
  return CompanionResult{CompanionStatus::Unique, std::move(coeffs), std::nullopt};
}

/// X^k = C_1 ... C_k from the closed column recurrence, without matrix products.
inline ComplexMatrix reconstruct_prefix(const CompanionCoefficients& coeffs, int k) {
  const int n = coeffs.n;
  if (k < 1 || k > n || static_cast<int>(coeffs.columns.size()) != n)
    throw Error(ErrorKind::ParameterRange, "k must lie in [1, n]");
  ComplexMatrix x = ComplexMatrix::Zero(n, n);
  for (int q = 1; q <= n; ++q) {
    if (q < n - k + 1) {
      if (q + k <= n) x(q + k - 1, q - 1) = 1.0;
      continue;
    }
    const int i = q + k - n;
    const ComplexVector& c = coeffs.columns[i - 1];
    for (int p = 1; p <= n; ++p) {
      Complex value = p - i + 1 >= 1 ? c(p - i) : Complex(0.0);
      for (int j = 1; j <= i - 1; ++j) value += x(p - 1, q - j - 1) * c(n - j);
      x(p - 1, q - 1) = value;
    }
  }
  return x;
}

}  // namespace smd
