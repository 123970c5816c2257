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

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace smd {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Rng = std::mt19937_64;

enum class ErrorKind {
  ParameterRange,
  LengthMismatch,
  SizeMismatch,
  DegeneratePoint,
  NonMember,
  Infeasible,
  NonGeneric,
  NotConverged,
  Parse,
  NonSquare,
  Io,
  Validation,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParameterRange: return "parameter-range";
    case ErrorKind::LengthMismatch: return "length-mismatch";
    case ErrorKind::SizeMismatch: return "size-mismatch";
    case ErrorKind::DegeneratePoint: return "degenerate-point";
    case ErrorKind::NonMember: return "non-member";
    case ErrorKind::Infeasible: return "infeasible";
    case ErrorKind::NonGeneric: return "non-generic";
    case ErrorKind::NotConverged: return "not-converged";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::NonSquare: return "non-square";
    case ErrorKind::Io: return "io";
    case ErrorKind::Validation: return "validation";
  }
  return "unknown";
}

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Standard complex Gaussian: real and imaginary parts independent N(0, 1).
inline Complex complex_gaussian(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double re = normal(rng);
  const double im = normal(rng);
  return {re, im};
}

inline ComplexVector complex_gaussian_vector(Rng& rng, Eigen::Index len) {
  ComplexVector v(len);
  for (Eigen::Index i = 0; i < len; ++i) v(i) = complex_gaussian(rng);
  return v;
}

inline ComplexMatrix complex_gaussian_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = complex_gaussian(rng);
  return m;
}

/// Anti-identity J with ones on the anti-diagonal.
inline ComplexMatrix exchange_matrix(Eigen::Index n) {
  ComplexMatrix j = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) j(i, n - 1 - i) = 1.0;
  return j;
}

/// Row-major flattening, the coordinate convention used for C^{n x n}.
inline ComplexVector row_major(const ComplexMatrix& m) {
  ComplexVector v(m.size());
  Eigen::Index idx = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) v(idx++) = m(i, j);
  return v;
}

inline ComplexMatrix from_row_major(const ComplexVector& v, Eigen::Index n) {
  ComplexMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = v(i * n + j);
  return m;
}

inline bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const Complex z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

/// Checks the ComplexMatrix invariants (square, finite entries).
inline void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw Error(ErrorKind::NonSquare, std::string(what) + " must be a nonempty square matrix");
  if (!all_finite(m)) throw Error(ErrorKind::Validation, std::string(what) + " has non-finite entries");
}

inline long binomial2(long n) { return n * (n - 1) / 2; }

inline long ceil_div(long a, long b) { return (a + b - 1) / b; }

}  // namespace smd
