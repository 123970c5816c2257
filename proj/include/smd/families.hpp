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
 * @file families.hpp
 * @brief Registry of structured matrix families.
 *
 * A family W is a subvariety of C^{n x n} described by a parameterization
 * C^{param_dim} -> W. Linear families (banded, triangular, skew, Toeplitz,
 * centrosymmetric, random subspaces) are parameterized by coefficients in a
 * fixed basis, so their tangent frame is that basis at every point. The
 * nonlinear families (orthogonal, companion, generalized Vandermonde) carry
 * point-dependent frames obtained by differentiating the parameterization.
 *
 * Index conventions are 0-based internally; parameter orderings are listed
 * next to each family tag.
 */

#include "smd/core.hpp"

#include <algorithm>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace smd {

enum class FamilyTag {
  Diagonal,                         // diagonal entries
  BidiagonalUpper,                  // KDiagonalUpper(2)
  BidiagonalLower,                  // KDiagonalLower(2)
  Bidiagonal,                       // KDiagonal(2)
  KDiagonal,                        // |i-j| < k, support row-major
  KDiagonalUpper,                   // 0 <= j-i < k
  KDiagonalLower,                   // 0 <= i-j < k
  TriangularUpper,                  // j >= i
  TriangularLower,                  // i >= j
  AntiTriangularTop,                // zero when i+j > n+1 (1-based)
  AntiTriangularBottom,             // zero when i+j < n+1 (1-based)
  Orthogonal,                       // Cayley image of a skew matrix
  SkewSymmetric,                    // (i<j) row-major
  Toeplitz,                         // offset j-i from -(n-1) to n-1
  SymmetricToeplitz,                // coefficients of S_0..S_{n-1}
  PersymmetricHankel,               // coefficients of J*S_0..J*S_{n-1}
  Centrosymmetric,                  // first ceil(n^2/2) row-major entries
  Companion,                        // last column c_1..c_n
  GeneralizedVandermonde,           // nodes x_1..x_n, entry x_q^{s+p-1}
  GeneralizedVandermondeTranspose,  // transpose of the above
  RandomSubspace,                   // coefficients in an orthonormal basis
};

struct FamilyKind {
  FamilyTag tag = FamilyTag::Diagonal;
  /// k for the k-diagonal and subspace families, s for the Vandermonde ones.
  int order = 0;
  /// Spanning matrices of a RandomSubspace, orthonormal in the Frobenius inner product.
  std::shared_ptr<const std::vector<ComplexMatrix>> basis;

  static FamilyKind of(FamilyTag tag, int order = 0) { return FamilyKind{tag, order, nullptr}; }

  bool operator==(const FamilyKind& other) const {
    if (tag != other.tag || order != other.order) return false;
    if (tag != FamilyTag::RandomSubspace) return true;
    if (basis == other.basis) return true;
    if (!basis || !other.basis || basis->size() != other.basis->size()) return false;
    for (std::size_t i = 0; i < basis->size(); ++i)
      if ((*basis)[i] != (*other.basis)[i]) return false;
    return true;
  }
};

struct FamilySpec {
  FamilyKind kind;
  int n = 0;
  int param_dim = 0;
};

struct TangentFrame {
  ComplexMatrix base_point;
  std::vector<ComplexMatrix> basis;
};

namespace detail {

inline bool is_linear(FamilyTag tag) {
  switch (tag) {
    case FamilyTag::Orthogonal:
    case FamilyTag::Companion:
    case FamilyTag::GeneralizedVandermonde:
    case FamilyTag::GeneralizedVandermondeTranspose:
      return false;
    default:
      return true;
  }
}

/// Band/shape predicates for the zero-pattern families (0-based i, j).
inline std::optional<bool> in_support(const FamilyKind& kind, int n, int i, int j) {
  const int k = kind.order;
  switch (kind.tag) {
    case FamilyTag::Diagonal: return i == j;
    case FamilyTag::BidiagonalUpper: return j - i >= 0 && j - i < 2;
    case FamilyTag::BidiagonalLower: return i - j >= 0 && i - j < 2;
    case FamilyTag::Bidiagonal: return std::abs(i - j) < 2;
    case FamilyTag::KDiagonal: return std::abs(i - j) < k;
    case FamilyTag::KDiagonalUpper: return j - i >= 0 && j - i < k;
    case FamilyTag::KDiagonalLower: return i - j >= 0 && i - j < k;
    case FamilyTag::TriangularUpper: return j >= i;
    case FamilyTag::TriangularLower: return i >= j;
    case FamilyTag::AntiTriangularTop: return i + j <= n - 1;
    case FamilyTag::AntiTriangularBottom: return i + j >= n - 1;
    default: return std::nullopt;
  }
}

inline bool is_pattern(FamilyTag tag) {
  return in_support(FamilyKind::of(tag, 1), 2, 0, 0).has_value();
}

inline std::vector<std::pair<int, int>> support(const FamilyKind& kind, int n) {
  std::vector<std::pair<int, int>> cells;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (*in_support(kind, n, i, j)) cells.emplace_back(i, j);
  return cells;
}

inline int centro_dim(int n) { return (n * n + 1) / 2; }

inline void require_length(const FamilySpec& spec, const ComplexVector& params) {
  if (params.size() != spec.param_dim)
    throw Error(ErrorKind::LengthMismatch, "expected " + std::to_string(spec.param_dim) +
                                               " parameters, got " + std::to_string(params.size()));
}

inline ComplexMatrix skew_from(const ComplexVector& params, int n) {
  ComplexMatrix k = ComplexMatrix::Zero(n, n);
  Eigen::Index idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      k(i, j) = params(idx);
      k(j, i) = -params(idx);
      ++idx;
    }
  return k;
}

inline ComplexMatrix symmetric_toeplitz_from(const ComplexVector& params, int n) {
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = params(std::abs(i - j));
  return m;
}

/// Integer power that stays exact for small exponents and accepts negative ones.
inline Complex ipow(Complex x, int e) {
  if (e == 0) return 1.0;
  Complex base = e < 0 ? Complex(1.0) / x : x;
  unsigned u = static_cast<unsigned>(e < 0 ? -static_cast<long>(e) : e);
  Complex out = 1.0;
  while (u) {
    if (u & 1U) out *= base;
    base *= base;
    u >>= 1U;
  }
  return out;
}

inline void check_vandermonde_nodes(const ComplexVector& x, int s) {
  const int n = static_cast<int>(x.size());
  for (int q = 0; q < n; ++q) {
    if (x(q) == Complex(0.0) && s < 0)
      throw Error(ErrorKind::DegeneratePoint, "zero Vandermonde node with negative exponent");
  }
}

inline ComplexMatrix vandermonde_from(const ComplexVector& x, int s) {
  const int n = static_cast<int>(x.size());
  check_vandermonde_nodes(x, s);
  ComplexMatrix m(n, n);
  for (int q = 0; q < n; ++q)
    for (int p = 0; p < n; ++p) m(p, q) = ipow(x(q), s + p);
  return m;
}

inline ComplexMatrix cayley(const ComplexMatrix& k) {
  const Eigen::Index n = k.rows();
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  Eigen::FullPivLU<ComplexMatrix> lu(id - 0.5 * k);
  lu.setThreshold(1e-13);
  if (!lu.isInvertible()) throw Error(ErrorKind::DegeneratePoint, "I - K/2 is singular");
  // (I + K/2)(I - K/2)^{-1}; the two factors commute.
  return lu.solve(id + 0.5 * k);
}

}  // namespace detail

/// Intrinsic dimension of a family; throws ParameterRange for bad n, k or bases.
inline int family_dimension(const FamilyKind& kind, int n) {
  if (n < 1) throw Error(ErrorKind::ParameterRange, "n must be >= 1");
  const int k = kind.order;
  auto require_k = [&](int hi) {
    if (k < 1 || k > hi)
      throw Error(ErrorKind::ParameterRange,
                  "k = " + std::to_string(k) + " outside [1, " + std::to_string(hi) + "]");
  };
  switch (kind.tag) {
    case FamilyTag::Diagonal: return n;
    case FamilyTag::BidiagonalUpper:
    case FamilyTag::BidiagonalLower: return 2 * n - 1;
    case FamilyTag::Bidiagonal: return n == 1 ? 1 : 3 * n - 2;
    case FamilyTag::KDiagonal: {
      require_k(n);
      int dim = n;
      for (int d = 1; d < k; ++d) dim += 2 * (n - d);
      return dim;
    }
    case FamilyTag::KDiagonalUpper:
    case FamilyTag::KDiagonalLower: {
      require_k(n);
      int dim = 0;
      for (int d = 0; d < k; ++d) dim += n - d;
      return dim;
    }
    case FamilyTag::TriangularUpper:
    case FamilyTag::TriangularLower:
    case FamilyTag::AntiTriangularTop:
    case FamilyTag::AntiTriangularBottom: return n * (n + 1) / 2;
    case FamilyTag::Orthogonal:
    case FamilyTag::SkewSymmetric: return n * (n - 1) / 2;
    case FamilyTag::Toeplitz: return 2 * n - 1;
    case FamilyTag::SymmetricToeplitz:
    case FamilyTag::PersymmetricHankel: return n;
    case FamilyTag::Centrosymmetric: return detail::centro_dim(n);
    case FamilyTag::Companion:
    case FamilyTag::GeneralizedVandermonde:
    case FamilyTag::GeneralizedVandermondeTranspose: return n;
    case FamilyTag::RandomSubspace: {
      require_k(n * n);
      if (!kind.basis || static_cast<int>(kind.basis->size()) != k)
        throw Error(ErrorKind::ParameterRange, "subspace basis must hold k matrices");
      for (const auto& b : *kind.basis)
        if (b.rows() != n || b.cols() != n)
          throw Error(ErrorKind::SizeMismatch, "subspace basis matrix has the wrong size");
      return k;
    }
  }
  throw Error(ErrorKind::ParameterRange, "unknown family");
}

inline FamilySpec make_family(const FamilyKind& kind, int n) {
  return FamilySpec{kind, n, family_dimension(kind, n)};
}

inline bool is_linear_family(const FamilySpec& spec) { return detail::is_linear(spec.kind.tag); }

/// True when the identity matrix is a member (the families usable in identity padding).
inline bool contains_identity(const FamilySpec& spec) {
  switch (spec.kind.tag) {
    case FamilyTag::Diagonal:
    case FamilyTag::BidiagonalUpper:
    case FamilyTag::BidiagonalLower:
    case FamilyTag::Bidiagonal:
    case FamilyTag::KDiagonal:
    case FamilyTag::KDiagonalUpper:
    case FamilyTag::KDiagonalLower:
    case FamilyTag::TriangularUpper:
    case FamilyTag::TriangularLower:
    case FamilyTag::Orthogonal:
    case FamilyTag::Toeplitz:
    case FamilyTag::SymmetricToeplitz:
    case FamilyTag::Centrosymmetric: return true;
    case FamilyTag::AntiTriangularTop:
    case FamilyTag::AntiTriangularBottom:
    case FamilyTag::SkewSymmetric:
    case FamilyTag::PersymmetricHankel:
    case FamilyTag::Companion:
    case FamilyTag::GeneralizedVandermonde:
    case FamilyTag::GeneralizedVandermondeTranspose:
    case FamilyTag::RandomSubspace: return false;
  }
  return false;
}

inline ComplexMatrix parameterize(const FamilySpec& spec, const ComplexVector& params) {
  detail::require_length(spec, params);
  const int n = spec.n;
  const auto& kind = spec.kind;
  if (detail::is_pattern(kind.tag)) {
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    Eigen::Index idx = 0;
    for (const auto& [i, j] : detail::support(kind, n)) m(i, j) = params(idx++);
    return m;
  }
  switch (kind.tag) {
    case FamilyTag::SkewSymmetric: return detail::skew_from(params, n);
    case FamilyTag::Orthogonal: return detail::cayley(detail::skew_from(params, n));
    case FamilyTag::Toeplitz: {
      ComplexMatrix m(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = params(j - i + n - 1);
      return m;
    }
    case FamilyTag::SymmetricToeplitz: return detail::symmetric_toeplitz_from(params, n);
    case FamilyTag::PersymmetricHankel:
      return exchange_matrix(n) * detail::symmetric_toeplitz_from(params, n);
    case FamilyTag::Centrosymmetric: {
      ComplexMatrix m(n, n);
      const int nn = n * n;
      for (int idx = 0; idx < spec.param_dim; ++idx) {
        const int mirror = nn - 1 - idx;
        m(idx / n, idx % n) = params(idx);
        m(mirror / n, mirror % n) = params(idx);
      }
      return m;
    }
    case FamilyTag::Companion: {
      ComplexMatrix m = ComplexMatrix::Zero(n, n);
      for (int i = 1; i < n; ++i) m(i, i - 1) = 1.0;
      m.col(n - 1) = params;
      return m;
    }
    case FamilyTag::GeneralizedVandermonde: return detail::vandermonde_from(params, kind.order);
    case FamilyTag::GeneralizedVandermondeTranspose:
      return detail::vandermonde_from(params, kind.order).transpose();
    case FamilyTag::RandomSubspace: {
      ComplexMatrix m = ComplexMatrix::Zero(n, n);
      for (int i = 0; i < spec.param_dim; ++i) m += params(i) * (*kind.basis)[i];
      return m;
    }
    default: break;
  }
  throw Error(ErrorKind::ParameterRange, "unknown family");
}

/// Basis of a linear family, the images of the unit parameter vectors.
inline std::vector<ComplexMatrix> linear_basis(const FamilySpec& spec) {
  if (!is_linear_family(spec)) throw Error(ErrorKind::ParameterRange, "family is not linear");
  if (spec.kind.tag == FamilyTag::RandomSubspace) return *spec.kind.basis;
  std::vector<ComplexMatrix> out;
  out.reserve(spec.param_dim);
  for (int i = 0; i < spec.param_dim; ++i)
    out.push_back(parameterize(spec, ComplexVector::Unit(spec.param_dim, i)));
  return out;
}

/// Tangent frame at the point parameterize(spec, params).
inline TangentFrame tangent_basis(const FamilySpec& spec, const ComplexVector& params) {
  TangentFrame frame;
  frame.base_point = parameterize(spec, params);
  const int n = spec.n;
  switch (spec.kind.tag) {
    case FamilyTag::Orthogonal: {
      // d/dK of (I + K/2)(I - K/2)^{-1} is (1/2)(I + Q) dK (I - K/2)^{-1}.
      const ComplexMatrix k = detail::skew_from(params, n);
      const ComplexMatrix id = ComplexMatrix::Identity(n, n);
      const ComplexMatrix right = (id - 0.5 * k).inverse();
      const ComplexMatrix left = 0.5 * (id + frame.base_point);
      for (int i = 0; i < spec.param_dim; ++i)
        frame.basis.push_back(left * detail::skew_from(ComplexVector::Unit(spec.param_dim, i), n) * right);
      break;
    }
    case FamilyTag::Companion:
      for (int p = 0; p < n; ++p) {
        ComplexMatrix e = ComplexMatrix::Zero(n, n);
        e(p, n - 1) = 1.0;
        frame.basis.push_back(std::move(e));
      }
      break;
    case FamilyTag::GeneralizedVandermonde:
    case FamilyTag::GeneralizedVandermondeTranspose: {
      const int s = spec.kind.order;
      const double scale = std::max(1.0, params.cwiseAbs().maxCoeff());
      for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
          if (std::abs(params(a) - params(b)) <= 1e-12 * scale)
            throw Error(ErrorKind::DegeneratePoint, "repeated Vandermonde nodes");
      for (int q = 0; q < n; ++q) {
        ComplexMatrix d = ComplexMatrix::Zero(n, n);
        for (int p = 0; p < n; ++p) {
          const int e = s + p;
          d(p, q) = e == 0 ? Complex(0.0) : static_cast<double>(e) * detail::ipow(params(q), e - 1);
        }
        if (d.norm() == 0.0) throw Error(ErrorKind::DegeneratePoint, "vanishing Vandermonde tangent");
        frame.basis.push_back(spec.kind.tag == FamilyTag::GeneralizedVandermonde ? d : ComplexMatrix(d.transpose()));
      }
      break;
    }
    default:
      frame.basis = linear_basis(spec);
      break;
  }
  return frame;
}

/// Size of the violated defining constraints; 0 means an exact member.
inline double membership_defect(const FamilySpec& spec, const ComplexMatrix& m) {
  const int n = spec.n;
  if (m.rows() != n || m.cols() != n) return std::numeric_limits<double>::infinity();
  const auto& kind = spec.kind;
  if (detail::is_pattern(kind.tag)) {
    double sq = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (!*detail::in_support(kind, n, i, j)) sq += std::norm(m(i, j));
    return std::sqrt(sq);
  }
  auto symmetric_toeplitz_defect = [n](const ComplexMatrix& t) {
    double sq = (t - t.transpose()).squaredNorm();
    for (int i = 0; i + 1 < n; ++i)
      for (int j = 0; j + 1 < n; ++j) sq += std::norm(t(i, j) - t(i + 1, j + 1));
    return std::sqrt(sq);
  };
  switch (kind.tag) {
    case FamilyTag::SkewSymmetric: return (m + m.transpose()).norm();
    case FamilyTag::Orthogonal:
      return (m.transpose() * m - ComplexMatrix::Identity(n, n)).norm();
    case FamilyTag::Toeplitz: {
      double sq = 0.0;
      for (int i = 0; i + 1 < n; ++i)
        for (int j = 0; j + 1 < n; ++j) sq += std::norm(m(i, j) - m(i + 1, j + 1));
      return std::sqrt(sq);
    }
    case FamilyTag::SymmetricToeplitz: return symmetric_toeplitz_defect(m);
    case FamilyTag::PersymmetricHankel: return symmetric_toeplitz_defect(m.colwise().reverse());
    case FamilyTag::Centrosymmetric: return (m - m.reverse()).norm();
    case FamilyTag::Companion: {
      ComplexMatrix expect = ComplexMatrix::Zero(n, n);
      for (int i = 1; i < n; ++i) expect(i, i - 1) = 1.0;
      expect.col(n - 1) = m.col(n - 1);
      return (m - expect).norm();
    }
    case FamilyTag::RandomSubspace: {
      ComplexMatrix frame(n * n, spec.param_dim);
      for (int i = 0; i < spec.param_dim; ++i) frame.col(i) = row_major((*kind.basis)[i]);
      const ComplexVector v = row_major(m);
      // Basis is orthonormal, so the projection is frame * frame^H v.
      return (v - frame * (frame.adjoint() * v)).norm();
    }
    default: break;
  }
  return std::numeric_limits<double>::infinity();
}

namespace detail {

/// Nodes read off a (possibly transposed) Vandermonde candidate; nullopt when no fit exists.
inline std::optional<ComplexVector> read_vandermonde_nodes(const ComplexMatrix& v, int s) {
  const int n = static_cast<int>(v.rows());
  ComplexVector x(n);
  for (int q = 0; q < n; ++q) {
    if (n == 1) {
      const Complex a = v(0, 0);
      if (s == 0) {
        x(q) = 1.0;
      } else if (a == Complex(0.0)) {
        if (s < 0) return std::nullopt;
        x(q) = 0.0;
      } else {
        x(q) = std::pow(a, 1.0 / s);
      }
      continue;
    }
    if (v(0, q) != Complex(0.0)) {
      x(q) = v(1, q) / v(0, q);
    } else {
      if (s <= 0) return std::nullopt;
      x(q) = 0.0;
    }
    if (x(q) == Complex(0.0) && s < 0) return std::nullopt;
  }
  return x;
}

}  // namespace detail

inline bool is_member(const FamilySpec& spec, const ComplexMatrix& m, double tol) {
  const int n = spec.n;
  if (m.rows() != n || m.cols() != n || !all_finite(m)) return false;
  const double bound = tol * (1.0 + m.norm());
  const auto tag = spec.kind.tag;
  if (tag == FamilyTag::GeneralizedVandermonde || tag == FamilyTag::GeneralizedVandermondeTranspose) {
    const ComplexMatrix v = tag == FamilyTag::GeneralizedVandermonde ? m : ComplexMatrix(m.transpose());
    const auto nodes = detail::read_vandermonde_nodes(v, spec.kind.order);
    if (!nodes) return false;
    const ComplexMatrix fit = detail::vandermonde_from(*nodes, spec.kind.order);
    for (int q = 0; q < n; ++q)
      if ((v.col(q) - fit.col(q)).norm() > tol * (1.0 + v.col(q).norm())) return false;
    return true;
  }
  return membership_defect(spec, m) <= bound;
}

/// Parameters of a member matrix (the inverse of parameterize on its image).
inline ComplexVector params_of(const FamilySpec& spec, const ComplexMatrix& m, double tol = 1e-10) {
  if (!is_member(spec, m, tol)) throw Error(ErrorKind::NonMember, "matrix is not a member of the family");
  const int n = spec.n;
  switch (spec.kind.tag) {
    case FamilyTag::Orthogonal: {
      const ComplexMatrix id = ComplexMatrix::Identity(n, n);
      Eigen::FullPivLU<ComplexMatrix> lu((m + id).transpose());
      if (!lu.isInvertible()) throw Error(ErrorKind::DegeneratePoint, "Q + I is singular");
      // K = 2 (Q - I)(Q + I)^{-1}, solved as a transposed system.
      const ComplexMatrix k = 2.0 * ComplexMatrix(lu.solve((m - id).transpose()).transpose());
      ComplexVector p(spec.param_dim);
      Eigen::Index idx = 0;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) p(idx++) = k(i, j);
      return p;
    }
    case FamilyTag::Companion: return m.col(n - 1);
    case FamilyTag::GeneralizedVandermonde:
      return *detail::read_vandermonde_nodes(m, spec.kind.order);
    case FamilyTag::GeneralizedVandermondeTranspose:
      return *detail::read_vandermonde_nodes(m.transpose(), spec.kind.order);
    default: {
      const auto basis = linear_basis(spec);
      ComplexMatrix frame(n * n, spec.param_dim);
      for (int i = 0; i < spec.param_dim; ++i) frame.col(i) = row_major(basis[i]);
      return frame.colPivHouseholderQr().solve(row_major(m));
    }
  }
}

/// Tangent frame at a member matrix.
inline TangentFrame tangent_basis(const FamilySpec& spec, const ComplexMatrix& point) {
  return tangent_basis(spec, params_of(spec, point));
}

/// Parameters drawn i.i.d. standard complex Gaussian from an existing engine.
inline std::pair<ComplexVector, ComplexMatrix> sample_point(const FamilySpec& spec, Rng& rng) {
  for (;;) {
    ComplexVector params = complex_gaussian_vector(rng, spec.param_dim);
    try {
      ComplexMatrix m = parameterize(spec, params);
      return {std::move(params), std::move(m)};
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DegeneratePoint) throw;
    }
  }
}

inline std::pair<ComplexVector, ComplexMatrix> sample_point(const FamilySpec& spec, std::uint64_t seed) {
  Rng rng(seed);
  return sample_point(spec, rng);
}

/// A generic k-dimensional subspace of C^{n x n}, Frobenius-orthonormal basis.
inline FamilyKind random_subspace(int n, int k, std::uint64_t seed) {
  if (n < 1 || k < 1 || k > n * n)
    throw Error(ErrorKind::ParameterRange, "random subspace needs 1 <= k <= n^2");
  Rng rng(seed);
  for (;;) {
    const ComplexMatrix g = complex_gaussian_matrix(rng, n * n, k);
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    const ComplexMatrix r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    const double rmax = r.diagonal().cwiseAbs().maxCoeff();
    if (r.diagonal().cwiseAbs().minCoeff() <= 1e-10 * rmax) continue;
    const ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n * n, k);
    auto basis = std::make_shared<std::vector<ComplexMatrix>>();
    for (int i = 0; i < k; ++i) basis->push_back(from_row_major(q.col(i), n));
    return FamilyKind{FamilyTag::RandomSubspace, k, std::move(basis)};
  }
}

inline std::string family_name(const FamilyKind& kind) {
  switch (kind.tag) {
    case FamilyTag::Diagonal: return "diagonal";
    case FamilyTag::BidiagonalUpper: return "bidiagonal-upper";
    case FamilyTag::BidiagonalLower: return "bidiagonal-lower";
    case FamilyTag::Bidiagonal: return "bidiagonal";
    case FamilyTag::KDiagonal: return "kdiagonal";
    case FamilyTag::KDiagonalUpper: return "kdiagonal-upper";
    case FamilyTag::KDiagonalLower: return "kdiagonal-lower";
    case FamilyTag::TriangularUpper: return "upper";
    case FamilyTag::TriangularLower: return "lower";
    case FamilyTag::AntiTriangularTop: return "top";
    case FamilyTag::AntiTriangularBottom: return "bottom";
    case FamilyTag::Orthogonal: return "orthogonal";
    case FamilyTag::SkewSymmetric: return "skew";
    case FamilyTag::Toeplitz: return "toeplitz";
    case FamilyTag::SymmetricToeplitz: return "toeplitz-sym";
    case FamilyTag::PersymmetricHankel: return "hankel-persym";
    case FamilyTag::Centrosymmetric: return "centro";
    case FamilyTag::Companion: return "companion";
    case FamilyTag::GeneralizedVandermonde: return "vandermonde";
    case FamilyTag::GeneralizedVandermondeTranspose: return "vandermonde-t";
    case FamilyTag::RandomSubspace: return "subspace";
  }
  return "unknown";
}

inline bool family_uses_order(FamilyTag tag) {
  switch (tag) {
    case FamilyTag::KDiagonal:
    case FamilyTag::KDiagonalUpper:
    case FamilyTag::KDiagonalLower:
    case FamilyTag::GeneralizedVandermonde:
    case FamilyTag::GeneralizedVandermondeTranspose:
    case FamilyTag::RandomSubspace: return true;
    default: return false;
  }
}

/// Inverse of family_name; the subspace family needs its basis attached separately.
inline FamilyTag parse_family_tag(const std::string& name) {
  static const std::pair<const char*, FamilyTag> table[] = {
      {"diagonal", FamilyTag::Diagonal},
      {"bidiagonal-upper", FamilyTag::BidiagonalUpper},
      {"bidiagonal-lower", FamilyTag::BidiagonalLower},
      {"bidiagonal", FamilyTag::Bidiagonal},
      {"kdiagonal", FamilyTag::KDiagonal},
      {"kdiagonal-upper", FamilyTag::KDiagonalUpper},
      {"kdiagonal-lower", FamilyTag::KDiagonalLower},
      {"upper", FamilyTag::TriangularUpper},
      {"lower", FamilyTag::TriangularLower},
      {"top", FamilyTag::AntiTriangularTop},
      {"bottom", FamilyTag::AntiTriangularBottom},
      {"orthogonal", FamilyTag::Orthogonal},
      {"skew", FamilyTag::SkewSymmetric},
      {"toeplitz", FamilyTag::Toeplitz},
      {"toeplitz-sym", FamilyTag::SymmetricToeplitz},
      {"hankel-persym", FamilyTag::PersymmetricHankel},
      {"centro", FamilyTag::Centrosymmetric},
      {"companion", FamilyTag::Companion},
      {"vandermonde", FamilyTag::GeneralizedVandermonde},
      {"vandermonde-t", FamilyTag::GeneralizedVandermondeTranspose},
      {"subspace", FamilyTag::RandomSubspace},
  };
  for (const auto& [key, tag] : table)
    if (name == key) return tag;
  throw Error(ErrorKind::Parse, "unknown family '" + name + "'");
}

}  // namespace smd
