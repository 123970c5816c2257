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
#include "smd/solver.hpp"

#include <gtest/gtest.h>

namespace smd {
namespace {

FamilySpec fam(FamilyTag tag, int n, int order = 0) { return make_family(FamilyKind::of(tag, order), n); }

ComplexMatrix random_centro(int n, std::uint64_t seed) {
  return sample_point(fam(FamilyTag::Centrosymmetric, n), seed).second;
}

// Properties every returned chain must satisfy, checked from the chain data alone.
void expect_certified(const FactorChain& chain, const ComplexMatrix& target, double tol) {
  ASSERT_EQ(chain.factors.size(), chain.problem.factors.size());
  for (std::size_t i = 0; i < chain.factors.size(); ++i) {
    EXPECT_EQ(chain.factors[i], parameterize(chain.problem.factors[i], chain.params[i]));
    EXPECT_TRUE(is_member(chain.problem.factors[i], chain.factors[i], 10 * tol));
  }
  const double recomputed = (chain_product(chain.factors) - target).norm() / std::max(1.0, target.norm());
  EXPECT_NEAR(recomputed, chain.residual, 1e-14);
  if (chain.converged) EXPECT_LE(recomputed, tol);
}

TEST(FitChain, DiagonalInOneBidiagonalFactor) {
  ComplexMatrix d = ComplexMatrix::Zero(4, 4);
  d.diagonal() << 1, Complex(0, 2), -3, 4;
  const auto problem = uniform_problem(FamilyKind::of(FamilyTag::Bidiagonal), 4, 1, TargetTag::Full);
  const FactorChain chain = fit_chain(d, problem, FitOptions{});
  EXPECT_TRUE(chain.converged);
  EXPECT_LE(chain.residual, 1e-12);
  expect_certified(chain, d, 1e-8);
}

TEST(FitChain, CentrosymmetricWithThreeToeplitzFactorsAtFive) {
  const auto problem = uniform_problem(FamilyKind::of(FamilyTag::SymmetricToeplitz), 5, 3, TargetTag::Centrosymmetric);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const ComplexMatrix target = random_centro(5, seed);
    FitOptions opts;
    opts.seed = seed;
    const FactorChain chain = fit_chain(target, problem, opts);
    EXPECT_TRUE(chain.converged) << chain.residual;
    expect_certified(chain, target, opts.residual_tol);
  }
}

// Two factors cannot reach the 8-dimensional CS_4: the image has dimension 7.
TEST(FitChain, CentrosymmetricWithTwoToeplitzFactorsAtFourStalls) {
  const auto problem = uniform_problem(FamilyKind::of(FamilyTag::SymmetricToeplitz), 4, 2, TargetTag::Centrosymmetric);
  const ComplexMatrix target = random_centro(4, 3);
  const FactorChain chain = fit_chain(target, problem, FitOptions{});
  EXPECT_FALSE(chain.converged);
  expect_certified(chain, target, 1e-8);
}

TEST(FitChain, ThreeSkewFactorsAtEight) {
  const auto problem = uniform_problem(FamilyKind::of(FamilyTag::SkewSymmetric), 8, 3, TargetTag::Full);
  Rng rng(5);
  for (int trial = 0; trial < 3; ++trial) {
    const ComplexMatrix target = complex_gaussian_matrix(rng, 8, 8);
    const FactorChain chain = fit_chain(target, problem, FitOptions{});
    EXPECT_TRUE(chain.converged) << chain.residual;
    expect_certified(chain, target, 1e-8);
  }
}

TEST(FitChain, OddSkewChainsReachSingularTargets) {
  const auto problem = uniform_problem(FamilyKind::of(FamilyTag::SkewSymmetric), 5, 3, TargetTag::DetHypersurface);
  Rng rng(6);
  const ComplexMatrix singular = complex_gaussian_matrix(rng, 5, 4) * complex_gaussian_matrix(rng, 4, 5);
  const FactorChain chain = fit_chain(singular, problem, FitOptions{});
  EXPECT_TRUE(chain.converged) << chain.residual;
  expect_certified(chain, singular, 1e-8);
}

TEST(FitChain, MixedFamilies) {
  // A = Q R with Q orthogonal and R upper triangular.
  Rng rng(7);
  const ComplexMatrix target = complex_gaussian_matrix(rng, 4, 4);
  const DecompositionProblem problem{4, {fam(FamilyTag::Orthogonal, 4), fam(FamilyTag::TriangularUpper, 4)},
                                     TargetSpace{TargetTag::Full, 4}};
  const FactorChain chain = fit_chain(target, problem, FitOptions{});
  EXPECT_TRUE(chain.converged) << chain.residual;
  expect_certified(chain, target, 1e-8);
}

TEST(FitChain, InfeasibleDimensionCount) {
  // The count fails for a generic target...
  const auto problem = uniform_problem(FamilyKind::of(FamilyTag::SkewSymmetric), 3, 2, TargetTag::DetHypersurface);
  try {
    fit_chain(ComplexMatrix::Zero(3, 3), problem, FitOptions{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Infeasible);
  }
  // ...but a target inside one factor family is still reachable.
  const auto one = uniform_problem(FamilyKind::of(FamilyTag::Bidiagonal), 4, 1, TargetTag::Full);
  const ComplexMatrix member = sample_point(one.factors[0], 1).second;
  EXPECT_TRUE(fit_chain(member, one, FitOptions{}).converged);
  EXPECT_THROW(fit_chain(ComplexMatrix::Ones(4, 4), one, FitOptions{}), Error);
}

TEST(FitChain, RejectsBadOptionsAndSizes) {
  const auto problem = uniform_problem(FamilyKind::of(FamilyTag::TriangularUpper), 3, 2, TargetTag::Full);
  FitOptions bad;
  bad.residual_tol = 1.5;
  EXPECT_THROW(fit_chain(ComplexMatrix::Identity(3, 3), problem, bad), Error);
  EXPECT_THROW(fit_chain(ComplexMatrix::Identity(4, 4), problem, FitOptions{}), Error);
}

TEST(FitChain, Deterministic) {
  const auto problem = uniform_problem(FamilyKind::of(FamilyTag::Toeplitz), 4, 3, TargetTag::Full);
  Rng rng(8);
  const ComplexMatrix target = complex_gaussian_matrix(rng, 4, 4);
  FitOptions opts;
  opts.seed = 123;
  const FactorChain a = fit_chain(target, problem, opts), b = fit_chain(target, problem, opts);
  EXPECT_EQ(a.params, b.params);
  EXPECT_EQ(a.residual, b.residual);
  EXPECT_EQ(a.iterations, b.iterations);
}

TEST(FitChain, GaugeStability) {
  const auto problem = uniform_problem(FamilyKind::of(FamilyTag::SkewSymmetric), 6, 4, TargetTag::Full);
  Rng rng(9);
  const ComplexMatrix target = complex_gaussian_matrix(rng, 6, 6);
  const FactorChain base = fit_chain(target, problem, FitOptions{});
  ASSERT_TRUE(base.converged);
  for (Complex lambda : {Complex(2.5, 0), Complex(0, -0.3), Complex(1e3, 1e3)}) {
    std::vector<ComplexVector> start = base.params;
    start[0] *= lambda;
    FitOptions opts;
    opts.restarts = 0;
    const FactorChain scaled = fit_chain(ComplexMatrix(lambda * target), problem, opts, start);
    EXPECT_TRUE(scaled.converged);
    EXPECT_LE((chain_product(scaled.factors) - lambda * chain_product(base.factors)).norm(),
              1e-8 * std::abs(lambda) * target.norm());
  }
}

TEST(LuNoPivot, FactorsAndBreakdown) {
  Rng rng(10);
  const ComplexMatrix a = complex_gaussian_matrix(rng, 6, 6);
  const auto [l, u] = lu_no_pivot(a);
  EXPECT_LT((l * u - a).norm(), 1e-12 * a.norm());
  EXPECT_TRUE(is_member(fam(FamilyTag::TriangularLower, 6), l, 0.0));
  EXPECT_TRUE(is_member(fam(FamilyTag::TriangularUpper, 6), u, 0.0));
  EXPECT_EQ(l.diagonal(), ComplexVector::Ones(6));
}

TEST(DecomposeBidiagonal, UpperBidiagonalInputIsImmediate) {
  const FamilySpec upper = fam(FamilyTag::BidiagonalUpper, 5);
  const ComplexMatrix a = sample_point(upper, 1).second;
  const FactorChain chain = decompose_bidiagonal(a, FitOptions{});
  EXPECT_TRUE(chain.converged);
  EXPECT_EQ(chain.iterations, 0);
  ASSERT_EQ(chain.factors.size(), 10u);
  for (int i = 0; i < 5; ++i) EXPECT_EQ(chain.factors[i], ComplexMatrix::Identity(5, 5));
  expect_certified(chain, a, 1e-8);
}

TEST(DecomposeBidiagonal, RandomTargets) {
  Rng rng(11);
  for (int n : {2, 3, 4, 5, 6}) {
    const ComplexMatrix a = complex_gaussian_matrix(rng, n, n);
    const FactorChain chain = decompose_bidiagonal(a, FitOptions{});
    EXPECT_TRUE(chain.converged) << "n=" << n << " residual " << chain.residual;
    ASSERT_EQ(static_cast<int>(chain.factors.size()), 2 * n);
    for (int i = 0; i < n; ++i) {
      EXPECT_EQ(chain.problem.factors[i].kind.tag, FamilyTag::BidiagonalLower);
      EXPECT_EQ(chain.problem.factors[n + i].kind.tag, FamilyTag::BidiagonalUpper);
    }
    expect_certified(chain, a, 1e-8);
  }
}

TEST(DecomposeBidiagonal, ZeroLeadingEntryIsNonGeneric) {
  Rng rng(12);
  ComplexMatrix a = complex_gaussian_matrix(rng, 4, 4);
  a(0, 0) = 0.0;
  try {
    decompose_bidiagonal(a, FitOptions{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonGeneric);
  }
}

TEST(DecomposeCentrosymmetric, IdentityGivesIdentityFactors) {
  for (int n : {3, 4, 5}) {
    const FactorChain chain = decompose_centrosymmetric(ComplexMatrix::Identity(n, n), false, FitOptions{});
    EXPECT_TRUE(chain.converged);
    for (const auto& f : chain.factors) EXPECT_LT((f - ComplexMatrix::Identity(n, n)).norm(), 1e-14);
  }
}

TEST(DecomposeCentrosymmetric, ToeplitzAndHankelModes) {
  for (int n = 3; n <= 7; ++n) {
    const ComplexMatrix target = random_centro(n, 40 + n);
    EXPECT_EQ(centrosymmetric_chain_length(n), n % 2 ? (n + 1) / 2 : n / 2 + 1);
    const FactorChain toeplitz = decompose_centrosymmetric(target, false, FitOptions{});
    EXPECT_TRUE(toeplitz.converged) << "n=" << n << " residual " << toeplitz.residual;
    expect_certified(toeplitz, target, 1e-8);

    const FactorChain hankel = decompose_centrosymmetric(target, true, FitOptions{});
    EXPECT_TRUE(hankel.converged) << "n=" << n << " residual " << hankel.residual;
    for (const auto& f : hankel.factors) EXPECT_TRUE(is_member(fam(FamilyTag::PersymmetricHankel, n), f, 1e-12));
    expect_certified(hankel, target, 1e-8);
  }
}

TEST(DecomposeCentrosymmetric, RejectsNonMembers) {
  Rng rng(13);
  try {
    decompose_centrosymmetric(complex_gaussian_matrix(rng, 4, 4), false, FitOptions{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonMember);
  }
  EXPECT_THROW(decompose_centrosymmetric(ComplexMatrix::Identity(2, 2), false, FitOptions{}), Error);
}

}  // namespace
}  // namespace smd
