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
// Walks through the main entry points: a dominance check, an exact companion
// factorization and a numerical skew-symmetric fit.

#include "smd/smd.hpp"

#include <iostream>

int main() {
  using namespace smd;

  // Three skew-symmetric 8x8 factors: the Jacobian of the product map has full rank.
  const auto skew3 = uniform_problem(FamilyKind::of(FamilyTag::SkewSymmetric), 8, 3, TargetTag::Full);
  const auto report = estimate_image_dimension(skew3, 5, 1e-8, 0);
  std::cout << "skew n=8 r=3: rank " << report.d_estimate << " of " << report.target_dim << "\n";

  // Any generic matrix is a product of n companion matrices, computed exactly.
  Rng rng(1);
  const ComplexMatrix a = complex_gaussian_matrix(rng, 5, 5);
  const auto result = decompose_companion(a);
  if (result.status == CompanionStatus::Unique) {
    const auto factors = companion_factors(*result.coefficients);
    const double error = (chain_product(factors) - a).norm() / a.norm();
    std::cout << "companion n=5: relative error " << error << "\n";
  }

  // Numerical fit of the same kind of target with three skew factors.
  const ComplexMatrix target = complex_gaussian_matrix(rng, 8, 8);
  const FactorChain chain = fit_chain(target, skew3, FitOptions{});
  std::cout << "skew fit: residual " << chain.residual << " after " << chain.iterations << " iterations\n";
  std::cout << chain_to_json(chain)["problem"].dump() << "\n";
  return chain.converged ? 0 : 1;
}
