// Copyright 2026 The pomest Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>

#include "pomest/errors.hpp"
#include "pomest/fock.hpp"
#include "pomest/relations.hpp"

namespace pomest {
namespace {

PomPtr grid(double radius, Index n, Index fock_dim = 40) {
  GridSpec g;
  g.radius = radius;
  g.points_per_axis = n;
  return coherent_pom(fock_dim, g);
}

TEST(Heterodyne, CoherentStateProducts) {
  PomPtr pom = grid(7, 81);
  DensityOperator rho = DensityOperator::pure(fock::coherent_state(Complex(1, -0.5), 40));
  HeterodyneAnalysis an = analyze_heterodyne(rho, pom);
  EXPECT_NEAR(an.d1 * an.d2, 0.125, 1e-4);
  EXPECT_NEAR(an.noinfo_d1 * an.noinfo_d2, 0.5, 1e-4);
  // Q is Gaussian with variance 1/2 per axis
  EXPECT_NEAR(an.cov_q(0, 0), 0.5, 1e-4);
  EXPECT_NEAR(an.fisher(0, 0), 2, 1e-3);
  EXPECT_NEAR(an.eps1 * an.eps1 + an.eps2 * an.eps2, 0.25, 1e-4);
  for (const auto& r : heterodyne_suite(rho, pom)) EXPECT_TRUE(r.passed) << to_string(r.id) << " " << r.label;
}

TEST(Heterodyne, CoherentOptimalEstimateIsMidpoint) {
  const Complex beta(0.8, 0.3);
  PomPtr pom = grid(7, 81);
  DensityOperator rho = DensityOperator::pure(fock::coherent_state(beta, 40));
  Estimator f1 = optimal_estimate(fock::quadrature_x1(40), pom, rho);
  Estimator f2 = optimal_estimate(fock::quadrature_x2(40), pom, rho);
  double worst = 0;
  for (std::size_t k = 0; k < pom->size(); ++k) {
    const auto& v = (*pom)[k].value;
    if (std::hypot(v[0], v[1]) > 3) continue;
    worst = std::max(worst, std::abs(f1[k] - (v[0] + beta.real()) / 2));
    worst = std::max(worst, std::abs(f2[k] - (v[1] + beta.imag()) / 2));
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(Heterodyne, FockOneReachesAccuracyBound) {
  PomPtr pom = grid(7.5, 151);
  DensityOperator rho = DensityOperator::pure(Ket::basis(40, 1));
  for (const auto& r : heterodyne_suite(rho, pom)) {
    EXPECT_TRUE(r.passed) << to_string(r.id) << " " << r.label << " " << r.slack;
    if (r.id == RelationId::accbest) EXPECT_TRUE(r.saturated) << r.slack;
  }
}

TEST(Heterodyne, CoarseGridIsReported) {
  PomPtr pom = grid(7.5, 41);
  DensityOperator rho = DensityOperator::pure(Ket::basis(40, 1));
  EXPECT_THROW(analyze_heterodyne(rho, pom), GridResolutionError);
}

TEST(Heterodyne, CanonicalPairScaling) {
  PomPtr pom = grid(7, 81);
  DensityOperator rho = DensityOperator::pure(Ket::basis(40, 0));
  for (double hbar : {0.5, 1.0, 2.0}) {
    RelationReport r = check_uncanon(rho, pom, hbar);
    EXPECT_NEAR(r.lhs, hbar / 4, 1e-4 * hbar);
    EXPECT_TRUE(r.saturated);
  }
}

}  // namespace
}  // namespace pomest
