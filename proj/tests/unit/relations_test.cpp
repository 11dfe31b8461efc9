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
#include "pomest/random.hpp"
#include "pomest/relations.hpp"

namespace pomest {
namespace {

TEST(Report, SlackAndStatus) {
  RelationReport b = make_report(RelationId::geom, RelationKind::bound, 1.0, 1.0 + 1e-10, 1e-9, 1e-6, "d");
  EXPECT_TRUE(b.passed);
  EXPECT_TRUE(b.saturated);
  RelationReport f = make_report(RelationId::geom, RelationKind::bound, 1.0, 1.1, 1e-9, 1e-6, "d");
  EXPECT_FALSE(f.passed);
  EXPECT_NEAR(f.slack, -0.1, 1e-15);
  RelationReport e = make_report(RelationId::varsum, RelationKind::equality, 2.0, 1.0, 1e-9, 1e-6, "d");
  EXPECT_FALSE(e.passed);
  RelationReport loose = make_report(RelationId::geom, RelationKind::bound, 3.0, 1.0, 1e-9, 1e-6, "d");
  EXPECT_TRUE(loose.passed);
  EXPECT_FALSE(loose.saturated);
}

TEST(Report, IdNamesRoundTrip) {
  for (RelationId id : {RelationId::varsum, RelationId::geom, RelationId::accbound, RelationId::ungen,
                        RelationId::uni, RelationId::unbest, RelationId::accbest, RelationId::fishbound,
                        RelationId::tracefish, RelationId::trace_identity, RelationId::mat,
                        RelationId::cramer_rao, RelationId::uncanon}) {
    EXPECT_EQ(relation_id_from_string(to_string(id)), id);
  }
  EXPECT_THROW(relation_id_from_string("bogus"), ConfigError);
}

TEST(Report, DigestDependsOnInputs) {
  Matrix a = Matrix::Identity(2, 2);
  Matrix b = a;
  b(0, 1) = 1e-12;
  EXPECT_EQ(digest_of({&a}, {1.0}), digest_of({&a}, {1.0}));
  EXPECT_NE(digest_of({&a}, {1.0}), digest_of({&b}, {1.0}));
  EXPECT_NE(digest_of({&a}, {1.0}), digest_of({&a}, {2.0}));
  EXPECT_NE(digest_of({&a}, {}, "x"), digest_of({&a}, {}, "y"));
}

TEST(Geom, PauliPairSaturates) {
  DensityOperator up = DensityOperator::pure(Ket::basis(2, 0));
  RelationReport r = check_geom(HermitianOperator(pauli()[0]), HermitianOperator(pauli()[1]), up);
  EXPECT_NEAR(r.lhs, 1, 1e-14);
  EXPECT_NEAR(r.rhs, 1, 1e-14);
  EXPECT_TRUE(r.passed);
  EXPECT_TRUE(r.saturated);
}

TEST(Geom, RandomStates) {
  Rng rng(41);
  for (int i = 0; i < 100; ++i) {
    Index d = rng.integer(2, 6);
    EXPECT_TRUE(check_geom(random_hermitian(d, rng), random_hermitian(d, rng), random_density(d, rng)).passed);
  }
}

TEST(Varsum, OptimalPassesOthersFail) {
  Rng rng(42);
  HermitianOperator a = random_hermitian(3, rng);
  PomPtr pom = random_pom(3, 5, rng);
  DensityOperator rho = random_density(3, rng);
  EXPECT_TRUE(check_varsum(a, optimal_estimate(a, pom, rho), rho).passed);
  Estimator noinfo = optimal_estimate_no_info(a, pom);
  RelationReport r = check_varsum(a, noinfo, rho);
  EXPECT_FALSE(r.passed);
}

TEST(Accbound, MatchesIndependentSum) {
  Rng rng(43);
  for (int i = 0; i < 20; ++i) {
    Index d = rng.integer(2, 5);
    HermitianOperator a = random_hermitian(d, rng);
    PomPtr pom = random_pom(d, d + 2, rng);
    DensityOperator rho = random_density(d, rng);
    RelationReport r = check_accbound(a, pom, rho);
    double rhs = 0;
    for (const auto& o : pom->outcomes()) {
      Matrix m = o.weight * o.matrix();
      Matrix c = a.matrix() * m - m * a.matrix();
      double p = (rho.matrix() * m).trace().real();
      rhs += std::norm((rho.matrix() * c).trace()) / (4 * p);
    }
    EXPECT_NEAR(r.rhs, rhs, 1e-10);
    EXPECT_NEAR(r.lhs, statistical_deviation_squared(a, optimal_estimate(a, pom, rho), rho), 1e-10);
    EXPECT_TRUE(r.passed);
  }
}

TEST(Ungen, HoldsForArbitraryEstimates) {
  Rng rng(44);
  for (int i = 0; i < 200; ++i) {
    Index d = rng.integer(2, 4);
    HermitianOperator a = random_hermitian(d, rng), b = random_hermitian(d, rng);
    PomPtr pom = random_pom(d, rng.integer(d, 3 * d), rng);
    DensityOperator rho = random_density(d, rng);
    std::vector<double> f(pom->size()), g(pom->size());
    for (auto& x : f) x = rng.uniform(-3, 3);
    for (auto& x : g) x = rng.uniform(-3, 3);
    RelationReport r = check_ungen(a, b, Estimator(pom, f, EstimatorKind::custom),
                                   Estimator(pom, g, EstimatorKind::custom), rho);
    EXPECT_TRUE(r.passed) << r.slack;
    RelationReport o = check_ungen(a, b, optimal_estimate(a, pom, rho), optimal_estimate(b, pom, rho), rho);
    EXPECT_TRUE(o.passed) << o.slack;
  }
}

TEST(Uni, RequiresUnbiasedEstimates) {
  const double s = 1 / std::sqrt(3.0);
  PomPtr tet = spin_pom({{s, s, s}, {s, -s, -s}, {-s, s, -s}, {-s, -s, s}}, {0.25, 0.25, 0.25, 0.25});
  HermitianOperator x(pauli()[0]), y(pauli()[1]);
  Estimator fx = *unbiased_correction(outcome_value_estimator(tet, 0), x).estimator;
  Estimator fy = *unbiased_correction(outcome_value_estimator(tet, 1), y).estimator;
  Rng rng(45);
  for (int i = 0; i < 20; ++i) {
    RelationReport r = check_uni(x, y, fx, fy, random_density(2, rng));
    EXPECT_TRUE(r.passed) << r.slack;
  }
  EXPECT_THROW(check_uni(x, y, outcome_value_estimator(tet, 0), fy, random_density(2, rng)),
               UnbiasednessViolation);
}

}  // namespace
}  // namespace pomest
