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
#include <limits>

#include "pomest/errors.hpp"
#include "pomest/estimation.hpp"
#include "pomest/fock.hpp"
#include "pomest/random.hpp"

namespace pomest {
namespace {

struct Instance {
  PomPtr pom;
  DensityOperator rho = DensityOperator::maximally_mixed(1);
  HermitianOperator a = HermitianOperator::identity(1);
};

Instance random_instance(Rng& rng, Index lo = 2, Index hi = 5) {
  Index d = rng.integer(lo, hi);
  Instance in;
  in.pom = random_pom(d, rng.integer(d, 2 * d + 1), rng);
  in.rho = random_density(d, rng);
  in.a = random_hermitian(d, rng);
  return in;
}

// Per-outcome cost w tr[(A - f) rho (A - f) M] as a quadratic c2 f^2 + c1 f + c0.
TEST(OptimalEstimate, MinimizesEachOutcomeCost) {
  Rng rng(21);
  for (int i = 0; i < 20; ++i) {
    Instance in = random_instance(rng);
    Estimator f = optimal_estimate(in.a, in.pom, in.rho);
    const Matrix& a = in.a.matrix();
    const Matrix& r = in.rho.matrix();
    for (std::size_t k = 0; k < in.pom->size(); ++k) {
      Matrix m = (*in.pom)[k].weight * (*in.pom)[k].matrix();
      double c2 = (r * m).trace().real();
      double c1 = -(a * r * m + r * a * m).trace().real();
      EXPECT_NEAR(f[k], -c1 / (2 * c2), 1e-10);
    }
  }
}

TEST(OptimalEstimate, BeatsPerturbations) {
  Rng rng(22);
  for (int i = 0; i < 20; ++i) {
    Instance in = random_instance(rng);
    Estimator f = optimal_estimate(in.a, in.pom, in.rho);
    double d0 = statistical_deviation_squared(in.a, f, in.rho);
    for (int t = 0; t < 5; ++t) {
      std::vector<double> v = f.values();
      for (auto& x : v) x += 0.05 * rng.normal();
      double d = statistical_deviation_squared(in.a, Estimator(in.pom, v, EstimatorKind::custom), in.rho);
      EXPECT_GE(d, d0 - 1e-12);
    }
  }
}

TEST(OptimalEstimate, ProjectiveMeasurementOfItself) {
  Rng rng(23);
  HermitianOperator a = random_hermitian(4, rng);
  PomPtr pom = projective_pom(a);
  DensityOperator rho = random_density(4, rng);
  Estimator f = optimal_estimate(a, pom, rho);
  for (std::size_t k = 0; k < pom->size(); ++k) EXPECT_NEAR(f[k], (*pom)[k].scalar_value(), 1e-10);
  EXPECT_NEAR(statistical_deviation(a, f, rho), 0, 1e-7);
  EXPECT_EQ(f.kind(), EstimatorKind::optimal_with_state);
  EXPECT_TRUE(f.out_of_range().empty());
}

TEST(OptimalEstimate, PureStateKindAndZeroProbability) {
  DensityOperator up = DensityOperator::pure(Ket::basis(2, 0));
  PomPtr z = projective_pom(HermitianOperator(pauli()[2]));
  Estimator f = optimal_estimate(HermitianOperator(pauli()[0]), z, up);
  EXPECT_EQ(f.kind(), EstimatorKind::optimal_pure);
  ASSERT_EQ(f.zero_probability().size(), 1u);
  EXPECT_EQ(f[f.zero_probability()[0]], 0.0);
  // the dropped outcome still contributes tr[A rho A M]: here the full Var of x
  EXPECT_NEAR(statistical_deviation_squared(HermitianOperator(pauli()[0]), f, up), 1, 1e-14);
}

TEST(OptimalEstimate, OutOfRangeFlag) {
  // A = z, rho near |+>, POM = trine-like along x: estimates stay in [-1, 1]
  // but an observable with a gap can be estimated outside its spectrum.
  RealVector d(2);
  d << 0, 1;
  HermitianOperator a = HermitianOperator::diagonal(d);
  PomPtr pom = spin_pom({{1, 0, 0}, {-1, 0, 0}}, {0.5, 0.5});
  Matrix r(2, 2);
  r << 0.5, 0.45, 0.45, 0.5;
  Estimator f = optimal_estimate(a, pom, DensityOperator(r));
  for (double v : f.values()) EXPECT_NEAR(v, 0.5, 1e-12);
  EXPECT_TRUE(f.out_of_range().empty());
}

TEST(NoInfo, TraceRatio) {
  Rng rng(24);
  Instance in = random_instance(rng);
  Estimator f = optimal_estimate_no_info(in.a, in.pom);
  for (std::size_t k = 0; k < in.pom->size(); ++k) {
    Matrix m = (*in.pom)[k].matrix();
    EXPECT_NEAR(f[k], (in.a.matrix() * m).trace().real() / m.trace().real(), 1e-12);
  }
  // equals the optimal estimate for the maximally mixed state
  Estimator g = optimal_estimate(in.a, in.pom, DensityOperator::maximally_mixed(in.a.dim()));
  for (std::size_t k = 0; k < f.size(); ++k) EXPECT_NEAR(f[k], g[k], 1e-12);
}

TEST(Deviation, VarianceSplit) {
  Rng rng(25);
  for (int i = 0; i < 50; ++i) {
    Instance in = random_instance(rng);
    Estimator f = optimal_estimate(in.a, in.pom, in.rho);
    EstimateStats s = estimate_stats(in.a, f, in.rho);
    EXPECT_NEAR(variance(in.a, in.rho), s.dispersion * s.dispersion + s.inaccuracy * s.inaccuracy, 1e-10);
    EXPECT_NEAR(s.mean, expectation(in.a, in.rho), 1e-10);
  }
}

TEST(Deviation, ProbabilitiesSumToOne) {
  Rng rng(26);
  Instance in = random_instance(rng);
  double s = 0;
  for (double p : probabilities(*in.pom, in.rho)) {
    EXPECT_GE(p, 0);
    s += p;
  }
  EXPECT_NEAR(s, 1, 1e-12);
}

// Haar-averaged deviation over pure states equals the state-free distance / d.
TEST(HsDistance, MonteCarloOverPureStates) {
  Rng rng(27);
  Instance in = random_instance(rng, 3, 3);
  std::vector<double> v(in.pom->size());
  for (auto& x : v) x = rng.uniform(-1, 1);
  Estimator f(in.pom, v, EstimatorKind::custom);
  const int samples = 20000;
  double sum = 0;
  for (int s = 0; s < samples; ++s) {
    sum += statistical_deviation_squared(in.a, f, DensityOperator::pure(random_ket(3, rng)));
  }
  double mc = 3 * sum / samples;
  EXPECT_NEAR(mc / hs_distance_squared(in.a, f), 1, 0.03);
}

TEST(Bias, UniversalUnbiasednessOfProjectiveEigenvalues) {
  Rng rng(28);
  HermitianOperator a = random_hermitian(3, rng);
  PomPtr pom = projective_pom(a);
  Estimator f = outcome_value_estimator(pom);
  EXPECT_TRUE(is_universally_unbiased(f, a));
  EXPECT_LT(bias_operator(f, a).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Correction, ScalarShift) {
  Rng rng(29);
  HermitianOperator a = random_hermitian(3, rng);
  PomPtr pom = projective_pom(a);
  std::vector<double> v;
  for (const auto& o : pom->outcomes()) v.push_back(o.scalar_value() + 0.75);
  CorrectionResult c = unbiased_correction(Estimator(pom, v, EstimatorKind::custom), a);
  EXPECT_EQ(c.method, CorrectionResult::Method::scalar_shift);
  EXPECT_NEAR(c.shift, 0.75, 1e-12);
  ASSERT_TRUE(c.estimator);
  for (std::size_t k = 0; k < pom->size(); ++k) EXPECT_NEAR((*c.estimator)[k], (*pom)[k].scalar_value(), 1e-12);
}

TEST(Correction, TetrahedronGivesThreeTimesDirection) {
  const double s = 1 / std::sqrt(3.0);
  PomPtr tet = spin_pom({{s, s, s}, {s, -s, -s}, {-s, s, -s}, {-s, -s, s}}, {0.25, 0.25, 0.25, 0.25});
  for (std::size_t c = 0; c < 3; ++c) {
    CorrectionResult r = unbiased_correction(outcome_value_estimator(tet, c), HermitianOperator(pauli()[c]));
    ASSERT_EQ(r.method, CorrectionResult::Method::spin_linear);
    for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR((*r.estimator)[k], 3 * (*tet)[k].value[c], 1e-12);
  }
}

TEST(Correction, GenericLinearSolve) {
  Rng rng(30);
  // Rank-one POM with d^2 outcomes spans the Hermitian matrices.
  PomPtr pom = random_pom(3, 9, rng, 1);
  HermitianOperator a = random_hermitian(3, rng);
  CorrectionResult r = unbiased_correction(optimal_estimate_no_info(a, pom), a);
  ASSERT_EQ(r.method, CorrectionResult::Method::linear_solve);
  EXPECT_LT(bias_operator(*r.estimator, a).cwiseAbs().maxCoeff(), 1e-10);
  // two outcomes cannot reach a generic A
  PomPtr small = random_pom(3, 2, rng);
  CorrectionResult n = unbiased_correction(optimal_estimate_no_info(a, small), a);
  EXPECT_EQ(n.method, CorrectionResult::Method::not_correctable);
  EXPECT_FALSE(n.estimator);
}

TEST(Correction, PhotonCountingDividesByEfficiency) {
  const double eta = 0.6;
  PomPtr p = inefficient_photon_pom(25, eta);
  CorrectionResult r = unbiased_correction(outcome_value_estimator(p), fock::number(25));
  ASSERT_TRUE(r.estimator);
  for (Index m = 0; m < p->info().reliable_outcomes; ++m) {
    EXPECT_NEAR((*r.estimator)[std::size_t(m)], double(m) / eta, 1e-10) << m;
  }
}

TEST(CompletePom, RejectsCoincidingKets) {
  PomPtr z = basis_pom(Matrix::Identity(2, 2), {1, -1});
  Matrix phase = Matrix::Identity(2, 2) * Complex(0, 1);
  PomPtr z2 = basis_pom(phase, {1, -1});
  DensityOperator rho = DensityOperator::maximally_mixed(2);
  EXPECT_THROW(optimal_estimate_complete_pom(z, z2, rho), InvalidPom);
  Matrix h(2, 2);
  h << 1, 1, 1, -1;
  PomPtr x = basis_pom(h / std::sqrt(2.0), {1, -1});
  Estimator f = optimal_estimate_complete_pom(z, x, DensityOperator::pure(Ket::basis(2, 0)));
  // <0|x_k>... z estimated from an x readout of |0>: both outcomes give <z> = 1
  EXPECT_NEAR(f[0], 1, 1e-12);
  EXPECT_NEAR(f[1], 1, 1e-12);
}

TEST(Repeatability, CommutingMeasurement) {
  Rng rng(31);
  Matrix u = random_unitary(3, rng);
  RealVector da(3), dm(3);
  da << 0.3, -1.2, 2.0;
  dm << 1, 1, 5;
  HermitianOperator a(u * da.cast<Complex>().asDiagonal() * u.adjoint());
  HermitianOperator m(u * dm.cast<Complex>().asDiagonal() * u.adjoint());
  RepeatabilityReport r = repeatability_check(a, m, random_density(3, rng));
  EXPECT_TRUE(r.passed);
  EXPECT_LT(r.max_difference, 1e-10);
  EXPECT_THROW(repeatability_check(a, HermitianOperator(random_hermitian(3, rng)), random_density(3, rng)),
               CommutationViolation);
}

TEST(Estimator, RejectsWrongSize) {
  PomPtr z = projective_pom(HermitianOperator(pauli()[2]));
  EXPECT_THROW(Estimator(z, {1.0}, EstimatorKind::custom), DimensionMismatch);
  EXPECT_THROW(Estimator(z, {1.0, std::numeric_limits<double>::quiet_NaN()}, EstimatorKind::custom),
               NumericalError);
  EXPECT_EQ(estimator_kind_from_string(to_string(EstimatorKind::unbiased_corrected)),
            EstimatorKind::unbiased_corrected);
}

}  // namespace
}  // namespace pomest
