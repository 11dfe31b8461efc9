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
#include "pomest/random.hpp"
#include "pomest/scenarios.hpp"

namespace pomest::scenarios {
namespace {

TEST(Epr, ClosedFormMeetsBoundExactly) {
  EprReport r = epr_closed_form({});
  EXPECT_NEAR(r.ungen_lhs, 0.5, 1e-12);
  EXPECT_NEAR(r.ungen_rhs, 0.5, 1e-15);
  for (const auto& rel : epr_relations(r)) EXPECT_TRUE(rel.passed) << to_string(rel.id) << " " << rel.label;
  // Var P = D^2 + eps^2 for the optimal estimate
  EXPECT_NEAR(r.var_p, r.delta_p * r.delta_p + r.eps_p * r.eps_p, 1e-9 * r.var_p);
}

TEST(Epr, NumericAgreesWithClosedForm) {
  EprParams p;
  p.a = 0.3;
  p.hbar = 1.5;
  EprGrid g;
  g.nx = 128;
  g.ns = 128;
  EprReport n = epr_numeric(p, g);
  EprReport c = epr_closed_form(p);
  EXPECT_LT(n.max_relative_mismatch, 1e-3);
  EXPECT_NEAR(n.eps_p / c.eps_p, 1, 1e-3);
  EXPECT_NEAR(n.delta_p / c.delta_p, 1, 1e-3);
  EXPECT_NEAR(n.ungen_lhs, p.hbar / 2, 1e-3 * p.hbar);
}

TEST(Epr, UnderResolvedGridThrows) {
  EprGrid g;
  g.nx = 16;
  g.ns = 16;
  EXPECT_THROW(epr_numeric({}, g), GridResolutionError);
}

TEST(Thermal, TwoLevelOracle) {
  RealVector e(2);
  e << 0, 1;
  HermitianOperator h = HermitianOperator::diagonal(e);
  Matrix u(2, 2);
  u << 1, 1, 1, -1;
  PomPtr pom = basis_pom(u / std::sqrt(2.0), {1, -1});
  for (double beta : {0.1, 1.0, 4.0}) {
    ThermalEstimate t = thermal_energy_estimate(h, pom, beta);
    double want = std::exp(-beta) / (1 + std::exp(-beta));
    EXPECT_NEAR(t.estimate[0], want, 1e-12);
    EXPECT_NEAR(t.estimate[1], want, 1e-12);
    EXPECT_NEAR(t.log_derivative[0], want, 1e-6);
  }
  EXPECT_THROW(thermal_energy_estimate(h, pom, 800), NumericalError);
}

TEST(Thermal, OscillatorClosedForm) {
  for (double beta : {0.5, 1.0, 2.0}) {
    OscillatorParams p;
    p.beta = beta;
    p.mass = 1.3;
    p.omega = 0.7;
    OscillatorThermalReport r = oscillator_thermal(p);
    EXPECT_LT(r.max_closed_form_deviation, 1e-6);
    EXPECT_LT(r.max_derivative_mismatch, 1e-6);
    int trusted = 0;
    for (bool t : r.trusted) trusted += t;
    EXPECT_GT(trusted, 0);
  }
}

GridWavefunction gaussian(double k, double h = 0.01, double half = 6) {
  GridWavefunction w;
  Index n = static_cast<Index>(std::lround(2 * half / h)) + 1;
  w.origin = -half;
  w.spacing = h;
  w.amplitudes.resize(n);
  for (Index i = 0; i < n; ++i) {
    double x = w.x(i);
    w.amplitudes(i) = std::exp(-x * x / 2) * std::exp(Complex(0, k * x));
  }
  return w.normalized();
}

// Oscillator ground state in V = x^2/2, boosted by momentum k: the local
// energy is 1/2 + k^2/2 at every point. Errors are second order in h.
TEST(QuantumPotential, BoostedGroundStateIsFlat) {
  const double k = 0.5;
  std::vector<double> errors;
  for (double h : {0.05, 0.025}) {
    GridWavefunction w = gaussian(k, h);
    std::vector<double> v;
    for (Index i = 0; i < w.amplitudes.size(); ++i) v.push_back(w.x(i) * w.x(i) / 2);
    QuantumPotentialReport r = quantum_potential_estimate(w, v);
    double worst = 0;
    for (std::size_t i = 0; i < r.x.size(); ++i) {
      if (r.near_node[i] || std::abs(r.x[i]) > 3) continue;
      worst = std::max(worst, std::abs(r.estimate[i] - (0.5 + k * k / 2)));
      worst = std::max(worst, std::abs(r.matrix_estimate[i] - (0.5 + k * k / 2)));
    }
    errors.push_back(worst);
  }
  EXPECT_LT(errors[1], 2e-3);
  EXPECT_NEAR(errors[0] / errors[1], 4, 0.5);
}

TEST(Linear, MatchesGaussianFormulas) {
  LinearEstimateInputs in;
  in.var_x = 2;
  in.var_p = 0.3;
  in.var_xprime = 0.25;
  in.var_pprime = 1;
  LinearReport r = linear_estimate(in);
  // the reading x + x' carries noise N = Var X'
  double sx = in.var_x, nx = in.var_xprime;
  EXPECT_NEAR(r.x.lambda, sx / (sx + nx), 1e-12);
  EXPECT_NEAR(r.x.inaccuracy, std::sqrt(sx * nx / (sx + nx)), 1e-12);
  EXPECT_NEAR(r.x.dispersion, sx / std::sqrt(sx + nx), 1e-12);
  EXPECT_GE(r.joint_lhs, in.hbar / 2 - 1e-12);
}

TEST(Linear, MonteCarlo) {
  LinearEstimateInputs in;
  in.mean_x = 0.4;
  in.var_x = 1.5;
  in.var_xprime = 0.5;
  in.var_pprime = 0.5;
  LinearReport r = linear_estimate(in);
  Rng rng(51);
  const int n = 1000000;
  double se = 0;
  for (int s = 0; s < n; ++s) {
    double x = in.mean_x + std::sqrt(in.var_x) * rng.normal();
    double reading = x + std::sqrt(in.var_xprime) * rng.normal();
    double d = r.x.estimate(reading, in.mean_x) - x;
    se += d * d;
  }
  EXPECT_NEAR(std::sqrt(se / n), r.x.inaccuracy, 1e-2);
}

TEST(Linear, RejectsBadInputs) {
  LinearEstimateInputs in;
  in.var_x = 0;
  EXPECT_THROW(linear_estimate(in), ConfigError);
  LinearEstimateInputs m;
  m.var_xprime = 1;
  EXPECT_THROW(linear_estimate(m), ConfigError);
}

TEST(Squeezing, OptimumMatchesDenseScan) {
  for (auto [vx, vp] : {std::pair{0.5, 0.5}, {1.0, 1.0}, {4.0, 0.25}, {9.0, 9.0}}) {
    SqueezingReport r = optimize_squeezing(vx, vp, 1.0);
    double best = std::numeric_limits<double>::infinity();
    for (int i = -4000; i <= 4000; ++i) best = std::min(best, squeezing_cost(vx, vp, 1.0, std::pow(10.0, i / 1000.0)));
    best = std::min(best, r.j_endpoint);
    EXPECT_LE(r.j_min, best + 1e-9) << vx << " " << vp;
    EXPECT_GE(r.j_min, best - 1e-6) << vx << " " << vp;
    EXPECT_LE(r.j_min, r.j_symmetric + 1e-12);
    EXPECT_GE(r.j_min, 0.5 - 1e-9);
  }
}

}  // namespace
}  // namespace pomest::scenarios
