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
#include <fstream>
#include <numbers>

#include "pomest/errors.hpp"
#include "pomest/fock.hpp"
#include "pomest/json_io.hpp"
#include "pomest/naimark.hpp"
#include "pomest/pom.hpp"
#include "pomest/random.hpp"

namespace pomest {
namespace {

RawPom load_fixture(const std::string& name) {
  std::ifstream in(std::string(POMEST_FIXTURES) + "/" + name);
  return io::raw_pom_from_json(io::Json::parse(in));
}

double completeness_error(const Pom& p) {
  return (p.completeness_operator() - Matrix::Identity(p.dim(), p.dim())).cwiseAbs().maxCoeff();
}

TEST(Validate, TrineFixturePasses) {
  RawPom raw = load_fixture("trine.json");
  ValidationReport v = validate(raw);
  EXPECT_TRUE(v.passed);
  EXPECT_TRUE(v.complete);
  EXPECT_LT(v.completeness_deviation, 1e-15);
  PomPtr p = make_pom(raw);
  EXPECT_EQ(p->size(), 3u);
  EXPECT_NEAR(p->outcomes()[1].matrix()(0, 1).real(), std::sqrt(3.0) / 6, 1e-15);
}

TEST(Validate, IncompleteAndNegativeFail) {
  RawPom bad = load_fixture("incomplete.json");
  ValidationReport v = validate(bad);
  EXPECT_FALSE(v.passed);
  EXPECT_FALSE(v.complete);
  EXPECT_NEAR(v.completeness_deviation, 0.5, 1e-15);
  EXPECT_THROW(make_pom(bad), InvalidPom);

  RawPom neg;
  neg.id = "neg";
  neg.dim = 2;
  Matrix m0(2, 2), m1(2, 2);
  m0 << 1.1, 0, 0, 0.5;
  m1 << -0.1, 0, 0, 0.5;
  neg.outcomes = {{"a", {0}, 1, m0}, {"b", {1}, 1, m1}};
  ValidationReport vn = validate(neg);
  EXPECT_FALSE(vn.positive);
  EXPECT_TRUE(vn.complete);
  EXPECT_NEAR(vn.min_eigenvalue, -0.1, 1e-14);
}

TEST(Validate, NonHermitianFlagged) {
  RawPom p;
  p.dim = 2;
  Matrix m0(2, 2), m1(2, 2);
  m0 << 0.5, 0.1, 0, 0.5;
  m1 << 0.5, -0.1, 0, 0.5;
  p.outcomes = {{"a", {0}, 1, m0}, {"b", {1}, 1, m1}};
  ValidationReport v = validate(p);
  EXPECT_FALSE(v.hermitian);
  EXPECT_FALSE(v.passed);
}

TEST(Projective, GroupsDegenerateEigenvalues) {
  RealVector d(3);
  d << 1, 2, 1;
  PomPtr p = projective_pom(HermitianOperator::diagonal(d));
  ASSERT_EQ(p->size(), 2u);
  EXPECT_NEAR(p->outcomes()[0].scalar_value(), 1, 1e-12);
  EXPECT_NEAR(p->outcomes()[0].matrix().trace().real(), 2, 1e-12);
  EXPECT_LT(completeness_error(*p), 1e-12);
}

TEST(CoherentGrid, CompleteAfterRenormalization) {
  GridSpec g;
  g.radius = 7;
  g.points_per_axis = 61;
  PomPtr p = coherent_pom(20, g);
  EXPECT_LT(completeness_error(*p), 1e-10);
  EXPECT_EQ(p->size(), 61u * 61u);
  EXPECT_LT(p->info().renormalization_correction, 0.1);
  EXPECT_NEAR(p->outcomes()[0].weight, g.spacing() * g.spacing() / std::numbers::pi, 1e-15);
  // index (i, j): i along Re, j along Im
  Complex z = g.point(3, 5);
  EXPECT_NEAR(p->outcomes()[static_cast<std::size_t>(g.flat(3, 5))].value[0], z.real(), 1e-15);
  EXPECT_NEAR(p->outcomes()[static_cast<std::size_t>(g.flat(3, 5))].value[1], z.imag(), 1e-15);
}

TEST(CoherentGrid, TooSmallRadiusIsRejected) {
  GridSpec g;
  g.radius = 2;
  g.points_per_axis = 21;
  EXPECT_THROW(coherent_pom(20, g), CompletenessError);
}

TEST(CoherentGrid, VacuumImagebandEqualsCoherent) {
  GridSpec g;
  g.radius = 6;
  g.points_per_axis = 31;
  PomPtr a = coherent_pom(12, g);
  PomPtr b = imageband_pom(12, g, DensityOperator::pure(Ket::basis(12, 0)));
  double diff = 0;
  for (std::size_t k = 0; k < a->size(); k += 37) {
    diff = std::max(diff, (a->outcomes()[k].matrix() - b->outcomes()[k].matrix()).cwiseAbs().maxCoeff());
  }
  EXPECT_LT(diff, 1e-12);
}

TEST(Photon, BinomialEntries) {
  const double eta = 0.7;
  PomPtr p = inefficient_photon_pom(15, eta);
  EXPECT_LT(completeness_error(*p), 1e-12);
  // <n|M_m|n> = C(n, m) eta^m (1 - eta)^(n - m), by Pascal's rule
  std::vector<std::vector<double>> c(15, std::vector<double>(15, 0));
  for (int n = 0; n < 15; ++n) {
    c[n][0] = 1;
    for (int m = 1; m <= n; ++m) c[n][m] = c[n - 1][m - 1] + (m < n ? c[n - 1][m] : 0);
  }
  for (std::size_t m = 0; m < p->size(); ++m) {
    Matrix mm = p->outcomes()[m].weight * p->outcomes()[m].matrix();
    for (Index n = 0; n < 15; ++n) {
      double want = n >= Index(m) ? c[n][m] * std::pow(eta, double(m)) * std::pow(1 - eta, double(n - Index(m))) : 0;
      EXPECT_NEAR(mm(n, n).real(), want, 1e-13) << m << " " << n;
    }
  }
}

TEST(Photon, TruncationChecks) {
  PomPtr p = inefficient_photon_pom(30, 0.9);
  EXPECT_GT(p->info().reliable_outcomes, 0);
  EXPECT_THROW(inefficient_photon_pom(30, 0.9, Index(40)), TruncationError);
  PomPtr ideal = inefficient_photon_pom(6, 1.0);
  for (std::size_t m = 0; m < ideal->size(); ++m) {
    Matrix mm = ideal->outcomes()[m].weight * ideal->outcomes()[m].matrix();
    EXPECT_NEAR(mm(Index(m), Index(m)).real(), 1, 1e-15);
  }
}

TEST(Spin, Preconditions) {
  EXPECT_THROW(spin_pom({{1, 0, 0}, {1, 0, 0}}, {0.5, 0.5}), InvalidPom);
  EXPECT_THROW(spin_pom({{2, 0, 0}, {-2, 0, 0}}, {0.5, 0.5}), InvalidPom);
  PomPtr p = spin_pom({{0, 0, 1}, {0, 0, -1}}, {0.5, 0.5});
  EXPECT_LT(completeness_error(*p), 1e-15);
  EXPECT_EQ(p->info().family, PomFamily::spin);
}

TEST(Naimark, TrineExtension) {
  PomPtr p = make_pom(load_fixture("trine.json"));
  NaimarkExtension ext = naimark_extend(*p);
  EXPECT_EQ(ext.anc_dim, 3);
  Matrix u = ext.unitary;
  EXPECT_LT((u.adjoint() * u - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff(), 1e-12);
  Rng rng(11);
  for (int s = 0; s < 10; ++s) {
    DensityOperator rho = random_density(2, rng);
    DensityOperator joint = tensor(rho, ext.ancilla);
    for (std::size_t k = 0; k < 3; ++k) {
      double p1 = (rho.matrix() * p->outcomes()[k].matrix()).trace().real();
      double p2 = (joint.matrix() * ext.projections[k].matrix()).trace().real();
      EXPECT_NEAR(p1, p2, 1e-12);
    }
  }
  // projections are orthogonal projectors summing to one
  Matrix sum = Matrix::Zero(6, 6);
  for (const auto& pr : ext.projections) {
    EXPECT_LT((pr.matrix() * pr.matrix() - pr.matrix()).cwiseAbs().maxCoeff(), 1e-12);
    sum += pr.matrix();
  }
  EXPECT_LT((sum - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(RandomPom, Complete) {
  Rng rng(12);
  for (int i = 0; i < 20; ++i) {
    Index d = rng.integer(2, 5);
    PomPtr p = random_pom(d, d + 1, rng, rng.integer(1, d));
    EXPECT_LT(completeness_error(*p), 1e-12);
  }
  EXPECT_THROW(random_pom(5, 2, rng, 1), InvalidPom);
}

}  // namespace
}  // namespace pomest
