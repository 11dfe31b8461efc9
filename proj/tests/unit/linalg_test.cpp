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
#include <cstdlib>
#include <unsupported/Eigen/MatrixFunctions>

#include "pomest/errors.hpp"
#include "pomest/fock.hpp"
#include "pomest/linalg.hpp"
#include "pomest/pom.hpp"
#include "pomest/random.hpp"

namespace pomest {
namespace {

TEST(Ket, NormalizesAndRejectsZero) {
  Vector v(2);
  v << 3, Complex(0, 4);
  Ket k(v);
  EXPECT_NEAR(k.amplitudes().norm(), 1, 1e-15);
  EXPECT_NEAR(k[0].real(), 0.6, 1e-15);
  EXPECT_THROW(Ket(Vector::Zero(3)), InvalidState);
}

TEST(HermitianOperator, RejectsNonHermitian) {
  Matrix m(2, 2);
  m << 1, 2, 0, 1;
  EXPECT_THROW(HermitianOperator{m}, NotHermitian);
  Matrix ok(2, 2);
  ok << 1, Complex(0, 1), Complex(0, -1 + 1e-12), 2;
  HermitianOperator h(ok);
  EXPECT_EQ(h.matrix(), h.matrix().adjoint());
}

TEST(HermitianOperator, Arithmetic) {
  HermitianOperator z(pauli()[2]);
  HermitianOperator s = z.shifted(1);
  EXPECT_NEAR(s.matrix()(0, 0).real(), 0, 0);
  EXPECT_NEAR(s.matrix()(1, 1).real(), -2, 0);
  EXPECT_NEAR((z * 3).matrix()(1, 1).real(), -3, 0);
  EXPECT_NEAR((z + z - z).matrix()(0, 0).real(), 1, 0);
  EXPECT_THROW(z + HermitianOperator::identity(3), DimensionMismatch);
}

TEST(DensityOperator, Checks) {
  Matrix m = Matrix::Identity(2, 2);
  EXPECT_THROW(DensityOperator{m}, InvalidState);
  Matrix neg(2, 2);
  neg << 1.5, 0, 0, -0.5;
  EXPECT_THROW(DensityOperator{neg}, NotPositive);
  DensityOperator mixed = DensityOperator::maximally_mixed(4);
  EXPECT_NEAR(mixed.purity(), 0.25, 1e-15);
  DensityOperator t = DensityOperator::from_unnormalized(m * 7.0);
  EXPECT_NEAR(t.matrix()(0, 0).real(), 0.5, 1e-15);
}

TEST(Linalg, KronIndexing) {
  Rng rng(1);
  Matrix a = random_hermitian(2, rng).matrix();
  Matrix b = random_hermitian(3, rng).matrix();
  Matrix k = kron(a, b);
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j)
      for (Index p = 0; p < 3; ++p)
        for (Index q = 0; q < 3; ++q) EXPECT_EQ(k(i * 3 + p, j * 3 + q), a(i, j) * b(p, q));
}

TEST(Linalg, PartialTraceOfProduct) {
  // tr_anc[(A x B)(1 x sigma)] = A tr[sigma B]
  Rng rng(2);
  HermitianOperator a = random_hermitian(3, rng);
  HermitianOperator b = random_hermitian(2, rng);
  DensityOperator sigma = random_density(2, rng);
  HermitianOperator r = partial_trace_ancilla(tensor(a, b), 3, sigma);
  Complex c = (sigma.matrix() * b.matrix()).trace();
  EXPECT_LT((r.matrix() - a.matrix() * c).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Linalg, CommutatorAndVariance) {
  DensityOperator up = DensityOperator::pure(Ket::basis(2, 0));
  HermitianOperator x(pauli()[0]), y(pauli()[1]);
  // [x, y] = 2 i z and <z> = 1
  EXPECT_NEAR(commutator_magnitude(x, y, up), 2, 1e-15);
  EXPECT_NEAR(variance(x, up), 1, 1e-15);
  EXPECT_NEAR(expectation(HermitianOperator(pauli()[2]), up), 1, 1e-15);
}

TEST(Linalg, SpectralApply) {
  Rng rng(3);
  HermitianOperator h = random_hermitian(4, rng);
  HermitianOperator sq = spectral_apply(h, [](double x) { return x * x; });
  EXPECT_LT((sq.matrix() - h.matrix() * h.matrix()).cwiseAbs().maxCoeff(), 1e-12);
  Eigensystem es = eigensystem(h);
  EXPECT_NEAR(es.values(0), min_eigenvalue(h.matrix()), 1e-12);
  EXPECT_NEAR(es.values(3), max_eigenvalue(h.matrix()), 1e-12);
}

TEST(Fock, LadderOperators) {
  Matrix a = fock::annihilation(6);
  for (Index n = 1; n < 6; ++n) EXPECT_NEAR(a(n - 1, n).real(), std::sqrt(double(n)), 1e-15);
  HermitianOperator x1 = fock::quadrature_x1(6), x2 = fock::quadrature_x2(6);
  // [X1, X2] = i/2 away from the truncation edge
  Matrix c = x1.matrix() * x2.matrix() - x2.matrix() * x1.matrix();
  for (Index n = 0; n < 5; ++n) EXPECT_NEAR(c(n, n).imag(), 0.5, 1e-14);
  HermitianOperator h = fock::hamiltonian(4, 2.0, 3.0);
  EXPECT_NEAR(h.matrix()(2, 2).real(), 2.0 * 3.0 * 2.5, 1e-14);
}

TEST(Fock, CoherentAmplitudes) {
  Complex alpha(1.2, -0.7);
  Ket k = fock::coherent_state(alpha, 40);
  double lf = 0;
  for (Index n = 0; n < 20; ++n) {
    if (n > 0) lf += std::log(double(n));
    Complex want = std::exp(-std::norm(alpha) / 2 - lf / 2) * std::pow(alpha, double(n));
    EXPECT_NEAR(std::abs(k[n] - want), 0, 1e-13) << n;
  }
}

TEST(Fock, DisplacerMatchesMatrixExponential) {
  const Index dim = 10, big = 120;
  Matrix a = fock::annihilation(big);
  for (Complex alpha : {Complex(0.7, 0.2), Complex(-2.5, 3.1), Complex(0, -4.9)}) {
    Matrix gen = alpha * a.adjoint() - std::conj(alpha) * a;
    Matrix d = gen.exp();
    fock::Displacer disp(dim, 7, 1);
    Matrix cols = Matrix::Identity(dim, 2);
    Matrix got = disp.apply(alpha, cols);
    for (Index k = 0; k < 2; ++k) {
      double err = (got.col(k) - d.block(0, k, dim, 1)).cwiseAbs().maxCoeff();
      EXPECT_LT(err, 1e-10) << alpha << " level " << k;
    }
  }
}

TEST(Fock, ParityConjugateOfVacuumIsVacuum) {
  DensityOperator v = DensityOperator::pure(Ket::basis(5, 0));
  EXPECT_LT((fock::parity_conjugate(v).matrix() - v.matrix()).norm(), 1e-15);
  DensityOperator c = DensityOperator::pure(fock::coherent_state(Complex(0.5, 0.5), 20));
  // parity conjugate of |beta> is |-beta*>
  DensityOperator want = DensityOperator::pure(fock::coherent_state(Complex(-0.5, 0.5), 20));
  EXPECT_LT((fock::parity_conjugate(c).matrix() - want.matrix()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Tolerances, EnvironmentOverride) {
  ::setenv("POMEST_EXACT_SLACK", "1e-5", 1);
  Tolerances t = Tolerances::from_env(default_tolerances());
  ::unsetenv("POMEST_EXACT_SLACK");
  EXPECT_EQ(t.exact_slack, 1e-5);
  ::setenv("POMEST_GRID_SLACK", "-1", 1);
  EXPECT_THROW(Tolerances::from_env(default_tolerances()), ConfigError);
  ::unsetenv("POMEST_GRID_SLACK");
  Tolerances u;
  EXPECT_THROW(u.set("nonsense", 1), ConfigError);
}

TEST(Random, SameSeedSameStream) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.normal(), b.normal());
  Rng c(7);
  for (int i = 0; i < 1000; ++i) {
    double u = c.uniform();
    ASSERT_GE(u, 0);
    ASSERT_LT(u, 1);
  }
  Matrix u = random_unitary(4, c);
  EXPECT_LT((u.adjoint() * u - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-13);
}

}  // namespace
}  // namespace pomest
