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

#include "pomest/random.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

#include "pomest/errors.hpp"

namespace pomest {

double Rng::uniform() {
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

Index Rng::integer(Index lo, Index hi) {
  auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<Index>(gen_() % span);
}

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = 0;
  do {
    u1 = uniform();
  } while (u1 <= 0);
  double u2 = uniform();
  double r = std::sqrt(-2 * std::log(u1));
  spare_ = r * std::sin(2 * std::numbers::pi * u2);
  have_spare_ = true;
  return r * std::cos(2 * std::numbers::pi * u2);
}

Complex Rng::complex_normal() {
  double re = normal();
  double im = normal();
  return Complex(re, im) * std::sqrt(0.5);
}

namespace {

Matrix ginibre(Index rows, Index cols, Rng& rng) {
  Matrix g(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) g(i, j) = rng.complex_normal();
  }
  return g;
}

}  // namespace

Ket random_ket(Index dim, Rng& rng) { return Ket(ginibre(dim, 1, rng).col(0)); }

DensityOperator random_density(Index dim, Rng& rng, Index rank) {
  Matrix g = ginibre(dim, rank > 0 ? rank : dim, rng);
  return DensityOperator::from_unnormalized(g * g.adjoint());
}

HermitianOperator random_hermitian(Index dim, Rng& rng) {
  Matrix g = ginibre(dim, dim, rng);
  return HermitianOperator((g + g.adjoint()) * 0.5);
}

Matrix random_unitary(Index dim, Rng& rng) {
  Eigen::HouseholderQR<Matrix> qr(ginibre(dim, dim, rng));
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR();
  for (Index k = 0; k < dim; ++k) {
    Complex d = r(k, k);
    if (std::abs(d) > 0) q.col(k) *= d / std::abs(d);
  }
  return q;
}

PomPtr random_pom(Index dim, Index outcomes, Rng& rng, Index rank) {
  if (outcomes < 1) throw InvalidPom("random POM: need at least one outcome");
  if (outcomes * (rank > 0 ? rank : dim) < dim) {
    throw InvalidPom("random POM: outcomes times rank must reach the dimension");
  }
  std::vector<Matrix> g;
  Matrix t = Matrix::Zero(dim, dim);
  for (Index k = 0; k < outcomes; ++k) {
    g.push_back(ginibre(dim, rank > 0 ? rank : dim, rng));
    t += g.back() * g.back().adjoint();
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(t);
  Matrix s = es.operatorInverseSqrt();
  std::vector<PomOutcome> outs;
  for (Index k = 0; k < outcomes; ++k) {
    outs.push_back({"r" + std::to_string(k), {rng.uniform(-2, 2)}, 1.0, s * g[static_cast<std::size_t>(k)]});
  }
  return std::make_shared<const Pom>("random", dim, std::move(outs));
}

}  // namespace pomest
