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

#include "pomest/fock.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "pomest/errors.hpp"

namespace pomest::fock {

Matrix annihilation(Index dim) {
  Matrix a = Matrix::Zero(dim, dim);
  for (Index n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

HermitianOperator number(Index dim) {
  return HermitianOperator::diagonal(RealVector::LinSpaced(dim, 0, dim - 1));
}

HermitianOperator quadrature_x1(Index dim) {
  Matrix a = annihilation(dim);
  return HermitianOperator((a + a.adjoint()) * 0.5);
}

HermitianOperator quadrature_x2(Index dim) {
  Matrix a = annihilation(dim);
  return HermitianOperator((a - a.adjoint()) / Complex(0, 2));
}

HermitianOperator position(Index dim, double hbar, double mass, double omega) {
  Matrix a = annihilation(dim);
  return HermitianOperator((a + a.adjoint()) * std::sqrt(hbar / (2 * mass * omega)));
}

HermitianOperator hamiltonian(Index dim, double hbar, double omega) {
  return HermitianOperator::diagonal(
      (RealVector::LinSpaced(dim, 0, dim - 1).array() + 0.5) * hbar * omega);
}

Displacer::Displacer(Index dim, double max_abs_alpha, Index max_level)
    : dim_(dim), max_abs_(max_abs_alpha), max_level_(max_level) {
  if (dim < 1) throw DimensionMismatch("displacer: dimension must be positive");
  if (!(max_abs_alpha >= 0) || !std::isfinite(max_abs_alpha)) {
    throw NumericalError("displacer: bad displacement range");
  }
  double reach = max_abs_alpha + std::sqrt(static_cast<double>(max_level)) + 5.0;
  work_ = std::max<Index>(dim + 8, static_cast<Index>(std::ceil(reach * reach)));
  Matrix a = annihilation(work_);
  Matrix k = Complex(0, 1) * (a.adjoint() - a);
  Eigen::SelfAdjointEigenSolver<Matrix> es(k);
  if (es.info() != Eigen::Success) throw NumericalError("displacer: eigensolver failed");
  kappa_ = es.eigenvalues();
  top_ = es.eigenvectors().topRows(dim);
}

Matrix Displacer::apply(Complex alpha, const Matrix& cols) const {
  require_same_dim(cols.rows(), dim_, "displacer");
  double r = std::abs(alpha);
  if (r > max_abs_ * (1 + 1e-12) + 1e-12) {
    std::ostringstream s;
    s << "displacer: |alpha| = " << r << " exceeds the prepared range " << max_abs_;
    throw NumericalError(s.str());
  }
  double phi = std::arg(alpha);
  // D(alpha) = U D(|alpha|) U^dag with U = exp(i phi n), D(r) = exp(-i r K).
  Vector phase(dim_);
  for (Index n = 0; n < dim_; ++n) phase(n) = std::polar(1.0, phi * static_cast<double>(n));
  Vector rot(kappa_.size());
  for (Index j = 0; j < kappa_.size(); ++j) rot(j) = std::polar(1.0, -r * kappa_(j));
  Matrix z = top_.adjoint() * (phase.conjugate().asDiagonal() * cols);
  z = rot.asDiagonal() * z;
  return phase.asDiagonal() * (top_ * z);
}

Ket coherent_state(Complex alpha, Index dim) {
  Displacer d(dim, std::abs(alpha));
  return Ket(d.apply(alpha, Ket::basis(dim, 0).amplitudes()));
}

DensityOperator parity_conjugate(const DensityOperator& rho) {
  Matrix m = rho.matrix().conjugate();
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if ((i + j) % 2) m(i, j) = -m(i, j);
    }
  }
  return DensityOperator(m);
}

}  // namespace pomest::fock
