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

#include "pomest/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "pomest/errors.hpp"

namespace pomest {

void require_same_dim(Index a, Index b, const char* what) {
  if (a != b) {
    std::ostringstream s;
    s << what << ": dimension " << a << " does not match " << b;
    throw DimensionMismatch(s.str());
  }
}

namespace {

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    std::ostringstream s;
    s << what << ": expected a non-empty square matrix, got " << m.rows() << "x" << m.cols();
    throw DimensionMismatch(s.str());
  }
}

Matrix hermitize(const Matrix& m, double tol, const char* what) {
  require_square(m, what);
  if (!m.allFinite()) throw NumericalError(std::string(what) + ": non-finite entries");
  double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (dev > tol) {
    std::ostringstream s;
    s << what << ": not Hermitian (max |M - M^dag| = " << dev << ")";
    throw NotHermitian(s.str());
  }
  return (m + m.adjoint()) * 0.5;
}

}  // namespace

Ket::Ket(Vector amplitudes) : amp_(std::move(amplitudes)) {
  if (amp_.size() == 0) throw DimensionMismatch("ket: empty vector");
  double n = amp_.norm();
  if (!(n > 0) || !std::isfinite(n)) throw InvalidState("ket: vector has zero or non-finite norm");
  amp_ /= n;
}

Ket Ket::basis(Index dim, Index k) {
  if (k < 0 || k >= dim) throw DimensionMismatch("ket: basis index out of range");
  Vector v = Vector::Zero(dim);
  v(k) = 1;
  return Ket(v);
}

HermitianOperator::HermitianOperator(const Matrix& m, double tol)
    : m_(hermitize(m, tol, "hermitian operator")) {}

HermitianOperator HermitianOperator::identity(Index dim) {
  return HermitianOperator(Matrix::Identity(dim, dim), Trusted{});
}

HermitianOperator HermitianOperator::diagonal(const RealVector& d) {
  return HermitianOperator(d.cast<Complex>().asDiagonal().toDenseMatrix(), Trusted{});
}

HermitianOperator HermitianOperator::projector(const Ket& k) {
  return HermitianOperator(k.amplitudes() * k.amplitudes().adjoint(), Trusted{});
}

HermitianOperator HermitianOperator::operator+(const HermitianOperator& o) const {
  require_same_dim(dim(), o.dim(), "operator sum");
  return HermitianOperator(m_ + o.m_, Trusted{});
}

HermitianOperator HermitianOperator::operator-(const HermitianOperator& o) const {
  require_same_dim(dim(), o.dim(), "operator difference");
  return HermitianOperator(m_ - o.m_, Trusted{});
}

HermitianOperator HermitianOperator::operator*(double s) const {
  return HermitianOperator(m_ * s, Trusted{});
}

HermitianOperator HermitianOperator::shifted(double c) const {
  Matrix m = m_;
  m.diagonal().array() -= c;
  return HermitianOperator(m, Trusted{});
}

DensityOperator::DensityOperator(const Matrix& m, const Tolerances& tol)
    : m_(hermitize(m, tol.hermiticity, "density operator")) {
  double tr = m_.trace().real();
  if (std::abs(tr - 1.0) > tol.trace) {
    std::ostringstream s;
    s << "density operator: trace " << tr << " differs from 1";
    throw InvalidState(s.str());
  }
  min_eig_ = pomest::min_eigenvalue(m_);
  if (min_eig_ < -tol.positivity) {
    std::ostringstream s;
    s << "density operator: eigenvalue " << min_eig_ << " below zero";
    throw NotPositive(s.str());
  }
}

DensityOperator DensityOperator::pure(const Ket& k) {
  return DensityOperator(k.amplitudes() * k.amplitudes().adjoint());
}

DensityOperator DensityOperator::maximally_mixed(Index dim) {
  return DensityOperator(Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

DensityOperator DensityOperator::from_unnormalized(const Matrix& m, const Tolerances& tol) {
  require_square(m, "density operator");
  double tr = m.trace().real();
  if (!(tr > 0) || !std::isfinite(tr)) {
    throw InvalidState("density operator: trace must be positive and finite");
  }
  return DensityOperator(m / tr, tol);
}

double DensityOperator::purity() const { return (m_ * m_).trace().real(); }

Matrix Eigensystem::apply(const std::function<Complex(double)>& fn) const {
  Vector d(values.size());
  for (Index i = 0; i < values.size(); ++i) d(i) = fn(values(i));
  return vectors * d.asDiagonal() * vectors.adjoint();
}

Eigensystem eigensystem(const HermitianOperator& op) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(op.matrix());
  if (es.info() != Eigen::Success) throw NumericalError("eigensolver did not converge");
  return Eigensystem{es.eigenvalues(), es.eigenvectors()};
}

double min_eigenvalue(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double max_eigenvalue(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(es.eigenvalues().size() - 1);
}

HermitianOperator spectral_apply(const HermitianOperator& op,
                                 const std::function<double(double)>& fn) {
  Eigensystem es = eigensystem(op);
  return HermitianOperator(es.apply([&](double x) { return Complex(fn(x), 0.0); }));
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Ket tensor(const Ket& a, const Ket& b) {
  return Ket(kron(a.amplitudes(), b.amplitudes()));
}

HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b) {
  return HermitianOperator(kron(a.matrix(), b.matrix()));
}

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
  return DensityOperator(kron(a.matrix(), b.matrix()));
}

HermitianOperator partial_trace_ancilla(const HermitianOperator& op, Index sys_dim,
                                        const DensityOperator& ancilla) {
  Index na = ancilla.dim();
  if (sys_dim <= 0 || op.dim() != sys_dim * na) {
    std::ostringstream s;
    s << "partial trace: operator dimension " << op.dim() << " is not " << sys_dim << " x " << na;
    throw DimensionMismatch(s.str());
  }
  const Matrix& m = op.matrix();
  const Matrix& r = ancilla.matrix();
  Matrix out = Matrix::Zero(sys_dim, sys_dim);
  for (Index i = 0; i < sys_dim; ++i) {
    for (Index j = 0; j < sys_dim; ++j) {
      Complex acc = 0;
      for (Index a = 0; a < na; ++a) {
        for (Index b = 0; b < na; ++b) acc += r(a, b) * m(i * na + b, j * na + a);
      }
      out(i, j) = acc;
    }
  }
  return HermitianOperator(out);
}

double expectation(const HermitianOperator& a, const DensityOperator& rho) {
  require_same_dim(a.dim(), rho.dim(), "expectation");
  return (rho.matrix() * a.matrix()).trace().real();
}

double variance(const HermitianOperator& a, const DensityOperator& rho) {
  double m = expectation(a, rho);
  double m2 = (rho.matrix() * a.matrix() * a.matrix()).trace().real();
  return std::max(0.0, m2 - m * m);
}

double commutator_magnitude(const HermitianOperator& a, const HermitianOperator& b,
                            const DensityOperator& rho) {
  require_same_dim(a.dim(), b.dim(), "commutator");
  require_same_dim(a.dim(), rho.dim(), "commutator");
  Matrix c = a.matrix() * b.matrix() - b.matrix() * a.matrix();
  return std::abs((rho.matrix() * c).trace().imag());
}

}  // namespace pomest
