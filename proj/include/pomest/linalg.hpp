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

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>

#include "pomest/tolerances.hpp"

namespace pomest {

using Complex = std::complex<double>;
using Index = Eigen::Index;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Unit vector. Construction normalizes; a zero vector is rejected.
class Ket {
 public:
  explicit Ket(Vector amplitudes);
  static Ket basis(Index dim, Index k);

  Index dim() const { return amp_.size(); }
  const Vector& amplitudes() const { return amp_; }
  Complex operator[](Index k) const { return amp_(k); }

 private:
  Vector amp_;
};

/// Square complex matrix equal to its adjoint. The stored matrix is
/// (M + M^dag)/2; input further than `tol` (max abs entry) from Hermitian
/// raises NotHermitian.
class HermitianOperator {
 public:
  explicit HermitianOperator(const Matrix& m, double tol = default_tolerances().hermiticity);
  static HermitianOperator identity(Index dim);
  static HermitianOperator diagonal(const RealVector& d);
  static HermitianOperator projector(const Ket& k);

  Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }

  HermitianOperator operator+(const HermitianOperator& o) const;
  HermitianOperator operator-(const HermitianOperator& o) const;
  HermitianOperator operator*(double s) const;
  HermitianOperator shifted(double c) const;  // this - c*1

 private:
  struct Trusted {};
  HermitianOperator(Matrix m, Trusted) : m_(std::move(m)) {}
  Matrix m_;
};

/// Hermitian, unit trace, positive semidefinite.
class DensityOperator {
 public:
  explicit DensityOperator(const Matrix& m, const Tolerances& tol = default_tolerances());
  static DensityOperator pure(const Ket& k);
  static DensityOperator maximally_mixed(Index dim);
  /// m / tr m, for thermal weights and the like.
  static DensityOperator from_unnormalized(const Matrix& m,
                                           const Tolerances& tol = default_tolerances());

  Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  double min_eigenvalue() const { return min_eig_; }
  double purity() const;

 private:
  Matrix m_;
  double min_eig_ = 0;
};

struct Eigensystem {
  RealVector values;  // ascending
  Matrix vectors;     // columns

  Matrix apply(const std::function<Complex(double)>& fn) const;
};

Eigensystem eigensystem(const HermitianOperator& op);
double min_eigenvalue(const Matrix& hermitian);
double max_eigenvalue(const Matrix& hermitian);

/// f(op) through the spectral decomposition.
HermitianOperator spectral_apply(const HermitianOperator& op,
                                 const std::function<double(double)>& fn);

/// Kronecker product, first factor is the major index.
Matrix kron(const Matrix& a, const Matrix& b);
Ket tensor(const Ket& a, const Ket& b);
HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b);
DensityOperator tensor(const DensityOperator& a, const DensityOperator& b);

/// sum_{s'} <s'| rho' op |s'> over the ancilla factor: the operator on the
/// system obtained by tracing op against the ancilla state.
HermitianOperator partial_trace_ancilla(const HermitianOperator& op, Index sys_dim,
                                        const DensityOperator& ancilla);

double expectation(const HermitianOperator& a, const DensityOperator& rho);
double variance(const HermitianOperator& a, const DensityOperator& rho);
/// |Im tr[rho (AB - BA)]|
double commutator_magnitude(const HermitianOperator& a, const HermitianOperator& b,
                            const DensityOperator& rho);

void require_same_dim(Index a, Index b, const char* what);

}  // namespace pomest
