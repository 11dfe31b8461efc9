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

#include "pomest/linalg.hpp"

// Truncated single-mode oscillator helpers.
namespace pomest::fock {

Matrix annihilation(Index dim);
HermitianOperator number(Index dim);
/// (a + a^dag)/2
HermitianOperator quadrature_x1(Index dim);
/// (a - a^dag)/2i
HermitianOperator quadrature_x2(Index dim);
/// sqrt(hbar/(2 m w)) (a + a^dag)
HermitianOperator position(Index dim, double hbar = 1, double mass = 1, double omega = 1);
/// hbar w (n + 1/2)
HermitianOperator hamiltonian(Index dim, double hbar = 1, double omega = 1);

/// Applies D(alpha) = exp(alpha a^dag - alpha* a) to vectors of the
/// truncated space. The exponential is taken in a larger working space of
/// (max|alpha| + sqrt(max_level) + 5)^2 levels and projected back, so that
/// P D(alpha) |k> matches the untruncated result for k <= max_level.
class Displacer {
 public:
  Displacer(Index dim, double max_abs_alpha, Index max_level = 0);

  Index dim() const { return dim_; }
  Index working_dim() const { return work_; }

  /// Columns of `cols` (dim rows) displaced and truncated.
  Matrix apply(Complex alpha, const Matrix& cols) const;

 private:
  Index dim_;
  Index work_;
  double max_abs_;
  Index max_level_;
  RealVector kappa_;  // eigenvalues of i(a^dag - a)
  Matrix top_;        // first dim_ rows of its eigenvectors
};

/// Truncated coherent state P|alpha>, renormalized.
Ket coherent_state(Complex alpha, Index dim);

/// sum |m><n| (-1)^{m+n} <m|rho|n>^*
DensityOperator parity_conjugate(const DensityOperator& rho);

}  // namespace pomest::fock
