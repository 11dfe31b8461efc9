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

#include "pomest/naimark.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "pomest/errors.hpp"
#include "pomest/random.hpp"

namespace pomest {

HermitianOperator NaimarkExtension::extended_operator(const std::vector<double>& f) const {
  if (f.size() != projections.size()) {
    throw DimensionMismatch("extended operator: one value per outcome");
  }
  Matrix m = Matrix::Zero(dim(), dim());
  for (std::size_t k = 0; k < f.size(); ++k) m += f[k] * projections[k].matrix();
  return HermitianOperator(m);
}

PomPtr NaimarkExtension::extended_pom(const Pom& original) const {
  std::vector<PomOutcome> outs;
  for (std::size_t k = 0; k < projections.size(); ++k) {
    // P_k = U^dag |.,k><.,k| U, so its range is spanned by rows of U.
    Matrix f(dim(), sys_dim);
    for (Index s = 0; s < sys_dim; ++s) {
      f.col(s) = unitary.row(s * anc_dim + static_cast<Index>(k)).adjoint();
    }
    outs.push_back({original[k].label, values[k], 1.0, std::move(f)});
  }
  return std::make_shared<const Pom>(original.id() + "-naimark", dim(), std::move(outs));
}

namespace {

/// Orthogonalizes v against the first n columns of q, twice.
void project_out(const Matrix& q, Index n, Vector& v) {
  for (int pass = 0; pass < 2; ++pass) {
    if (n > 0) v -= q.leftCols(n) * (q.leftCols(n).adjoint() * v);
  }
}

}  // namespace

NaimarkExtension naimark_extend(const Pom& pom) {
  const Index d = pom.dim();
  const Index k_out = static_cast<Index>(pom.size());
  const Index n = d * k_out;

  // Isometry columns V e_s, ancilla index minor.
  Matrix v = Matrix::Zero(n, d);
  for (Index k = 0; k < k_out; ++k) {
    const auto& o = pom[static_cast<std::size_t>(k)];
    Eigen::SelfAdjointEigenSolver<Matrix> es(o.weight * o.matrix());
    Matrix root = es.operatorSqrt();
    for (Index s = 0; s < d; ++s) {
      for (Index r = 0; r < d; ++r) v(r * k_out + k, s) = root(r, s);
    }
  }
  double iso = (v.adjoint() * v - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
  if (iso > 1e-10) {
    std::ostringstream s;
    s << "Naimark: isometry columns are not orthonormal (deviation " << iso
      << "); the POM is not complete";
    throw CompletenessError(s.str());
  }

  // Orthonormal basis: isometry columns first, then pivoted standard vectors.
  Matrix q(n, n);
  q.leftCols(d) = v;
  Index filled = d;
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  while (filled < n) {
    Index best = -1;
    double best_norm = -1;
    Vector best_vec;
    for (Index j = 0; j < n; ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      Vector e = Vector::Zero(n);
      e(j) = 1;
      project_out(q, filled, e);
      double nr = e.norm();
      if (nr > best_norm) {
        best_norm = nr;
        best = j;
        best_vec = e;
      }
    }
    if (best < 0 || best_norm < 1e-8) {
      throw NumericalError("Naimark: Gram-Schmidt completion degenerated");
    }
    used[static_cast<std::size_t>(best)] = true;
    best_vec /= best_norm;
    project_out(q, filled, best_vec);
    best_vec.normalize();
    q.col(filled++) = best_vec;
  }

  // Place isometry columns at |s,0> and the completion elsewhere.
  Matrix u(n, n);
  Index next = d;
  for (Index s = 0; s < d; ++s) {
    for (Index a = 0; a < k_out; ++a) {
      u.col(s * k_out + a) = a == 0 ? q.col(s) : q.col(next++);
    }
  }
  if ((u.adjoint() * u - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-10) {
    throw NumericalError("Naimark: completed matrix is not unitary");
  }

  NaimarkExtension ext;
  ext.sys_dim = d;
  ext.anc_dim = k_out;
  ext.unitary = u;
  ext.ancilla = DensityOperator::pure(Ket::basis(k_out, 0));
  for (Index k = 0; k < k_out; ++k) {
    Matrix rows(d, n);
    for (Index s = 0; s < d; ++s) rows.row(s) = u.row(s * k_out + k);
    ext.projections.emplace_back(rows.adjoint() * rows);
    ext.values.push_back(pom[static_cast<std::size_t>(k)].value);
  }

  Rng rng(0x5eed);
  for (int t = 0; t < 5; ++t) {
    DensityOperator rho = random_density(d, rng);
    Matrix joint = kron(rho.matrix(), ext.ancilla.matrix());
    std::vector<Complex> tr = pom.traces(rho.matrix());
    for (Index k = 0; k < k_out; ++k) {
      double p = pom[static_cast<std::size_t>(k)].weight * tr[static_cast<std::size_t>(k)].real();
      double pe = (joint * ext.projections[static_cast<std::size_t>(k)].matrix()).trace().real();
      if (std::abs(p - pe) > 1e-10) {
        throw NumericalError("Naimark: extension does not reproduce the outcome statistics");
      }
    }
  }
  return ext;
}

}  // namespace pomest
