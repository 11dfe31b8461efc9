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

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pomest/linalg.hpp"

namespace pomest {

enum class PomFamily { generic, projective, coherent_grid, imageband_grid, photon_counting, spin };

const char* to_string(PomFamily f);

/// Square phase-space grid: points_per_axis^2 points spaced evenly over
/// [center - radius, center + radius] along both axes.
struct GridSpec {
  Complex center{0, 0};
  double radius = 6;
  Index points_per_axis = 81;

  double spacing() const;
  Complex point(Index i, Index j) const;  // i along Re, j along Im
  Index flat(Index i, Index j) const { return i * points_per_axis + j; }
  double max_abs() const;
};

/// One outcome. The operator is factor * factor^dag, so it is positive by
/// construction; the probability of the outcome is weight * tr[rho op].
struct PomOutcome {
  std::string label;
  std::vector<double> value;  // 1, 2 or 3 components
  double weight = 1;
  Matrix factor;

  Matrix matrix() const { return factor * factor.adjoint(); }
  HermitianOperator op() const { return HermitianOperator(matrix()); }
  double scalar_value() const;
};

/// Dense form, as read from JSON. Not checked.
struct RawPomOutcome {
  std::string label;
  std::vector<double> value;
  double weight = 1;
  Matrix matrix;
};

struct RawPom {
  std::string id;
  Index dim = 0;
  std::vector<RawPomOutcome> outcomes;
};

struct PomInfo {
  PomFamily family = PomFamily::generic;
  std::optional<GridSpec> grid;
  /// max |lambda(T) - 1| of the raw grid completeness operator T before
  /// the T^{-1/2} renormalization.
  double renormalization_correction = 0;
  /// Photon counting: outcomes below this count satisfy the tail bound.
  Index reliable_outcomes = 0;
  double efficiency = 1;
};

class Pom {
 public:
  Pom(std::string id, Index dim, std::vector<PomOutcome> outcomes, PomInfo info = {});

  const std::string& id() const { return id_; }
  Index dim() const { return dim_; }
  std::size_t size() const { return outcomes_.size(); }
  const PomOutcome& operator[](std::size_t k) const { return outcomes_[k]; }
  const std::vector<PomOutcome>& outcomes() const { return outcomes_; }
  const PomInfo& info() const { return info_; }
  std::size_t value_components() const { return outcomes_.front().value.size(); }

  /// tr[x M_k] for every outcome (weights not applied).
  std::vector<Complex> traces(const Matrix& x) const;
  /// sum_k w_k M_k
  Matrix completeness_operator() const;
  /// sum_k w_k f_k M_k
  Matrix weighted_sum(const std::vector<double>& f) const;
  RawPom to_raw() const;

 private:
  std::string id_;
  Index dim_;
  std::vector<PomOutcome> outcomes_;
  PomInfo info_;
};

using PomPtr = std::shared_ptr<const Pom>;

struct OutcomeCheck {
  std::string label;
  double min_eigenvalue = 0;
  double hermiticity_error = 0;
};

struct ValidationReport {
  std::string pom_id;
  Index dim = 0;
  std::vector<OutcomeCheck> outcomes;
  double min_eigenvalue = 0;
  double completeness_deviation = 0;  // max |(sum w M - 1)_ij|
  double max_hermiticity_error = 0;
  bool weights_ok = true;
  bool values_ok = true;
  bool positive = true;
  bool complete = true;
  bool hermitian = true;
  bool passed = true;
  std::vector<std::string> problems;
};

ValidationReport validate(const RawPom& pom, const Tolerances& tol = default_tolerances());
ValidationReport validate(const Pom& pom, const Tolerances& tol = default_tolerances());

/// Checked conversion; throws InvalidPom listing the problems.
PomPtr make_pom(const RawPom& raw, const Tolerances& tol = default_tolerances());

/// Spectral projectors of m, eigenvalues within degeneracy_tol grouped.
PomPtr projective_pom(const HermitianOperator& m, double degeneracy_tol = 1e-9,
                      std::string id = "projective");
/// Rank-one projectors onto the columns of a unitary.
PomPtr basis_pom(const Matrix& unitary, const std::vector<double>& values,
                 std::string id = "basis");

/// pi^{-1}|alpha><alpha| on the grid, renormalized to sum to the identity
/// on the truncated space. Throws CompletenessError when the renormalization
/// would move T by more than tol.max_grid_correction.
PomPtr coherent_pom(Index fock_dim, const GridSpec& grid,
                    const Tolerances& tol = default_tolerances());
/// pi^{-1} D(alpha) rho' D(alpha)^dag with rho' the parity conjugate of the
/// image-band state.
PomPtr imageband_pom(Index fock_dim, const GridSpec& grid, const DensityOperator& imageband,
                     const Tolerances& tol = default_tolerances());

/// Photon counting with efficiency eta on Fock levels 0..fock_dim-1.
/// Outcome m has operator sum_r C(m+r,r) eta^m (1-eta)^r |m+r><m+r|.
/// The default max_outcome is the largest m whose dropped tail
/// sum_{n>=fock_dim} C(n,m) eta^m (1-eta)^{n-m} is below 1e-10; asking for a
/// larger one throws TruncationError.
PomPtr inefficient_photon_pom(Index fock_dim, double eta,
                              std::optional<Index> max_outcome = std::nullopt,
                              double tail_tol = 1e-10);

/// Qubit POM q_k (1 + sigma . m_k). Requires q_k >= 0, sum q = 1, |m_k| <= 1
/// and sum q_k m_k = 0.
PomPtr spin_pom(const std::vector<std::array<double, 3>>& directions,
                const std::vector<double>& probs, std::string id = "spin");

/// Pauli matrices x, y, z.
const std::array<Matrix, 3>& pauli();

}  // namespace pomest
