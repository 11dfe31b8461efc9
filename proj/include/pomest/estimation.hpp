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

#include <optional>
#include <string>
#include <vector>

#include "pomest/linalg.hpp"
#include "pomest/pom.hpp"

namespace pomest {

enum class EstimatorKind { optimal_with_state, optimal_pure, no_info, unbiased_corrected, linear, custom };

const char* to_string(EstimatorKind k);
EstimatorKind estimator_kind_from_string(const std::string& s);

/// Real value assigned to each outcome of a POM.
class Estimator {
 public:
  Estimator(PomPtr pom, std::vector<double> values, EstimatorKind kind,
            std::vector<std::size_t> zero_probability = {},
            std::vector<std::size_t> out_of_range = {});

  const Pom& pom() const { return *pom_; }
  const PomPtr& pom_ptr() const { return pom_; }
  const std::vector<double>& values() const { return values_; }
  double operator[](std::size_t k) const { return values_[k]; }
  std::size_t size() const { return values_.size(); }
  EstimatorKind kind() const { return kind_; }
  /// Outcomes whose probability was below the zero threshold; their value is 0.
  const std::vector<std::size_t>& zero_probability() const { return zero_prob_; }
  /// Outcomes whose value lies outside the spectrum of the estimated observable.
  const std::vector<std::size_t>& out_of_range() const { return out_of_range_; }

 private:
  PomPtr pom_;
  std::vector<double> values_;
  EstimatorKind kind_;
  std::vector<std::size_t> zero_prob_;
  std::vector<std::size_t> out_of_range_;
};

struct EstimateStats {
  double mean = 0;
  double dispersion = 0;  // rms spread of the estimate over the outcome distribution
  double inaccuracy = 0;  // statistical deviation from the observable
};

/// w_k tr[rho M_k]
std::vector<double> probabilities(const Pom& pom, const DensityOperator& rho);

/// sum_k w_k tr[(A - f_k) rho (A - f_k) M_k], clamped at 0. Throws
/// NumericalError when it comes out below -tol.negative_deviation.
double statistical_deviation_squared(const HermitianOperator& a, const Estimator& est,
                                     const DensityOperator& rho,
                                     const Tolerances& tol = default_tolerances());
double statistical_deviation(const HermitianOperator& a, const Estimator& est,
                             const DensityOperator& rho,
                             const Tolerances& tol = default_tolerances());

/// sum_k w_k tr[M_k (A - m_k)^2], the state-free distance.
double hs_distance_squared(const HermitianOperator& a, const Estimator& est);
double hs_distance(const HermitianOperator& a, const Estimator& est);

double estimate_mean(const Estimator& est, const DensityOperator& rho);
double dispersion(const Estimator& est, const DensityOperator& rho);
EstimateStats estimate_stats(const HermitianOperator& a, const Estimator& est,
                             const DensityOperator& rho,
                             const Tolerances& tol = default_tolerances());

/// f_k = tr[rho (M_k A + A M_k)] / (2 tr[rho M_k]).
Estimator optimal_estimate(const HermitianOperator& a, PomPtr pom, const DensityOperator& rho,
                           const Tolerances& tol = default_tolerances());
/// f_k = tr[A M_k] / tr[M_k].
Estimator optimal_estimate_no_info(const HermitianOperator& a, PomPtr pom);
/// f_k = component `c` of the outcome value.
Estimator outcome_value_estimator(PomPtr pom, std::size_t component = 0);

/// sum_k w_k f_k M_k - A
Matrix bias_operator(const Estimator& est, const HermitianOperator& a);
bool is_universally_unbiased(const Estimator& est, const HermitianOperator& a,
                             const Tolerances& tol = default_tolerances());

struct CorrectionResult {
  enum class Method { scalar_shift, spin_linear, linear_solve, not_correctable };
  Method method = Method::not_correctable;
  std::optional<Estimator> estimator;
  double shift = 0;         // scalar_shift: r with bias = r 1
  double residual = 0;      // max |entry| of the remaining bias operator
  Eigen::Matrix3d lambda = Eigen::Matrix3d::Zero();  // spin_linear: sum q m m^T
};

const char* to_string(CorrectionResult::Method m);

/// Universally unbiased replacement for `est`. A bias equal to r 1 gives
/// f - r; a qubit POM q_k(1 + sigma.m_k) gives a0 + a^T Lambda^{-1} m_k for
/// A = a0 + a.sigma. Otherwise the values g minimizing
/// sum w_k tr[M_k] g_k^2 subject to sum w_k g_k M_k = A are used when that
/// system is solvable; if not, the method is not_correctable.
CorrectionResult unbiased_correction(const Estimator& est, const HermitianOperator& a,
                                     const Tolerances& tol = default_tolerances());

/// Optimal estimate of Abar = sum a |a><a| built from the complete
/// rank-one POM `a_pom`, read out from the complete rank-one POM `m_pom`.
/// Throws InvalidPom if either is not a complete set of rank-one
/// projectors or if any pair of kets coincide up to phase.
Estimator optimal_estimate_complete_pom(PomPtr a_pom, PomPtr m_pom, const DensityOperator& rho,
                                        const Tolerances& tol = default_tolerances());

struct RepeatabilityReport {
  PomPtr pom;
  DensityOperator rho_bar = DensityOperator::maximally_mixed(1);
  std::vector<double> estimate;      // from rho
  std::vector<double> estimate_bar;  // from sum_k M_k rho M_k
  double max_difference = 0;
  bool passed = false;
};

/// Estimating A from the spectral projectors of M with [A, M] = 0. Throws
/// CommutationViolation when the commutator exceeds tol.commutation.
RepeatabilityReport repeatability_check(const HermitianOperator& a, const HermitianOperator& m,
                                        const DensityOperator& rho,
                                        const Tolerances& tol = default_tolerances());

}  // namespace pomest
