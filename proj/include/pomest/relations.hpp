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

#include <string>
#include <utility>
#include <vector>

#include "pomest/estimation.hpp"
#include "pomest/linalg.hpp"
#include "pomest/pom.hpp"

namespace pomest {

enum class RelationId {
  varsum,          // Var A = Var(estimate) + eps^2
  geom,            // Delta A Delta B >= |<[A,B]>|/2
  accbound,        // eps^2 >= sum w |tr rho[A,M]|^2 / (4 tr rho M)
  ungen,           // joint estimates, general
  uni,             // joint estimates, universally unbiased
  unbest,          // heterodyne optimal estimates: D1 D2 >= 1/8
  accbest,         // heterodyne: eps1^2 + eps2^2 >= 1/4
  fishbound,       // heterodyne: eps_j^2 >= F_kk/16
  tracefish,       // F11 + F22 <= 4
  trace_identity,  // eps1^2 + eps2^2 = 1/2 - (F11 + F22)/16
  mat,             // C_opt = C_Q + F/16 - 1/2
  cramer_rao,      // F_j >= 1/C_Q,jj and F^Q_jj >= F_j
  uncanon,         // canonical pair from heterodyne quadratures
};

const char* to_string(RelationId id);
RelationId relation_id_from_string(const std::string& s);

enum class RelationKind { bound, equality };

/// Inequalities are stored as lhs >= rhs; slack = lhs - rhs. An inequality
/// passes when slack >= -tolerance, an equality when |slack| <= tolerance.
struct RelationReport {
  RelationId id = RelationId::varsum;
  RelationKind kind = RelationKind::bound;
  double lhs = 0;
  double rhs = 0;
  double slack = 0;
  bool saturated = false;
  bool passed = false;
  double tolerance = 0;
  double saturation_tol = 0;
  std::string label;  // distinguishes several reports with one id
  std::string inputs_digest;
  std::vector<std::pair<std::string, double>> details;
};

/// Fills slack, passed and saturated.
RelationReport make_report(RelationId id, RelationKind kind, double lhs, double rhs,
                           double tolerance, double saturation_tol, std::string digest,
                           std::string label = "");

/// FNV-1a over the given matrices and numbers, as hex.
std::string digest_of(const std::vector<const Matrix*>& mats, const std::vector<double>& nums = {},
                      const std::string& extra = "");

RelationReport check_varsum(const HermitianOperator& a, const Estimator& est,
                            const DensityOperator& rho,
                            const Tolerances& tol = default_tolerances());
RelationReport check_geom(const HermitianOperator& a, const HermitianOperator& b,
                          const DensityOperator& rho,
                          const Tolerances& tol = default_tolerances());
/// Optimal-estimate inaccuracy of A against its lower bound.
RelationReport check_accbound(const HermitianOperator& a, PomPtr pom, const DensityOperator& rho,
                              const Tolerances& tol = default_tolerances());
/// D_f eps_B + eps_A D_g + eps_A eps_B >= |<[A,B]>|/2 for any two estimates
/// from one POM.
RelationReport check_ungen(const HermitianOperator& a, const HermitianOperator& b,
                           const Estimator& fa, const Estimator& gb, const DensityOperator& rho,
                           const Tolerances& tol = default_tolerances());
/// eps_A eps_B >= |<[A,B]>|/2 for universally unbiased estimates; throws
/// UnbiasednessViolation otherwise.
RelationReport check_uni(const HermitianOperator& a, const HermitianOperator& b,
                         const Estimator& fa, const Estimator& gb, const DensityOperator& rho,
                         const Tolerances& tol = default_tolerances());

/// Everything the heterodyne relations need, from one coherent-state grid.
struct HeterodyneAnalysis {
  double d1 = 0, d2 = 0;        // dispersions of the optimal estimates
  double eps1 = 0, eps2 = 0;    // their inaccuracies
  double var1 = 0, var2 = 0;    // quadrature variances
  Eigen::Matrix2d fisher;       // sum p g g^T with g = grad log Q (exact gradient)
  Eigen::Matrix2d fisher_fd;    // same from finite differences, interior points
  Eigen::Matrix2d cov_q;        // covariance of alpha under Q
  Eigen::Matrix2d cov_opt;      // covariance of the optimal estimates
  double marginal_fisher1 = 0, marginal_fisher2 = 0;
  double crosscheck_rms = 0;    // probability-weighted rms, direct vs gradient estimate
  double crosscheck_max = 0;
  double excluded_mass = 0;     // probability on the stencil-free boundary band
  double noinfo_d1 = 0, noinfo_d2 = 0;
  double purity = 0;
};

/// Throws GridResolutionError when the gradient estimate alpha_j + (1/4)
/// d_j log Q, taken with fourth-order differences of Q, disagrees with the
/// direct optimal estimate by more than tol.grid_crosscheck (weighted rms).
HeterodyneAnalysis analyze_heterodyne(const DensityOperator& rho, PomPtr pom,
                                      const Tolerances& tol = default_tolerances());
std::vector<RelationReport> heterodyne_suite(const DensityOperator& rho, PomPtr pom,
                                             const Tolerances& tol = default_tolerances());
/// Quadratures mapped to a canonical pair with [x, p] = i hbar:
/// product of the optimal-estimate spreads, bounded below by hbar/4.
RelationReport check_uncanon(const DensityOperator& rho, PomPtr pom, double hbar = 0.5,
                             const Tolerances& tol = default_tolerances());

}  // namespace pomest
