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
#include <vector>

#include "pomest/estimation.hpp"
#include "pomest/linalg.hpp"
#include "pomest/pom.hpp"
#include "pomest/relations.hpp"

namespace pomest::scenarios {

// ---- thermal ensembles ----

struct ThermalEstimate {
  Estimator estimate;
  /// -d/dbeta ln tr[exp(-beta H) M_k] by central difference (NaN where the
  /// trace vanishes).
  std::vector<double> log_derivative;
  double max_mismatch = 0;  // max |estimate - log_derivative| over finite entries
};

/// Optimal estimate of H for rho = exp(-beta H)/Z. Energies are shifted by
/// the ground energy when `rescale` is set. Throws NumericalError if
/// beta * (E_max - E_min) > 700.
ThermalEstimate thermal_energy_estimate(const HermitianOperator& h, PomPtr pom, double beta,
                                        bool rescale = true);

struct OscillatorParams {
  double beta = 1;
  double hbar = 1;
  double mass = 1;
  double omega = 1;
  Index fock_dim = 0;  // 0: smallest N with exp(-beta E_{N-1}) < 1e-14, at least 12
};

struct OscillatorThermalReport {
  Index fock_dim = 0;
  double a_t = 0, b_t = 0;
  std::vector<double> positions;  // eigenvalues of the truncated X
  std::vector<double> estimate;
  std::vector<double> closed_form;  // a_t + b_t x^2
  std::vector<bool> trusted;        // truncation tail below 1e-8 at this node
  double max_closed_form_deviation = 0;  // over trusted nodes
  double max_derivative_mismatch = 0;
};

Index thermal_fock_dim(double beta, double hbar = 1, double omega = 1, double target = 1e-14,
                       Index min_dim = 12);
/// Position-measurement energy estimate for the thermal oscillator.
OscillatorThermalReport oscillator_thermal(const OscillatorParams& p);

// ---- quantum potential ----

/// Samples of psi at origin + i * spacing.
struct GridWavefunction {
  double origin = 0;
  double spacing = 0.01;
  Vector amplitudes;
  double hbar = 1;
  double mass = 1;

  double x(Index i) const { return origin + spacing * static_cast<double>(i); }
  /// Rescaled so that sum |psi|^2 h = 1.
  GridWavefunction normalized() const;
};

struct QuantumPotentialReport {
  std::vector<double> x;
  std::vector<double> kinetic;    // |S'|^2 / 2m
  std::vector<double> potential;  // V
  std::vector<double> quantum;    // -hbar^2 R'' / (2 m R)
  std::vector<double> estimate;   // kinetic + potential + quantum
  std::vector<double> matrix_estimate;  // optimal estimate of the discretized H
  std::vector<bool> near_node;    // |psi| <= 1e-12, or a grid edge
  double max_discrepancy = 0;     // between the two routes, away from nodes
};

QuantumPotentialReport quantum_potential_estimate(const GridWavefunction& psi,
                                                  const std::vector<double>& potential);

// ---- EPR pair ----

struct EprParams {
  double sigma = 0.1;
  double tau = 0.1;
  double a = 0;
  double p0 = 1;
  double hbar = 1;
};

struct EprGrid {
  Index nx = 256;
  Index ns = 256;
  double x_half_width = 0;  // 0: 5 hbar / tau
  double s_spacing = 0;     // 0: sigma / 8
};

struct EprReport {
  EprParams params;
  double delta_x = 0;      // dispersion of the x estimate
  double eps_x = 0;
  double delta_p = 0;      // dispersion of the optimal P estimate
  double eps_p = 0;
  double var_p = 0;
  double var_p_prime = 0;
  double ungen_lhs = 0;
  double ungen_rhs = 0;
  double max_relative_mismatch = 0;  // numeric only
  double max_estimate_error = 0;     // numeric only: weighted max |f - closed form|
  bool numeric = false;
};

/// P estimate from the P' result, closed form.
double epr_p_estimate(const EprParams& p, double p_prime);
EprReport epr_closed_form(const EprParams& p);
/// Builds psi(x, x') on a lattice sheared along the relative coordinate
/// s = x' - x + a, measures X and P' (discrete Fourier basis of s at fixed
/// x) and computes the optimal estimates. Throws GridResolutionError when
/// a length scale is under-resolved or the closed form is missed by more
/// than 1e-3 relative.
EprReport epr_numeric(const EprParams& p, const EprGrid& grid = {});

std::vector<RelationReport> epr_relations(const EprReport& r, const Tolerances& tol = default_tolerances());

// ---- linear estimates ----

struct LinearEstimateInputs {
  double mean_x = 0, var_x = 1;
  double mean_p = 0, var_p = 1;
  double var_xprime = 0.5, var_pprime = 0.5;
  double hbar = 1;
};

struct LinearComponent {
  double lambda = 0;
  double inaccuracy = 0;       // sqrt(S N / (S + N))
  double dispersion = 0;       // S / sqrt(S + N)
  double noinfo_inaccuracy = 0;  // sqrt(N), the raw reading
  double noinfo_dispersion = 0;  // sqrt(S + N)
  /// lambda x_J + (1 - lambda) mean
  double estimate(double reading, double mean) const { return lambda * reading + (1 - lambda) * mean; }
};

struct LinearReport {
  LinearComponent x, p;
  double joint_lhs = 0;  // D_X eps_P + eps_X D_P + eps_X eps_P
  double dispersion_product = 0;
};

/// Throws ConfigError unless var_x, var_p > 0 and var_xprime var_pprime =
/// hbar^2/4 within 1e-12 relative.
LinearReport linear_estimate(const LinearEstimateInputs& in);

enum class SqueezingRegime { interior, endpoint };
const char* to_string(SqueezingRegime r);

struct SqueezingReport {
  SqueezingRegime regime = SqueezingRegime::interior;
  SqueezingRegime predicted = SqueezingRegime::interior;  // interior iff D_X D_P <= 2 hbar
  bool candidates_tied = false;
  double best_ratio = 0;         // dX'/dP' at the optimum, 0 or inf at an endpoint
  double j_min = 0;
  double interior_ratio = 0;     // golden-section result
  double j_interior = 0;
  double j_endpoint = 0;         // D_X D_P
  double symmetric_ratio = 0;    // dX / dP
  double j_symmetric = 0;
  double product_at_optimum = 0;   // D_Xlin D_Plin
  double product_symmetric = 0;
  double uncertainty_product = 0;  // dX dP
  double hbar = 1;
};

/// J as a function of r = dX'/dP' with dX' dP' = hbar/2.
double squeezing_cost(double var_x, double var_p, double hbar, double ratio);
SqueezingReport optimize_squeezing(double var_x, double var_p, double hbar = 1);

}  // namespace pomest::scenarios
