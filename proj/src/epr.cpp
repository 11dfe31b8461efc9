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

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <numbers>
#include <sstream>

#include "pomest/errors.hpp"
#include "pomest/scenarios.hpp"

namespace pomest::scenarios {

namespace {

void check_params(const EprParams& p) {
  if (!(p.sigma > 0) || !(p.tau > 0) || !(p.hbar > 0)) {
    throw ConfigError("EPR: sigma, tau and hbar must be positive");
  }
  if (!std::isfinite(p.a) || !std::isfinite(p.p0)) throw ConfigError("EPR: a and p0 must be finite");
}

/// Angular wavenumbers of an n-point FFT with spacing h; Nyquist mode zeroed.
std::vector<double> wavenumbers(Index n, double h) {
  std::vector<double> k(static_cast<std::size_t>(n));
  for (Index m = 0; m < n; ++m) {
    Index s = m < n / 2 ? m : m - n;
    if (n % 2 == 0 && m == n / 2) s = 0;
    k[static_cast<std::size_t>(m)] = 2 * std::numbers::pi * static_cast<double>(s) /
                                     (static_cast<double>(n) * h);
  }
  return k;
}

}  // namespace

double epr_p_estimate(const EprParams& p, double p_prime) {
  double h2 = p.hbar * p.hbar;
  double st = p.sigma * p.sigma * p.tau * p.tau;
  return (h2 * (p.p0 - p_prime) + st * p_prime) / (h2 + st);
}

EprReport epr_closed_form(const EprParams& p) {
  check_params(p);
  double h2 = p.hbar * p.hbar;
  double st = p.sigma * p.sigma * p.tau * p.tau;
  EprReport r;
  r.params = p;
  r.delta_x = std::sqrt(h2 + st) / (2 * p.tau);
  r.eps_x = 0;
  r.delta_p = std::abs(h2 - st) / (2 * p.sigma * std::sqrt(h2 + st));
  r.eps_p = p.hbar * p.tau / std::sqrt(h2 + st);
  r.var_p_prime = p.tau * p.tau / 4 + h2 / (4 * p.sigma * p.sigma);
  r.var_p = r.var_p_prime;
  r.ungen_lhs = r.delta_x * r.eps_p + r.eps_x * r.delta_p + r.eps_x * r.eps_p;
  r.ungen_rhs = p.hbar / 2;
  return r;
}

EprReport epr_numeric(const EprParams& p, const EprGrid& grid) {
  check_params(p);
  const Index nx = grid.nx, ns = grid.ns;
  if (nx < 8 || ns < 8) throw GridResolutionError("EPR: grid needs at least 8 points per axis");
  const double half = grid.x_half_width > 0 ? grid.x_half_width : 5 * p.hbar / p.tau;
  const double hs = grid.s_spacing > 0 ? grid.s_spacing : p.sigma / 8;
  const double hx = 2 * half / static_cast<double>(nx);
  const double xscale = p.hbar / p.tau;
  if (hs > p.sigma / 8 * (1 + 1e-12) || hx > xscale / 8 * (1 + 1e-12)) {
    std::ostringstream s;
    s << "EPR: grid does not resolve sigma and hbar/tau with 8 points each (spacings " << hx
      << ", " << hs << ")";
    throw GridResolutionError(s.str());
  }
  if (half < 4 * xscale || static_cast<double>(ns) * hs / 2 < 8 * p.sigma) {
    throw GridResolutionError("EPR: grid does not cover the wavefunction");
  }

  // psi(x, s) with s = x' - x + a, stored row-major in x.
  auto xi = [&](Index i) { return -half + hx * static_cast<double>(i); };
  auto sj = [&](Index j) { return hs * static_cast<double>(j - ns / 2); };
  std::vector<Complex> psi(static_cast<std::size_t>(nx * ns));
  auto at = [&](Index i, Index j) -> Complex& { return psi[static_cast<std::size_t>(i * ns + j)]; };
  double norm = 0;
  for (Index i = 0; i < nx; ++i) {
    for (Index j = 0; j < ns; ++j) {
      double s = sj(j);
      double sum = 2 * xi(i) + s - p.a;  // x + x'
      double mag = std::exp(-s * s / (4 * p.sigma * p.sigma) -
                            p.tau * p.tau * sum * sum / (4 * p.hbar * p.hbar));
      at(i, j) = std::polar(mag, p.p0 * sum / (2 * p.hbar));
      norm += mag * mag;
    }
  }
  for (auto& z : psi) z /= std::sqrt(norm);

  // P psi = -i hbar (d_x|_s - d_s) psi, spectral derivatives.
  Eigen::FFT<double> fft;
  std::vector<double> kx = wavenumbers(nx, hx);
  std::vector<double> ks = wavenumbers(ns, hs);
  std::vector<Complex> dpsi(psi.size());
  std::vector<Complex> line, spec;
  for (Index j = 0; j < ns; ++j) {
    line.assign(static_cast<std::size_t>(nx), 0);
    for (Index i = 0; i < nx; ++i) line[static_cast<std::size_t>(i)] = at(i, j);
    fft.fwd(spec, line);
    for (Index m = 0; m < nx; ++m) spec[static_cast<std::size_t>(m)] *= Complex(0, kx[static_cast<std::size_t>(m)]);
    fft.inv(line, spec);
    for (Index i = 0; i < nx; ++i) dpsi[static_cast<std::size_t>(i * ns + j)] = line[static_cast<std::size_t>(i)];
  }
  for (Index i = 0; i < nx; ++i) {
    line.assign(psi.begin() + i * ns, psi.begin() + (i + 1) * ns);
    fft.fwd(spec, line);
    for (Index m = 0; m < ns; ++m) spec[static_cast<std::size_t>(m)] *= Complex(0, ks[static_cast<std::size_t>(m)]);
    fft.inv(line, spec);
    for (Index j = 0; j < ns; ++j) dpsi[static_cast<std::size_t>(i * ns + j)] -= line[static_cast<std::size_t>(j)];
  }
  for (auto& z : dpsi) z *= Complex(0, -p.hbar);

  double mean_p = 0, p2 = 0;
  for (std::size_t k = 0; k < psi.size(); ++k) {
    mean_p += (std::conj(psi[k]) * dpsi[k]).real();
    p2 += std::norm(dpsi[k]);
  }

  // Outcomes (x_i, p'_k): unitary DFT over s at each x.
  const double inv_sqrt = 1 / std::sqrt(static_cast<double>(ns));
  double sx = 0, sxx = 0, sf = 0, sff = 0, d2 = 0, pmax = 0;
  std::vector<double> prob(psi.size()), est(psi.size()), pprime(psi.size());
  std::vector<Complex> a_line, b_line, a_spec, b_spec;
  for (Index i = 0; i < nx; ++i) {
    a_line.assign(psi.begin() + i * ns, psi.begin() + (i + 1) * ns);
    b_line.assign(dpsi.begin() + i * ns, dpsi.begin() + (i + 1) * ns);
    fft.fwd(a_spec, a_line);
    fft.fwd(b_spec, b_line);
    for (Index m = 0; m < ns; ++m) {
      auto idx = static_cast<std::size_t>(i * ns + m);
      Complex u = a_spec[static_cast<std::size_t>(m)] * inv_sqrt;
      Complex v = b_spec[static_cast<std::size_t>(m)] * inv_sqrt;
      double q = std::norm(u);
      double f = q >= 1e-14 ? (std::conj(u) * v).real() / q : 0.0;
      prob[idx] = q;
      est[idx] = f;
      pprime[idx] = p.hbar * ks[static_cast<std::size_t>(m)];
      double x = xi(i);
      sx += q * x;
      sxx += q * x * x;
      sf += q * f;
      sff += q * f * f;
      d2 += std::norm(v - f * u);
      pmax = std::max(pmax, q);
    }
  }

  EprReport r;
  r.params = p;
  r.numeric = true;
  r.delta_x = std::sqrt(std::max(0.0, sxx - sx * sx));
  r.eps_x = 0;  // the x reading estimates X with no deviation
  r.delta_p = std::sqrt(std::max(0.0, sff - sf * sf));
  r.eps_p = std::sqrt(std::max(0.0, d2));
  r.var_p = p2 - mean_p * mean_p;
  r.var_p_prime = epr_closed_form(p).var_p_prime;
  r.ungen_lhs = r.delta_x * r.eps_p + r.eps_x * r.delta_p + r.eps_x * r.eps_p;
  r.ungen_rhs = p.hbar / 2;
  for (std::size_t k = 0; k < prob.size(); ++k) {
    if (prob[k] > 1e-10 * pmax) {
      r.max_estimate_error =
          std::max(r.max_estimate_error, std::abs(est[k] - epr_p_estimate(p, pprime[k])));
    }
  }

  EprReport c = epr_closed_form(p);
  for (auto [num, ref] : {std::pair{r.delta_x, c.delta_x}, std::pair{r.delta_p, c.delta_p},
                          std::pair{r.eps_p, c.eps_p}, std::pair{r.ungen_lhs, c.ungen_lhs},
                          std::pair{r.var_p, c.var_p}}) {
    r.max_relative_mismatch = std::max(r.max_relative_mismatch, std::abs(num - ref) / std::abs(ref));
  }
  if (r.max_relative_mismatch > 1e-3) {
    std::ostringstream s;
    s << "EPR: numeric statistics differ from the closed form by " << r.max_relative_mismatch
      << " (relative); refine the grid";
    throw GridResolutionError(s.str());
  }
  return r;
}

std::vector<RelationReport> epr_relations(const EprReport& r, const Tolerances& tol) {
  double ts = r.numeric ? tol.grid_slack : tol.exact_slack;
  double tsat = r.numeric ? tol.grid_saturation : tol.exact_saturation;
  std::string dg = digest_of({}, {r.params.sigma, r.params.tau, r.params.a, r.params.p0,
                                  r.params.hbar, r.numeric ? 1.0 : 0.0}, "epr");
  std::vector<RelationReport> out;
  out.push_back(make_report(RelationId::ungen, RelationKind::bound, r.ungen_lhs, r.ungen_rhs, ts,
                            tsat, dg));
  out.back().details = {{"delta_x", r.delta_x}, {"eps_x", r.eps_x}, {"delta_p", r.delta_p},
                        {"eps_p", r.eps_p}};
  out.push_back(make_report(RelationId::varsum, RelationKind::equality, r.var_p,
                            r.delta_p * r.delta_p + r.eps_p * r.eps_p, ts, tsat, dg, "p"));
  return out;
}

}  // namespace pomest::scenarios
