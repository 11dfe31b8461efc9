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

#include "pomest/scenarios.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "pomest/errors.hpp"
#include "pomest/fock.hpp"

namespace pomest::scenarios {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

ThermalEstimate thermal_energy_estimate(const HermitianOperator& h, PomPtr pom, double beta,
                                        bool rescale) {
  if (!(beta > 0) || !std::isfinite(beta)) throw ConfigError("thermal: beta must be positive");
  Eigensystem es = eigensystem(h);
  double e_min = es.values.minCoeff();
  double e_max = es.values.maxCoeff();
  if (beta * (e_max - e_min) > 700) {
    std::ostringstream s;
    s << "thermal: beta * (E_max - E_min) = " << beta * (e_max - e_min)
      << " exceeds 700; exp(-beta H) is not representable";
    throw NumericalError(s.str());
  }
  double shift = rescale ? e_min : 0.0;
  if (!rescale && beta * std::max(std::abs(e_min), std::abs(e_max)) > 700) {
    throw NumericalError("thermal: exp(-beta H) overflows without rescaling");
  }
  auto boltzmann = [&](double b) {
    return es.apply([&](double e) { return Complex(std::exp(-b * (e - shift)), 0); });
  };
  DensityOperator rho = DensityOperator::from_unnormalized(boltzmann(beta));
  Estimator est = optimal_estimate(h, pom, rho);

  const double db = 1e-5 * beta;
  std::vector<Complex> zp = pom->traces(boltzmann(beta + db));
  std::vector<Complex> zm = pom->traces(boltzmann(beta - db));
  std::vector<double> ld(pom->size(), kNaN);
  std::vector<bool> zero(pom->size(), false);
  for (auto k : est.zero_probability()) zero[k] = true;
  double mism = 0;
  for (std::size_t k = 0; k < pom->size(); ++k) {
    if (zp[k].real() > 0 && zm[k].real() > 0) {
      ld[k] = shift - (std::log(zp[k].real()) - std::log(zm[k].real())) / (2 * db);
      if (!zero[k]) mism = std::max(mism, std::abs(ld[k] - est[k]));
    }
  }
  return ThermalEstimate{std::move(est), std::move(ld), mism};
}

Index thermal_fock_dim(double beta, double hbar, double omega, double target, Index min_dim) {
  Index n = 1;
  while (std::exp(-beta * hbar * omega * (static_cast<double>(n - 1) + 0.5)) >= target) ++n;
  return std::max(n, min_dim);
}

OscillatorThermalReport oscillator_thermal(const OscillatorParams& p) {
  OscillatorThermalReport r;
  r.fock_dim = p.fock_dim > 0 ? p.fock_dim : thermal_fock_dim(p.beta, p.hbar, p.omega);
  HermitianOperator h = fock::hamiltonian(r.fock_dim, p.hbar, p.omega);
  HermitianOperator x = fock::position(r.fock_dim, p.hbar, p.mass, p.omega);
  PomPtr pom = projective_pom(x, 1e-9, "position");
  ThermalEstimate te = thermal_energy_estimate(h, pom, p.beta);
  const double bw = p.beta * p.hbar * p.omega;
  r.a_t = 0.5 * p.hbar * p.omega / std::tanh(bw);
  r.b_t = 0.5 * p.mass * p.omega * p.omega / std::pow(std::cosh(bw / 2), 2);
  r.max_derivative_mismatch = te.max_mismatch;

  const double x0sq = p.hbar / (p.mass * p.omega);
  const double cramer = 1.086435 * 1.086435;
  // sum over dropped levels of (E_n + scale) exp(-beta (E_n - E_0))
  auto dropped = [&](double scale) {
    double s = 0;
    for (Index n = r.fock_dim; n < r.fock_dim + 100000; ++n) {
      double e = p.hbar * p.omega * (static_cast<double>(n) + 0.5);
      double t = (e + scale) * std::exp(-p.beta * (e - 0.5 * p.hbar * p.omega));
      s += t;
      if (t < 1e-30 * s || t == 0) break;
    }
    return s;
  };
  for (std::size_t k = 0; k < pom->size(); ++k) {
    double xv = (*pom)[k].scalar_value();
    double cf = r.a_t + r.b_t * xv * xv;
    double bound = cramer * std::exp(xv * xv / x0sq) * dropped(cf);
    bool ok = bound <= 1e-8 * std::max(1.0, cf);
    r.positions.push_back(xv);
    r.estimate.push_back(te.estimate[k]);
    r.closed_form.push_back(cf);
    r.trusted.push_back(ok);
    if (ok) {
      r.max_closed_form_deviation = std::max(r.max_closed_form_deviation, std::abs(te.estimate[k] - cf));
    }
  }
  return r;
}

GridWavefunction GridWavefunction::normalized() const {
  if (!(spacing > 0)) throw ConfigError("wavefunction: spacing must be positive");
  double n = std::sqrt(amplitudes.squaredNorm() * spacing);
  if (!(n > 0)) throw InvalidState("wavefunction: zero amplitude");
  GridWavefunction g = *this;
  g.amplitudes /= n;
  return g;
}

QuantumPotentialReport quantum_potential_estimate(const GridWavefunction& psi_in,
                                                  const std::vector<double>& potential) {
  GridWavefunction psi = psi_in.normalized();
  const Index n = psi.amplitudes.size();
  if (static_cast<Index>(potential.size()) != n) {
    throw DimensionMismatch("quantum potential: one potential value per grid point");
  }
  if (n < 3) throw DimensionMismatch("quantum potential: need at least 3 points");
  const double h = psi.spacing;
  const double hb = psi.hbar;
  const double m = psi.mass;
  const Vector& a = psi.amplitudes;

  QuantumPotentialReport r;
  for (Index i = 0; i < n; ++i) {
    r.x.push_back(psi.x(i));
    r.potential.push_back(potential[static_cast<std::size_t>(i)]);
    bool edge = i == 0 || i == n - 1;
    bool node = std::abs(a(i)) <= 1e-12;
    r.near_node.push_back(edge || node);
    if (edge || node) {
      r.kinetic.push_back(kNaN);
      r.quantum.push_back(kNaN);
      r.estimate.push_back(kNaN);
      continue;
    }
    Complex d = (a(i + 1) - a(i - 1)) / (2 * h);
    double sp = hb * (std::conj(a(i)) * d).imag() / std::norm(a(i));
    double rpp = (std::abs(a(i + 1)) - 2 * std::abs(a(i)) + std::abs(a(i - 1))) / (h * h);
    double kin = sp * sp / (2 * m);
    double q = -hb * hb / (2 * m) * rpp / std::abs(a(i));
    r.kinetic.push_back(kin);
    r.quantum.push_back(q);
    r.estimate.push_back(kin + potential[static_cast<std::size_t>(i)] + q);
  }

  Matrix hm = Matrix::Zero(n, n);
  const double c = hb * hb / (2 * m * h * h);
  for (Index i = 0; i < n; ++i) {
    hm(i, i) = 2 * c + potential[static_cast<std::size_t>(i)];
    if (i + 1 < n) {
      hm(i, i + 1) = -c;
      hm(i + 1, i) = -c;
    }
  }
  PomPtr pom = basis_pom(Matrix::Identity(n, n), std::vector<double>(r.x.begin(), r.x.end()), "position");
  Vector v = a * std::sqrt(h);
  Estimator est = optimal_estimate(HermitianOperator(hm), pom, DensityOperator::pure(Ket(v)));
  std::vector<bool> zero(static_cast<std::size_t>(n), false);
  for (auto k : est.zero_probability()) zero[k] = true;
  for (Index i = 0; i < n; ++i) {
    auto k = static_cast<std::size_t>(i);
    r.matrix_estimate.push_back(zero[k] ? kNaN : est[k]);
    if (!r.near_node[k] && !zero[k]) {
      r.max_discrepancy = std::max(r.max_discrepancy, std::abs(r.estimate[k] - est[k]));
    }
  }
  return r;
}

LinearReport linear_estimate(const LinearEstimateInputs& in) {
  if (!(in.var_x > 0) || !(in.var_p > 0)) throw ConfigError("linear estimate: prior variances must be positive");
  if (!(in.var_xprime > 0) || !(in.var_pprime > 0) || !(in.hbar > 0)) {
    throw ConfigError("linear estimate: auxiliary variances and hbar must be positive");
  }
  double target = in.hbar * in.hbar / 4;
  if (std::abs(in.var_xprime * in.var_pprime - target) > 1e-12 * target) {
    throw ConfigError("linear estimate: var_xprime * var_pprime must equal hbar^2/4");
  }
  auto comp = [](double s, double n) {
    LinearComponent c;
    c.lambda = s / (s + n);
    c.inaccuracy = std::sqrt(s * n / (s + n));
    c.dispersion = s / std::sqrt(s + n);
    c.noinfo_inaccuracy = std::sqrt(n);
    c.noinfo_dispersion = std::sqrt(s + n);
    return c;
  };
  LinearReport r;
  r.x = comp(in.var_x, in.var_xprime);
  r.p = comp(in.var_p, in.var_pprime);
  r.joint_lhs = r.x.dispersion * r.p.inaccuracy + r.x.inaccuracy * r.p.dispersion +
                r.x.inaccuracy * r.p.inaccuracy;
  r.dispersion_product = r.x.dispersion * r.p.dispersion;
  return r;
}

const char* to_string(SqueezingRegime r) {
  return r == SqueezingRegime::interior ? "interior" : "endpoint";
}

double squeezing_cost(double var_x, double var_p, double hbar, double ratio) {
  if (ratio <= 0 || std::isinf(ratio)) return std::sqrt(var_x * var_p);
  LinearEstimateInputs in{0, var_x, 0, var_p, hbar * ratio / 2, hbar / (2 * ratio), hbar};
  in.var_pprime = hbar * hbar / 4 / in.var_xprime;
  return linear_estimate(in).joint_lhs;
}

SqueezingReport optimize_squeezing(double var_x, double var_p, double hbar) {
  if (!(var_x > 0) || !(var_p > 0) || !(hbar > 0)) {
    throw ConfigError("squeezing: variances and hbar must be positive");
  }
  SqueezingReport r;
  r.hbar = hbar;
  r.uncertainty_product = std::sqrt(var_x * var_p);
  r.j_endpoint = r.uncertainty_product;
  r.symmetric_ratio = std::sqrt(var_x / var_p);
  r.j_symmetric = squeezing_cost(var_x, var_p, hbar, r.symmetric_ratio);
  r.predicted = r.uncertainty_product <= 2 * hbar ? SqueezingRegime::interior : SqueezingRegime::endpoint;

  auto j = [&](double t) { return squeezing_cost(var_x, var_p, hbar, std::exp(t)); };
  const double lo0 = -12, hi0 = 12;
  const double g = (std::sqrt(5.0) - 1) / 2;
  double lo = lo0, hi = hi0;
  double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
  double fc = j(c), fd = j(d);
  while (hi - lo > 1e-10) {
    if (fc <= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - g * (hi - lo);
      fc = j(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + g * (hi - lo);
      fd = j(d);
    }
  }
  double t = (lo + hi) / 2;
  r.interior_ratio = std::exp(t);
  r.j_interior = j(t);
  auto product_at = [&](double ratio) {
    LinearEstimateInputs in{0, var_x, 0, var_p, hbar * ratio / 2, 0, hbar};
    in.var_pprime = hbar * hbar / 4 / in.var_xprime;
    return linear_estimate(in).dispersion_product;
  };
  r.product_symmetric = product_at(r.symmetric_ratio);

  const double scale = r.j_endpoint;
  r.candidates_tied = std::abs(r.j_interior - r.j_endpoint) <= 1e-9 * scale;
  bool at_edge = t - lo0 < 1e-6 || hi0 - t < 1e-6;
  if (!at_edge && r.j_interior < r.j_endpoint) {
    r.regime = SqueezingRegime::interior;
    r.best_ratio = r.interior_ratio;
    r.j_min = r.j_interior;
    r.product_at_optimum = product_at(r.best_ratio);
  } else {
    r.regime = SqueezingRegime::endpoint;
    r.best_ratio = t < 0 ? 0.0 : std::numeric_limits<double>::infinity();
    r.j_min = r.j_endpoint;
    r.product_at_optimum = 0;
  }
  return r;
}

}  // namespace pomest::scenarios
