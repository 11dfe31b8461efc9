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

#include <cmath>
#include <sstream>

#include "pomest/errors.hpp"
#include "pomest/fock.hpp"
#include "pomest/relations.hpp"

namespace pomest {

namespace {

Eigen::Matrix2d covariance(const std::vector<double>& p, const std::vector<double>& x,
                           const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    mx += p[k] * x[k];
    my += p[k] * y[k];
  }
  Eigen::Matrix2d c = Eigen::Matrix2d::Zero();
  for (std::size_t k = 0; k < p.size(); ++k) {
    double dx = x[k] - mx, dy = y[k] - my;
    c(0, 0) += p[k] * dx * dx;
    c(0, 1) += p[k] * dx * dy;
    c(1, 1) += p[k] * dy * dy;
  }
  c(1, 0) = c(0, 1);
  return c;
}

}  // namespace

HeterodyneAnalysis analyze_heterodyne(const DensityOperator& rho, PomPtr pom,
                                      const Tolerances& tol) {
  if (pom->info().family != PomFamily::coherent_grid || !pom->info().grid) {
    throw InvalidPom("heterodyne analysis needs a coherent-state grid POM");
  }
  const GridSpec& grid = *pom->info().grid;
  const Index d = pom->dim();
  require_same_dim(rho.dim(), d, "heterodyne state");
  const Index n = grid.points_per_axis;
  const double h = grid.spacing();
  const std::size_t total = pom->size();

  HermitianOperator x1 = fock::quadrature_x1(d);
  HermitianOperator x2 = fock::quadrature_x2(d);
  std::vector<double> p = probabilities(*pom, rho);
  Estimator e1 = optimal_estimate(x1, pom, rho, tol);
  Estimator e2 = optimal_estimate(x2, pom, rho, tol);
  std::vector<bool> zero(total, false);
  for (auto k : e1.zero_probability()) zero[k] = true;

  HeterodyneAnalysis an;
  an.purity = rho.purity();
  an.d1 = dispersion(e1, rho);
  an.d2 = dispersion(e2, rho);
  an.eps1 = statistical_deviation(x1, e1, rho, tol);
  an.eps2 = statistical_deviation(x2, e2, rho, tol);
  an.var1 = variance(x1, rho);
  an.var2 = variance(x2, rho);

  std::vector<double> a1(total), a2(total), g1(total, 0.0), g2(total, 0.0);
  for (std::size_t k = 0; k < total; ++k) {
    a1[k] = (*pom)[k].value[0];
    a2[k] = (*pom)[k].value[1];
    if (!zero[k]) {
      g1[k] = 4 * (e1[k] - a1[k]);
      g2[k] = 4 * (e2[k] - a2[k]);
    }
  }
  an.fisher.setZero();
  for (std::size_t k = 0; k < total; ++k) {
    an.fisher(0, 0) += p[k] * g1[k] * g1[k];
    an.fisher(0, 1) += p[k] * g1[k] * g2[k];
    an.fisher(1, 1) += p[k] * g2[k] * g2[k];
  }
  an.fisher(1, 0) = an.fisher(0, 1);
  an.cov_q = covariance(p, a1, a2);
  an.cov_opt = covariance(p, e1.values(), e2.values());

  // Marginals along each axis: F_j = sum over the line of (sum p g_j)^2 / sum p.
  for (Index i = 0; i < n; ++i) {
    double s1 = 0, q1 = 0, s2 = 0, q2 = 0;
    for (Index j = 0; j < n; ++j) {
      auto k1 = static_cast<std::size_t>(grid.flat(i, j));
      auto k2 = static_cast<std::size_t>(grid.flat(j, i));
      s1 += p[k1] * g1[k1];
      q1 += p[k1];
      s2 += p[k2] * g2[k2];
      q2 += p[k2];
    }
    if (q1 > tol.zero_probability) an.marginal_fisher1 += s1 * s1 / q1;
    if (q2 > tol.zero_probability) an.marginal_fisher2 += s2 * s2 / q2;
  }

  // Gradient of log Q from fourth-order differences of Q, interior only.
  auto q_at = [&](Index i, Index j) { return p[static_cast<std::size_t>(grid.flat(i, j))]; };
  double wsum = 0, werr = 0, pmax = 0;
  for (double x : p) pmax = std::max(pmax, x);
  an.fisher_fd.setZero();
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      auto k = static_cast<std::size_t>(grid.flat(i, j));
      if (i < 2 || j < 2 || i >= n - 2 || j >= n - 2) {
        an.excluded_mass += p[k];
        continue;
      }
      if (zero[k]) continue;
      double q = p[k];
      double d1 = (-q_at(i + 2, j) + 8 * q_at(i + 1, j) - 8 * q_at(i - 1, j) + q_at(i - 2, j)) /
                  (12 * h * q);
      double d2 = (-q_at(i, j + 2) + 8 * q_at(i, j + 1) - 8 * q_at(i, j - 1) + q_at(i, j - 2)) /
                  (12 * h * q);
      double r1 = a1[k] + d1 / 4 - e1[k];
      double r2 = a2[k] + d2 / 4 - e2[k];
      wsum += q;
      werr += q * (r1 * r1 + r2 * r2);
      if (q > 1e-8 * pmax) {
        an.crosscheck_max = std::max(an.crosscheck_max, std::sqrt(r1 * r1 + r2 * r2));
      }
      an.fisher_fd(0, 0) += q * d1 * d1;
      an.fisher_fd(0, 1) += q * d1 * d2;
      an.fisher_fd(1, 1) += q * d2 * d2;
    }
  }
  an.fisher_fd(1, 0) = an.fisher_fd(0, 1);
  an.crosscheck_rms = wsum > 0 ? std::sqrt(werr / wsum) : 0;
  if (an.crosscheck_rms > tol.grid_crosscheck) {
    std::ostringstream s;
    s << "heterodyne grid too coarse: the finite-difference gradient estimate differs from the "
      << "direct estimate by " << an.crosscheck_rms << " (weighted rms, limit "
      << tol.grid_crosscheck << ", spacing " << h << ")";
    throw GridResolutionError(s.str());
  }

  an.noinfo_d1 = dispersion(outcome_value_estimator(pom, 0), rho);
  an.noinfo_d2 = dispersion(outcome_value_estimator(pom, 1), rho);
  return an;
}

std::vector<RelationReport> heterodyne_suite(const DensityOperator& rho, PomPtr pom,
                                             const Tolerances& tol) {
  HeterodyneAnalysis an = analyze_heterodyne(rho, pom, tol);
  const GridSpec& g = *pom->info().grid;
  std::string dg = digest_of({&rho.matrix()},
                             {g.center.real(), g.center.imag(), g.radius,
                              static_cast<double>(g.points_per_axis)},
                             pom->id());
  const double ts = tol.grid_slack;
  const double tsat = tol.grid_saturation;
  double e1 = an.eps1 * an.eps1, e2 = an.eps2 * an.eps2;
  double f11 = an.fisher(0, 0), f22 = an.fisher(1, 1);
  std::vector<RelationReport> out;
  auto add = [&](RelationReport r) { out.push_back(std::move(r)); };

  add(make_report(RelationId::unbest, RelationKind::bound, an.d1 * an.d2, 0.125, ts, tsat, dg));
  out.back().details = {{"dispersion_1", an.d1}, {"dispersion_2", an.d2},
                        {"noinfo_product", an.noinfo_d1 * an.noinfo_d2}};
  add(make_report(RelationId::accbest, RelationKind::bound, e1 + e2, 0.25, ts, tsat, dg));
  out.back().details = {{"inaccuracy_1", an.eps1}, {"inaccuracy_2", an.eps2}, {"purity", an.purity}};
  add(make_report(RelationId::fishbound, RelationKind::bound, e1, f22 / 16, ts, tsat, dg, "x1"));
  add(make_report(RelationId::fishbound, RelationKind::bound, e2, f11 / 16, ts, tsat, dg, "x2"));
  add(make_report(RelationId::tracefish, RelationKind::bound, 4, f11 + f22, ts, tsat, dg));
  out.back().details = {{"fisher_11", f11}, {"fisher_22", f22}, {"fisher_12", an.fisher(0, 1)},
                        {"fd_fisher_11", an.fisher_fd(0, 0)}, {"fd_fisher_22", an.fisher_fd(1, 1)},
                        {"fd_excluded_mass", an.excluded_mass}};
  add(make_report(RelationId::trace_identity, RelationKind::equality, e1 + e2,
                  0.5 - (f11 + f22) / 16, ts, tsat, dg));
  Eigen::Matrix2d dev = an.cov_opt - (an.cov_q + an.fisher / 16 - 0.5 * Eigen::Matrix2d::Identity());
  add(make_report(RelationId::mat, RelationKind::equality, dev.cwiseAbs().maxCoeff(), 0, ts, tsat, dg));
  out.back().details = {{"cov_opt_11", an.cov_opt(0, 0)}, {"cov_opt_12", an.cov_opt(0, 1)},
                        {"cov_opt_22", an.cov_opt(1, 1)}, {"cov_q_11", an.cov_q(0, 0)},
                        {"cov_q_12", an.cov_q(0, 1)}, {"cov_q_22", an.cov_q(1, 1)}};
  add(make_report(RelationId::cramer_rao, RelationKind::bound, an.marginal_fisher1,
                  1 / an.cov_q(0, 0), ts, tsat, dg, "marginal1_vs_cov"));
  add(make_report(RelationId::cramer_rao, RelationKind::bound, f11, an.marginal_fisher1, ts, tsat, dg,
                  "fisher11_vs_marginal1"));
  add(make_report(RelationId::cramer_rao, RelationKind::bound, an.marginal_fisher2,
                  1 / an.cov_q(1, 1), ts, tsat, dg, "marginal2_vs_cov"));
  add(make_report(RelationId::cramer_rao, RelationKind::bound, f22, an.marginal_fisher2, ts, tsat, dg,
                  "fisher22_vs_marginal2"));
  add(make_report(RelationId::varsum, RelationKind::equality, an.var1, an.d1 * an.d1 + e1, ts, tsat,
                  dg, "x1"));
  add(make_report(RelationId::varsum, RelationKind::equality, an.var2, an.d2 * an.d2 + e2, ts, tsat,
                  dg, "x2"));
  RelationReport geom = check_geom(fock::quadrature_x1(pom->dim()), fock::quadrature_x2(pom->dim()),
                                   rho, tol);
  add(geom);
  double comm = 0.25;
  add(make_report(RelationId::ungen, RelationKind::bound,
                  an.d1 * an.eps2 + an.eps1 * an.d2 + an.eps1 * an.eps2, comm, ts, tsat, dg));
  for (auto& r : out) {
    r.details.emplace_back("crosscheck_rms", an.crosscheck_rms);
  }
  return out;
}

RelationReport check_uncanon(const DensityOperator& rho, PomPtr pom, double hbar,
                             const Tolerances& tol) {
  HeterodyneAnalysis an = analyze_heterodyne(rho, pom, tol);
  double scale = 2 * hbar;
  double product = scale * an.d1 * an.d2;
  double noinfo = scale * an.noinfo_d1 * an.noinfo_d2;
  const GridSpec& g = *pom->info().grid;
  auto r = make_report(RelationId::uncanon, RelationKind::bound, product, hbar / 4, tol.grid_slack,
                       tol.grid_saturation,
                       digest_of({&rho.matrix()}, {g.radius, static_cast<double>(g.points_per_axis), hbar},
                                 pom->id()));
  r.details = {{"hbar", hbar},
               {"optimal_product_over_hbar", product / hbar},
               {"noinfo_product", noinfo},
               {"noinfo_product_over_hbar", noinfo / hbar}};
  return r;
}

}  // namespace pomest
