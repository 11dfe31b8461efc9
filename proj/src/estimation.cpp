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

#include "pomest/estimation.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "pomest/errors.hpp"

namespace pomest {

const char* to_string(EstimatorKind k) {
  switch (k) {
    case EstimatorKind::optimal_with_state: return "optimal-with-state";
    case EstimatorKind::optimal_pure: return "optimal-pure";
    case EstimatorKind::no_info: return "no-info";
    case EstimatorKind::unbiased_corrected: return "unbiased-corrected";
    case EstimatorKind::linear: return "linear";
    case EstimatorKind::custom: return "custom";
  }
  return "custom";
}

EstimatorKind estimator_kind_from_string(const std::string& s) {
  for (auto k : {EstimatorKind::optimal_with_state, EstimatorKind::optimal_pure,
                 EstimatorKind::no_info, EstimatorKind::unbiased_corrected, EstimatorKind::linear,
                 EstimatorKind::custom}) {
    if (s == to_string(k)) return k;
  }
  throw ConfigError("unknown estimator kind '" + s + "'");
}

const char* to_string(CorrectionResult::Method m) {
  switch (m) {
    case CorrectionResult::Method::scalar_shift: return "scalar_shift";
    case CorrectionResult::Method::spin_linear: return "spin_linear";
    case CorrectionResult::Method::linear_solve: return "linear_solve";
    case CorrectionResult::Method::not_correctable: return "not_correctable";
  }
  return "not_correctable";
}

Estimator::Estimator(PomPtr pom, std::vector<double> values, EstimatorKind kind,
                     std::vector<std::size_t> zero_probability, std::vector<std::size_t> out_of_range)
    : pom_(std::move(pom)),
      values_(std::move(values)),
      kind_(kind),
      zero_prob_(std::move(zero_probability)),
      out_of_range_(std::move(out_of_range)) {
  if (!pom_) throw InvalidPom("estimator: no POM");
  if (values_.size() != pom_->size()) {
    std::ostringstream s;
    s << "estimator: " << values_.size() << " values for " << pom_->size() << " outcomes";
    throw DimensionMismatch(s.str());
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw NumericalError("estimator: non-finite value");
  }
}

namespace {

std::vector<double> real_parts(const std::vector<Complex>& z) {
  std::vector<double> r(z.size());
  for (std::size_t k = 0; k < z.size(); ++k) r[k] = z[k].real();
  return r;
}

void check_dims(const HermitianOperator& a, const Pom& pom, const DensityOperator* rho) {
  require_same_dim(a.dim(), pom.dim(), "observable vs POM");
  if (rho) require_same_dim(rho->dim(), pom.dim(), "state vs POM");
}

std::vector<std::size_t> out_of_range(const HermitianOperator& a, const std::vector<double>& f,
                                      const std::vector<std::size_t>& skip) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.matrix(), Eigen::EigenvaluesOnly);
  double lo = es.eigenvalues().minCoeff();
  double hi = es.eigenvalues().maxCoeff();
  double slack = 1e-9 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
  std::vector<bool> skipped(f.size(), false);
  for (auto k : skip) skipped[k] = true;
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (!skipped[k] && (f[k] < lo - slack || f[k] > hi + slack)) out.push_back(k);
  }
  return out;
}

// Real coordinates of a Hermitian matrix: diagonal, then Re and Im above it.
Eigen::VectorXd hermitian_coords(const Matrix& m) {
  const Index d = m.rows();
  Eigen::VectorXd v(d * d);
  Index p = 0;
  for (Index i = 0; i < d; ++i) v(p++) = m(i, i).real();
  for (Index i = 0; i < d; ++i) {
    for (Index j = i + 1; j < d; ++j) {
      v(p++) = m(i, j).real();
      v(p++) = m(i, j).imag();
    }
  }
  return v;
}

}  // namespace

std::vector<double> probabilities(const Pom& pom, const DensityOperator& rho) {
  require_same_dim(rho.dim(), pom.dim(), "state vs POM");
  std::vector<double> p = real_parts(pom.traces(rho.matrix()));
  for (std::size_t k = 0; k < p.size(); ++k) p[k] *= pom[k].weight;
  return p;
}

double statistical_deviation_squared(const HermitianOperator& a, const Estimator& est,
                                     const DensityOperator& rho, const Tolerances& tol) {
  const Pom& pom = est.pom();
  check_dims(a, pom, &rho);
  const Matrix& am = a.matrix();
  const Matrix& r = rho.matrix();
  std::vector<Complex> t_ara = pom.traces(am * r * am);
  std::vector<Complex> t_ra = pom.traces(r * am);
  std::vector<Complex> t_r = pom.traces(r);
  double d2 = 0;
  for (std::size_t k = 0; k < pom.size(); ++k) {
    double f = est[k];
    d2 += pom[k].weight * (t_ara[k].real() - 2 * f * t_ra[k].real() + f * f * t_r[k].real());
  }
  if (d2 < -tol.negative_deviation) {
    std::ostringstream s;
    s << "statistical deviation squared is " << d2 << ", below zero beyond round-off";
    throw NumericalError(s.str());
  }
  return std::max(0.0, d2);
}

double statistical_deviation(const HermitianOperator& a, const Estimator& est,
                             const DensityOperator& rho, const Tolerances& tol) {
  return std::sqrt(statistical_deviation_squared(a, est, rho, tol));
}

double hs_distance_squared(const HermitianOperator& a, const Estimator& est) {
  const Pom& pom = est.pom();
  check_dims(a, pom, nullptr);
  const Matrix& am = a.matrix();
  std::vector<Complex> t_aa = pom.traces(am * am);
  std::vector<Complex> t_a = pom.traces(am);
  double d2 = 0;
  for (std::size_t k = 0; k < pom.size(); ++k) {
    double m = est[k];
    double tr_m = pom[k].factor.squaredNorm();
    d2 += pom[k].weight * (t_aa[k].real() - 2 * m * t_a[k].real() + m * m * tr_m);
  }
  return std::max(0.0, d2);
}

double hs_distance(const HermitianOperator& a, const Estimator& est) {
  return std::sqrt(hs_distance_squared(a, est));
}

double estimate_mean(const Estimator& est, const DensityOperator& rho) {
  std::vector<double> p = probabilities(est.pom(), rho);
  double m = 0;
  for (std::size_t k = 0; k < p.size(); ++k) m += p[k] * est[k];
  return m;
}

double dispersion(const Estimator& est, const DensityOperator& rho) {
  std::vector<double> p = probabilities(est.pom(), rho);
  double m = 0;
  for (std::size_t k = 0; k < p.size(); ++k) m += p[k] * est[k];
  double v = 0;
  for (std::size_t k = 0; k < p.size(); ++k) v += p[k] * (est[k] - m) * (est[k] - m);
  return std::sqrt(std::max(0.0, v));
}

EstimateStats estimate_stats(const HermitianOperator& a, const Estimator& est,
                             const DensityOperator& rho, const Tolerances& tol) {
  return {estimate_mean(est, rho), dispersion(est, rho),
          statistical_deviation(a, est, rho, tol)};
}

Estimator optimal_estimate(const HermitianOperator& a, PomPtr pom, const DensityOperator& rho,
                           const Tolerances& tol) {
  check_dims(a, *pom, &rho);
  const Matrix& r = rho.matrix();
  std::vector<Complex> t_ra = pom->traces(r * a.matrix());
  std::vector<Complex> t_r = pom->traces(r);
  std::vector<double> f(pom->size(), 0.0);
  std::vector<std::size_t> zero;
  for (std::size_t k = 0; k < pom->size(); ++k) {
    double q = t_r[k].real();
    if ((*pom)[k].weight * q < tol.zero_probability) {
      zero.push_back(k);
      continue;
    }
    f[k] = t_ra[k].real() / q;
  }
  auto oor = out_of_range(a, f, zero);
  EstimatorKind kind = std::abs(rho.purity() - 1) < 1e-10 ? EstimatorKind::optimal_pure
                                                          : EstimatorKind::optimal_with_state;
  return Estimator(std::move(pom), std::move(f), kind, std::move(zero), std::move(oor));
}

Estimator optimal_estimate_no_info(const HermitianOperator& a, PomPtr pom) {
  check_dims(a, *pom, nullptr);
  std::vector<Complex> t_a = pom->traces(a.matrix());
  std::vector<double> f(pom->size());
  for (std::size_t k = 0; k < pom->size(); ++k) {
    double tr_m = (*pom)[k].factor.squaredNorm();
    if (!(tr_m > 0)) {
      throw InvalidPom("no-info estimate: outcome " + (*pom)[k].label + " has a zero-trace operator");
    }
    f[k] = t_a[k].real() / tr_m;
  }
  auto oor = out_of_range(a, f, {});
  return Estimator(std::move(pom), std::move(f), EstimatorKind::no_info, {}, std::move(oor));
}

Estimator outcome_value_estimator(PomPtr pom, std::size_t component) {
  std::vector<double> f(pom->size());
  for (std::size_t k = 0; k < pom->size(); ++k) {
    const auto& v = (*pom)[k].value;
    if (component >= v.size()) throw DimensionMismatch("outcome value has no such component");
    f[k] = v[component];
  }
  return Estimator(std::move(pom), std::move(f), EstimatorKind::custom);
}

Matrix bias_operator(const Estimator& est, const HermitianOperator& a) {
  check_dims(a, est.pom(), nullptr);
  return est.pom().weighted_sum(est.values()) - a.matrix();
}

bool is_universally_unbiased(const Estimator& est, const HermitianOperator& a,
                             const Tolerances& tol) {
  return bias_operator(est, a).cwiseAbs().maxCoeff() <= tol.unbiasedness;
}

CorrectionResult unbiased_correction(const Estimator& est, const HermitianOperator& a,
                                     const Tolerances& tol) {
  const Pom& pom = est.pom();
  const Index d = pom.dim();
  CorrectionResult res;
  Matrix b = bias_operator(est, a);
  Complex r = b.trace() / static_cast<double>(d);
  Matrix rest = b;
  rest.diagonal().array() -= r;
  if (rest.cwiseAbs().maxCoeff() <= tol.unbiasedness) {
    std::vector<double> g = est.values();
    for (double& x : g) x -= r.real();
    res.method = CorrectionResult::Method::scalar_shift;
    res.shift = r.real();
    res.estimator.emplace(est.pom_ptr(), std::move(g), EstimatorKind::unbiased_corrected);
    res.residual = bias_operator(*res.estimator, a).cwiseAbs().maxCoeff();
    return res;
  }

  if (pom.info().family == PomFamily::spin && d == 2) {
    const auto& s = pauli();
    Eigen::Matrix3d lam = Eigen::Matrix3d::Zero();
    std::vector<Eigen::Vector3d> dirs;
    for (const auto& o : pom.outcomes()) {
      Matrix m = o.weight * o.matrix();
      double q = m.trace().real() / 2;
      Eigen::Vector3d v = Eigen::Vector3d::Zero();
      if (q > 0) {
        for (int i = 0; i < 3; ++i) v(i) = (m * s[static_cast<std::size_t>(i)]).trace().real() / (2 * q);
      }
      lam += q * v * v.transpose();
      dirs.push_back(v);
    }
    res.lambda = lam;
    if (std::abs(lam.determinant()) > 1e-12) {
      double a0 = a.matrix().trace().real() / 2;
      Eigen::Vector3d av;
      for (int i = 0; i < 3; ++i) av(i) = (a.matrix() * s[static_cast<std::size_t>(i)]).trace().real() / 2;
      Eigen::Vector3d coef = lam.inverse() * av;
      std::vector<double> g;
      for (const auto& v : dirs) g.push_back(a0 + coef.dot(v));
      Estimator e(est.pom_ptr(), std::move(g), EstimatorKind::unbiased_corrected);
      double resid = bias_operator(e, a).cwiseAbs().maxCoeff();
      if (resid <= tol.unbiasedness) {
        res.method = CorrectionResult::Method::spin_linear;
        res.residual = resid;
        res.estimator.emplace(std::move(e));
        return res;
      }
    }
  }

  // Weighted minimum-norm solution of sum_k w_k g_k M_k = A.
  const Index k_out = static_cast<Index>(pom.size());
  Eigen::MatrixXd g(d * d, k_out);
  Eigen::VectorXd scale(k_out);
  for (Index k = 0; k < k_out; ++k) {
    const auto& o = pom[static_cast<std::size_t>(k)];
    double w = o.weight * o.factor.squaredNorm();
    scale(k) = w > 0 ? 1 / std::sqrt(w) : 0;
    g.col(k) = hermitian_coords(o.weight * o.matrix()) * scale(k);
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(g);
  const Eigen::VectorXd rhs = hermitian_coords(a.matrix());
  Eigen::VectorXd h = cod.solve(rhs);
  for (int pass = 0; pass < 2; ++pass) h += cod.solve(rhs - g * h);
  std::vector<double> vals(static_cast<std::size_t>(k_out));
  for (Index k = 0; k < k_out; ++k) vals[static_cast<std::size_t>(k)] = scale(k) * h(k);
  Estimator e(est.pom_ptr(), std::move(vals), EstimatorKind::unbiased_corrected);
  res.residual = bias_operator(e, a).cwiseAbs().maxCoeff();
  if (res.residual <= tol.unbiasedness) {
    res.method = CorrectionResult::Method::linear_solve;
    res.estimator.emplace(std::move(e));
  }
  return res;
}

namespace {

void require_rank_one_basis(const Pom& pom, const char* what) {
  if (static_cast<Index>(pom.size()) != pom.dim()) {
    throw InvalidPom(std::string(what) + ": needs exactly dim outcomes");
  }
  for (const auto& o : pom.outcomes()) {
    if (o.factor.cols() != 1 || std::abs(o.weight * o.factor.squaredNorm() - 1) > 1e-10) {
      throw InvalidPom(std::string(what) + ": outcomes must be rank-one projectors");
    }
  }
}

}  // namespace

Estimator optimal_estimate_complete_pom(PomPtr a_pom, PomPtr m_pom, const DensityOperator& rho,
                                        const Tolerances& tol) {
  require_rank_one_basis(*a_pom, "complete POM for A");
  require_rank_one_basis(*m_pom, "complete POM for M");
  require_same_dim(a_pom->dim(), m_pom->dim(), "complete POM pair");
  for (const auto& oa : a_pom->outcomes()) {
    Vector ka = oa.factor.col(0).normalized();
    for (const auto& om : m_pom->outcomes()) {
      Vector km = om.factor.col(0).normalized();
      if (std::abs(ka.dot(km)) > 1 - 1e-10) {
        throw InvalidPom("complete POM pair: outcomes " + oa.label + " and " + om.label +
                         " are the same ket up to phase");
      }
    }
  }
  Matrix abar = Matrix::Zero(a_pom->dim(), a_pom->dim());
  for (const auto& oa : a_pom->outcomes()) abar += oa.scalar_value() * oa.weight * oa.matrix();
  return optimal_estimate(HermitianOperator(abar), std::move(m_pom), rho, tol);
}

RepeatabilityReport repeatability_check(const HermitianOperator& a, const HermitianOperator& m,
                                        const DensityOperator& rho, const Tolerances& tol) {
  require_same_dim(a.dim(), m.dim(), "repeatability");
  require_same_dim(a.dim(), rho.dim(), "repeatability");
  double comm = (a.matrix() * m.matrix() - m.matrix() * a.matrix()).cwiseAbs().maxCoeff();
  if (comm > tol.commutation) {
    std::ostringstream s;
    s << "repeatability: [A, M] has entries up to " << comm;
    throw CommutationViolation(s.str());
  }
  PomPtr pom = projective_pom(m);
  Matrix bar = Matrix::Zero(rho.dim(), rho.dim());
  for (const auto& o : pom->outcomes()) {
    Matrix p = o.weight * o.matrix();
    bar += p * rho.matrix() * p;
  }
  RepeatabilityReport rep{pom, DensityOperator(bar), {}, {}, 0, false};
  Estimator e1 = optimal_estimate(a, pom, rho, tol);
  Estimator e2 = optimal_estimate(a, pom, rep.rho_bar, tol);
  rep.estimate = e1.values();
  rep.estimate_bar = e2.values();
  double scale = std::max(1.0, a.matrix().cwiseAbs().maxCoeff());
  for (std::size_t k = 0; k < rep.estimate.size(); ++k) {
    rep.max_difference = std::max(rep.max_difference, std::abs(rep.estimate[k] - rep.estimate_bar[k]));
  }
  rep.passed = rep.max_difference <= 1e-10 * scale;
  return rep;
}

}  // namespace pomest
