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

#include "pomest/pom.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pomest/errors.hpp"
#include "pomest/fock.hpp"

namespace pomest {

const char* to_string(PomFamily f) {
  switch (f) {
    case PomFamily::generic: return "generic";
    case PomFamily::projective: return "projective";
    case PomFamily::coherent_grid: return "coherent_grid";
    case PomFamily::imageband_grid: return "imageband_grid";
    case PomFamily::photon_counting: return "photon_counting";
    case PomFamily::spin: return "spin";
  }
  return "generic";
}

double GridSpec::spacing() const {
  return 2 * radius / static_cast<double>(points_per_axis - 1);
}

Complex GridSpec::point(Index i, Index j) const {
  double h = spacing();
  return center + Complex(-radius + h * static_cast<double>(i), -radius + h * static_cast<double>(j));
}

double GridSpec::max_abs() const {
  double m = 0;
  for (double sx : {-1.0, 1.0}) {
    for (double sy : {-1.0, 1.0}) m = std::max(m, std::abs(center + Complex(sx, sy) * radius));
  }
  return m;
}

double PomOutcome::scalar_value() const {
  if (value.size() != 1) {
    throw InvalidPom("outcome " + label + " has a vector value where a scalar is needed");
  }
  return value[0];
}

namespace {

double completeness_deviation(const Matrix& t) {
  return (t - Matrix::Identity(t.rows(), t.cols())).cwiseAbs().maxCoeff();
}

void check_values(const std::vector<double>& v, std::size_t expect, const std::string& label) {
  if (v.empty() || v.size() > 3) {
    throw InvalidPom("outcome " + label + ": value must have 1 to 3 components");
  }
  if (expect != 0 && v.size() != expect) {
    throw InvalidPom("outcome " + label + ": value has a different shape from the others");
  }
  for (double x : v) {
    if (!std::isfinite(x)) throw InvalidPom("outcome " + label + ": non-finite value");
  }
}

/// Columns v sqrt(lambda) for the non-negative part of a Hermitian matrix.
Matrix psd_factor(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es((m + m.adjoint()) * 0.5);
  std::vector<Index> keep;
  for (Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()(i) > 0) keep.push_back(i);
  }
  Matrix f(m.rows(), static_cast<Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    f.col(static_cast<Index>(c)) =
        es.eigenvectors().col(keep[c]) * std::sqrt(es.eigenvalues()(keep[c]));
  }
  return f;
}

std::string grid_label(Index i, Index j) {
  return "g" + std::to_string(i) + "_" + std::to_string(j);
}

PomPtr grid_pom(Index fock_dim, const GridSpec& grid, const Matrix& seed, PomFamily family,
                const std::string& id, const Tolerances& tol) {
  if (grid.points_per_axis < 2) throw InvalidPom("grid: need at least 2 points per axis");
  if (!(grid.radius > 0) || !std::isfinite(grid.radius)) throw InvalidPom("grid: bad radius");
  Index top = 0;
  for (Index r = 0; r < seed.rows(); ++r) {
    if (seed.row(r).norm() > 0) top = r;
  }
  fock::Displacer disp(fock_dim, grid.max_abs(), top);
  const Index n = grid.points_per_axis;
  const double w = grid.spacing() * grid.spacing() / std::numbers::pi;

  std::vector<PomOutcome> outs;
  outs.reserve(static_cast<std::size_t>(n * n));
  Matrix t = Matrix::Zero(fock_dim, fock_dim);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      Complex a = grid.point(i, j);
      Matrix f = disp.apply(a, seed);
      t.noalias() += w * f * f.adjoint();
      outs.push_back(PomOutcome{grid_label(i, j), {a.real(), a.imag()}, w, std::move(f)});
    }
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(t);
  double corr = std::max(std::abs(es.eigenvalues().minCoeff() - 1.0),
                         std::abs(es.eigenvalues().maxCoeff() - 1.0));
  if (corr > tol.max_grid_correction) {
    std::ostringstream s;
    s << "grid POM: renormalization would change the completeness operator by " << corr
      << " (limit " << tol.max_grid_correction << "); enlarge the grid radius or reduce the Fock "
      << "dimension";
    throw CompletenessError(s.str());
  }
  Matrix s = es.operatorInverseSqrt();
  for (auto& o : outs) o.factor = s * o.factor;
  PomInfo info;
  info.family = family;
  info.grid = grid;
  info.renormalization_correction = corr;
  return std::make_shared<const Pom>(id, fock_dim, std::move(outs), info);
}

}  // namespace

Pom::Pom(std::string id, Index dim, std::vector<PomOutcome> outcomes, PomInfo info)
    : id_(std::move(id)), dim_(dim), outcomes_(std::move(outcomes)), info_(std::move(info)) {
  if (dim_ < 1) throw InvalidPom("POM: dimension must be positive");
  if (outcomes_.empty()) throw InvalidPom("POM: no outcomes");
  std::size_t shape = outcomes_.front().value.size();
  for (const auto& o : outcomes_) {
    check_values(o.value, shape, o.label);
    if (!(o.weight > 0) || !std::isfinite(o.weight)) {
      throw InvalidPom("outcome " + o.label + ": weight must be positive");
    }
    if (o.factor.rows() != dim_) {
      throw DimensionMismatch("outcome " + o.label + ": operator dimension mismatch");
    }
  }
  double dev = completeness_deviation(completeness_operator());
  if (dev > default_tolerances().completeness) {
    std::ostringstream s;
    s << "POM " << id_ << ": weighted operators sum to the identity only within " << dev;
    throw CompletenessError(s.str());
  }
}

std::vector<Complex> Pom::traces(const Matrix& x) const {
  require_same_dim(x.rows(), dim_, "POM trace");
  std::vector<Complex> out(outcomes_.size());
  for (std::size_t k = 0; k < outcomes_.size(); ++k) {
    const Matrix& f = outcomes_[k].factor;
    if (f.cols() == 1) {
      out[k] = f.col(0).dot(x * f.col(0));
    } else {
      out[k] = (f.adjoint() * x * f).trace();
    }
  }
  return out;
}

Matrix Pom::completeness_operator() const { return weighted_sum(std::vector<double>(size(), 1.0)); }

Matrix Pom::weighted_sum(const std::vector<double>& f) const {
  if (f.size() != outcomes_.size()) throw DimensionMismatch("weighted sum: wrong number of values");
  Matrix t = Matrix::Zero(dim_, dim_);
  for (std::size_t k = 0; k < outcomes_.size(); ++k) {
    const auto& o = outcomes_[k];
    t.noalias() += (o.weight * f[k]) * o.factor * o.factor.adjoint();
  }
  return t;
}

RawPom Pom::to_raw() const {
  RawPom r{id_, dim_, {}};
  for (const auto& o : outcomes_) r.outcomes.push_back({o.label, o.value, o.weight, o.matrix()});
  return r;
}

ValidationReport validate(const RawPom& pom, const Tolerances& tol) {
  ValidationReport rep;
  rep.pom_id = pom.id;
  rep.dim = pom.dim;
  auto problem = [&](const std::string& p) { rep.problems.push_back(p); };
  if (pom.dim < 1) problem("dimension must be positive");
  if (pom.outcomes.empty()) problem("no outcomes");
  if (!rep.problems.empty()) {
    rep.passed = false;
    return rep;
  }
  Matrix total = Matrix::Zero(pom.dim, pom.dim);
  rep.min_eigenvalue = std::numeric_limits<double>::infinity();
  std::size_t shape = pom.outcomes.front().value.size();
  for (const auto& o : pom.outcomes) {
    OutcomeCheck c{o.label, 0, 0};
    if (o.matrix.rows() != pom.dim || o.matrix.cols() != pom.dim) {
      problem("outcome " + o.label + ": matrix is not " + std::to_string(pom.dim) + "x" +
              std::to_string(pom.dim));
      rep.outcomes.push_back(c);
      continue;
    }
    try {
      check_values(o.value, shape, o.label);
    } catch (const InvalidPom& e) {
      rep.values_ok = false;
      problem(e.what());
    }
    if (!(o.weight > 0) || !std::isfinite(o.weight)) {
      rep.weights_ok = false;
      problem("outcome " + o.label + ": weight must be positive");
    }
    c.hermiticity_error = (o.matrix - o.matrix.adjoint()).cwiseAbs().maxCoeff();
    Matrix h = (o.matrix + o.matrix.adjoint()) * 0.5;
    c.min_eigenvalue = min_eigenvalue(h);
    rep.max_hermiticity_error = std::max(rep.max_hermiticity_error, c.hermiticity_error);
    rep.min_eigenvalue = std::min(rep.min_eigenvalue, c.min_eigenvalue);
    if (c.hermiticity_error > tol.hermiticity) {
      rep.hermitian = false;
      problem("outcome " + o.label + ": not Hermitian");
    }
    if (c.min_eigenvalue < -tol.positivity) {
      rep.positive = false;
      std::ostringstream s;
      s << "outcome " << o.label << ": eigenvalue " << c.min_eigenvalue << " below zero";
      problem(s.str());
    }
    if (std::isfinite(o.weight)) total += o.weight * h;
    rep.outcomes.push_back(c);
  }
  rep.completeness_deviation = completeness_deviation(total);
  if (!(rep.completeness_deviation <= tol.completeness)) {
    rep.complete = false;
    std::ostringstream s;
    s << "weighted operators sum to the identity only within " << rep.completeness_deviation;
    problem(s.str());
  }
  rep.passed = rep.problems.empty();
  return rep;
}

ValidationReport validate(const Pom& pom, const Tolerances& tol) {
  ValidationReport rep;
  rep.pom_id = pom.id();
  rep.dim = pom.dim();
  rep.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (const auto& o : pom.outcomes()) {
    double m = 0;
    if (o.factor.cols() >= pom.dim()) {
      Eigen::JacobiSVD<Matrix> svd(o.factor);
      double s = svd.singularValues()(pom.dim() - 1);
      m = s * s;
    }
    rep.outcomes.push_back({o.label, m, 0});
    rep.min_eigenvalue = std::min(rep.min_eigenvalue, m);
  }
  rep.completeness_deviation = completeness_deviation(pom.completeness_operator());
  if (rep.completeness_deviation > tol.completeness) {
    rep.complete = false;
    rep.problems.push_back("weighted operators do not sum to the identity");
  }
  rep.passed = rep.problems.empty();
  return rep;
}

PomPtr make_pom(const RawPom& raw, const Tolerances& tol) {
  ValidationReport rep = validate(raw, tol);
  if (!rep.passed) {
    std::string msg = "invalid POM " + raw.id + ":";
    for (const auto& p : rep.problems) msg += " " + p + ";";
    throw InvalidPom(msg);
  }
  std::vector<PomOutcome> outs;
  for (const auto& o : raw.outcomes) {
    outs.push_back({o.label, o.value, o.weight, psd_factor(o.matrix)});
  }
  return std::make_shared<const Pom>(raw.id, raw.dim, std::move(outs));
}

PomPtr projective_pom(const HermitianOperator& m, double degeneracy_tol, std::string id) {
  Eigensystem es = eigensystem(m);
  std::vector<PomOutcome> outs;
  Index start = 0;
  const Index d = m.dim();
  while (start < d) {
    Index end = start + 1;
    while (end < d && es.values(end) - es.values(start) <= degeneracy_tol) ++end;
    double v = es.values.segment(start, end - start).mean();
    outs.push_back({"e" + std::to_string(outs.size()), {v}, 1.0,
                    es.vectors.middleCols(start, end - start)});
    start = end;
  }
  PomInfo info;
  info.family = PomFamily::projective;
  return std::make_shared<const Pom>(std::move(id), d, std::move(outs), info);
}

PomPtr basis_pom(const Matrix& unitary, const std::vector<double>& values, std::string id) {
  const Index d = unitary.rows();
  if (unitary.cols() != d) throw DimensionMismatch("basis POM: matrix must be square");
  if (static_cast<Index>(values.size()) != d) {
    throw DimensionMismatch("basis POM: one value per basis vector");
  }
  if ((unitary.adjoint() * unitary - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-10) {
    throw InvalidPom("basis POM: columns are not orthonormal");
  }
  std::vector<PomOutcome> outs;
  for (Index k = 0; k < d; ++k) {
    outs.push_back({"b" + std::to_string(k), {values[static_cast<std::size_t>(k)]}, 1.0,
                    unitary.col(k)});
  }
  PomInfo info;
  info.family = PomFamily::projective;
  return std::make_shared<const Pom>(std::move(id), d, std::move(outs), info);
}

PomPtr coherent_pom(Index fock_dim, const GridSpec& grid, const Tolerances& tol) {
  return grid_pom(fock_dim, grid, Ket::basis(fock_dim, 0).amplitudes(), PomFamily::coherent_grid,
                  "coherent", tol);
}

PomPtr imageband_pom(Index fock_dim, const GridSpec& grid, const DensityOperator& imageband,
                     const Tolerances& tol) {
  if (imageband.dim() > fock_dim) {
    throw DimensionMismatch("imageband POM: image-band state larger than the Fock space");
  }
  DensityOperator rp = fock::parity_conjugate(imageband);
  Matrix padded = Matrix::Zero(fock_dim, fock_dim);
  padded.topLeftCorner(rp.dim(), rp.dim()) = rp.matrix();
  Matrix seed = psd_factor(padded);
  // Drop numerically empty directions.
  std::vector<Index> keep;
  for (Index c = 0; c < seed.cols(); ++c) {
    if (seed.col(c).squaredNorm() > 1e-14) keep.push_back(c);
  }
  Matrix s(fock_dim, static_cast<Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) s.col(static_cast<Index>(c)) = seed.col(keep[c]);
  return grid_pom(fock_dim, grid, s, PomFamily::imageband_grid, "imageband", tol);
}

PomPtr inefficient_photon_pom(Index fock_dim, double eta, std::optional<Index> max_outcome,
                              double tail_tol) {
  if (!(eta > 0 && eta <= 1)) throw InvalidPom("photon counter: efficiency must be in (0, 1]");
  if (fock_dim < 1) throw InvalidPom("photon counter: dimension must be positive");
  auto log_binom = [](double n, double k) {
    return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
  };
  auto term = [&](Index n, Index m) {
    double lt = log_binom(static_cast<double>(n), static_cast<double>(m)) +
                static_cast<double>(m) * std::log(eta);
    if (n > m) {
      if (eta == 1) return 0.0;
      lt += static_cast<double>(n - m) * std::log1p(-eta);
    }
    return std::exp(lt);
  };
  // Probability mass of outcome m carried by levels the truncation drops,
  // relative to the full outcome weight 1/eta.
  auto tail = [&](Index m) {
    double s = 0;
    for (Index n = fock_dim; n < fock_dim + 100000; ++n) {
      double t = term(n, m);
      s += t;
      if (t < 1e-18 * std::max(s, 1e-300) && n > fock_dim + 10) break;
    }
    return s * eta;
  };
  Index reliable = 0;
  while (reliable < fock_dim && tail(reliable) < tail_tol) ++reliable;
  if (max_outcome) {
    if (*max_outcome >= fock_dim || *max_outcome < 0 || tail(*max_outcome) >= tail_tol) {
      std::ostringstream s;
      s << "photon counter: outcome " << *max_outcome << " loses more than " << tail_tol
        << " of its weight to Fock levels >= " << fock_dim;
      throw TruncationError(s.str());
    }
  }
  std::vector<PomOutcome> outs;
  for (Index m = 0; m < fock_dim; ++m) {
    Matrix f = Matrix::Zero(fock_dim, fock_dim - m);
    for (Index n = m; n < fock_dim; ++n) f(n, n - m) = std::sqrt(term(n, m));
    outs.push_back({"n" + std::to_string(m), {static_cast<double>(m)}, 1.0, std::move(f)});
  }
  PomInfo info;
  info.family = PomFamily::photon_counting;
  info.reliable_outcomes = max_outcome ? *max_outcome + 1 : reliable;
  info.efficiency = eta;
  return std::make_shared<const Pom>("photon", fock_dim, std::move(outs), info);
}

const std::array<Matrix, 3>& pauli() {
  static const std::array<Matrix, 3> s = [] {
    Matrix x(2, 2), y(2, 2), z(2, 2);
    x << 0, 1, 1, 0;
    y << 0, Complex(0, -1), Complex(0, 1), 0;
    z << 1, 0, 0, -1;
    return std::array<Matrix, 3>{x, y, z};
  }();
  return s;
}

PomPtr spin_pom(const std::vector<std::array<double, 3>>& directions,
                const std::vector<double>& probs, std::string id) {
  if (directions.empty() || directions.size() != probs.size()) {
    throw InvalidPom("spin POM: need one probability per direction");
  }
  double total = 0;
  std::array<double, 3> mean{0, 0, 0};
  for (std::size_t k = 0; k < probs.size(); ++k) {
    double q = probs[k];
    const auto& m = directions[k];
    double len = std::sqrt(m[0] * m[0] + m[1] * m[1] + m[2] * m[2]);
    if (!(q >= 0) || !std::isfinite(q)) throw InvalidPom("spin POM: negative probability");
    if (!(len <= 1 + 1e-12)) throw InvalidPom("spin POM: direction longer than 1");
    total += q;
    for (int i = 0; i < 3; ++i) mean[static_cast<std::size_t>(i)] += q * m[static_cast<std::size_t>(i)];
  }
  if (std::abs(total - 1) > 1e-12) throw InvalidPom("spin POM: probabilities must sum to 1");
  if (std::abs(mean[0]) + std::abs(mean[1]) + std::abs(mean[2]) > 1e-12) {
    throw InvalidPom("spin POM: sum of q_k m_k must vanish");
  }
  const auto& s = pauli();
  std::vector<PomOutcome> outs;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    const auto& m = directions[k];
    Matrix op = Matrix::Identity(2, 2) + m[0] * s[0] + m[1] * s[1] + m[2] * s[2];
    outs.push_back({"m" + std::to_string(k), {m[0], m[1], m[2]}, 1.0, psd_factor(probs[k] * op)});
  }
  PomInfo info;
  info.family = PomFamily::spin;
  return std::make_shared<const Pom>(std::move(id), 2, std::move(outs), info);
}

}  // namespace pomest
