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

#include "suite.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <set>

#include "pomest/errors.hpp"
#include "pomest/estimation.hpp"
#include "pomest/fock.hpp"
#include "pomest/naimark.hpp"
#include "pomest/random.hpp"
#include "pomest/scenarios.hpp"

namespace pomest::cli {

using io::Json;

Check at_most(std::string name, double value, double limit) {
  return {std::move(name), value, limit, false, value <= limit};
}

Check at_least(std::string name, double value, double limit) {
  return {std::move(name), value, limit, true, value >= limit};
}

bool ScenarioResult::passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  for (const auto& r : relations) {
    if (!r.passed) return false;
  }
  return true;
}

std::uint64_t derive_seed(std::uint64_t seed, const std::string& stream) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : stream) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (h | 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

/// Typed access to a scenario's parameter block; leftovers are rejected.
class Params {
 public:
  Params(const Json& j, std::string scope) : scope_(std::move(scope)) {
    if (j.is_null()) return;
    if (!j.is_object()) throw ConfigError(scope_ + ": expected an object");
    j_ = j;
  }

  double num(const std::string& key, double def) {
    const Json* v = take(key);
    if (!v) return def;
    if (!v->is_number()) fail(key, "expected a number");
    double x = v->get<double>();
    if (!std::isfinite(x)) fail(key, "must be finite");
    return x;
  }

  double positive(const std::string& key, double def) {
    double x = num(key, def);
    if (!(x > 0)) fail(key, "must be positive");
    return x;
  }

  Index integer(const std::string& key, Index def, Index lo) {
    const Json* v = take(key);
    if (!v) return def;
    if (!v->is_number_integer()) fail(key, "expected an integer");
    auto x = v->get<Index>();
    if (x < lo) fail(key, "must be at least " + std::to_string(lo));
    return x;
  }

  bool flag(const std::string& key, bool def) {
    const Json* v = take(key);
    if (!v) return def;
    if (!v->is_boolean()) fail(key, "expected true or false");
    return v->get<bool>();
  }

  std::optional<Complex> complex(const std::string& key) {
    const Json* v = take(key);
    if (!v) return std::nullopt;
    if (v->is_number()) return Complex(v->get<double>(), 0);
    if (v->is_array() && v->size() == 2 && (*v)[0].is_number() && (*v)[1].is_number()) {
      return Complex((*v)[0].get<double>(), (*v)[1].get<double>());
    }
    fail(key, "expected a number or an [re, im] pair");
  }

  const Json* raw(const std::string& key) { return take(key); }

  void finish() const {
    for (const auto& [k, v] : j_.items()) {
      if (k != "tolerances" && !used_.count(k)) fail(k, "unknown parameter");
    }
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ConfigError(scope_ + "." + key + ": " + what);
  }

  const std::string& scope() const { return scope_; }

 private:
  const Json* take(const std::string& key) {
    used_.insert(key);
    if (!j_.contains(key) || j_[key].is_null()) return nullptr;
    return &j_[key];
  }

  std::string scope_;
  Json j_ = Json::object();
  std::set<std::string> used_;
};

Json checks_json(const std::vector<Check>& cs) {
  Json a = Json::array();
  for (const auto& c : cs) {
    a.push_back({{"name", c.name},
                 {"value", io::number(c.value)},
                 {c.at_least ? "min" : "max", io::number(c.limit)},
                 {"passed", c.passed}});
  }
  return a;
}

/// Distance to failure: slack + tol for bounds, tol - |slack| for equalities.
double margin(const RelationReport& r) {
  return r.kind == RelationKind::bound ? r.slack + r.tolerance : r.tolerance - std::abs(r.slack);
}

/// Keeps the tightest report and every failure.
void aggregate(ScenarioResult& out, std::vector<RelationReport> reports, const std::string& label) {
  if (reports.empty()) return;
  std::size_t worst = 0;
  std::size_t failures = 0;
  double min_slack = reports[0].slack, max_slack = reports[0].slack;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (margin(reports[i]) < margin(reports[worst])) worst = i;
    if (!reports[i].passed) ++failures;
    min_slack = std::min(min_slack, reports[i].slack);
    max_slack = std::max(max_slack, reports[i].slack);
  }
  Json s;
  s["instances"] = reports.size();
  s["failures"] = failures;
  s["min_slack"] = io::number(min_slack);
  s["max_slack"] = io::number(max_slack);
  out.report[label.empty() ? "summary" : label] = std::move(s);
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (i == worst || !reports[i].passed) {
      RelationReport r = reports[i];
      std::string tag = (i == worst ? "tightest#" : "failed#") + std::to_string(i);
      r.label = label.empty() ? tag : label + ":" + tag;
      out.relations.push_back(std::move(r));
    }
  }
}

Estimator random_estimator(const HermitianOperator& a, PomPtr pom, const DensityOperator& rho,
                           Rng& rng, const Tolerances& tol) {
  switch (rng.integer(0, 2)) {
    case 0:
      return optimal_estimate(a, pom, rho, tol);
    case 1:
      return optimal_estimate_no_info(a, pom);
    default: {
      std::vector<double> v(pom->size());
      for (auto& x : v) x = 2 * rng.normal();
      return Estimator(pom, std::move(v), EstimatorKind::custom);
    }
  }
}

PomPtr random_instance_pom(Index dim, Rng& rng) {
  Index k = rng.integer(2, 2 * dim + 2);
  Index rank = rng.integer(0, dim);  // 0: full rank
  if (rank > 0) rank = std::max(rank, (dim + k - 1) / k);
  return random_pom(dim, k, rng, rank);
}

DensityOperator random_instance_state(Index dim, Rng& rng) {
  return random_density(dim, rng, rng.integer(1, dim));
}

/// Random rotation of R^3 (QR of a Gaussian matrix, determinant +1).
Eigen::Matrix3d random_rotation(Rng& rng) {
  Eigen::Matrix3d g;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) g(i, j) = rng.normal();
  }
  Eigen::HouseholderQR<Eigen::Matrix3d> qr(g);
  Eigen::Matrix3d q = qr.householderQ();
  Eigen::Matrix3d r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < 3; ++i) {
    if (r(i, i) < 0) q.col(i) *= -1;
  }
  if (q.determinant() < 0) q.col(0) *= -1;
  return q;
}

std::vector<std::array<double, 3>> tetrahedron() {
  const double s = 1 / std::sqrt(3.0);
  return {{s, s, s}, {s, -s, -s}, {-s, s, -s}, {-s, -s, s}};
}

std::vector<std::array<double, 3>> octahedron() {
  return {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
}

PomPtr rotated_spin_pom(const std::vector<std::array<double, 3>>& dirs, const Eigen::Matrix3d& rot) {
  std::vector<std::array<double, 3>> out;
  for (const auto& d : dirs) {
    Eigen::Vector3d v = rot * Eigen::Vector3d(d[0], d[1], d[2]);
    out.push_back({v(0), v(1), v(2)});
  }
  std::vector<double> q(dirs.size(), 1.0 / static_cast<double>(dirs.size()));
  // The rotated mean is zero only to rounding; remove it exactly.
  std::array<double, 3> mean{0, 0, 0};
  for (std::size_t k = 0; k < out.size(); ++k) {
    for (std::size_t i = 0; i < 3; ++i) mean[i] += q[k] * out[k][i];
  }
  for (auto& v : out) {
    for (std::size_t i = 0; i < 3; ++i) v[i] -= mean[i];
    double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    if (n > 1) {
      for (auto& c : v) c /= n;
    }
  }
  return spin_pom(out, q, "spin");
}

HermitianOperator spin_component(int c) { return HermitianOperator(pauli()[static_cast<std::size_t>(c)]); }

RawPom trine_raw() {
  RawPom p;
  p.id = "trine";
  p.dim = 2;
  const double angles[3] = {0, std::numbers::pi / 3, -std::numbers::pi / 3};
  for (int k = 0; k < 3; ++k) {
    Vector v(2);
    v << std::cos(angles[k]), std::sin(angles[k]);
    p.outcomes.push_back({"t" + std::to_string(k), {static_cast<double>(k)}, 1.0,
                          (2.0 / 3.0) * v * v.adjoint()});
  }
  return p;
}

// ---- property suites ----

ScenarioResult suite_varsum(std::uint64_t seed, const Tolerances& tol) {
  ScenarioResult out;
  Rng rng(derive_seed(seed, "varsum"));
  std::vector<RelationReport> reps;
  for (int i = 0; i < 200; ++i) {
    Index dim = rng.integer(2, 5);
    PomPtr pom = random_instance_pom(dim, rng);
    DensityOperator rho = random_instance_state(dim, rng);
    HermitianOperator a = random_hermitian(dim, rng);
    reps.push_back(check_varsum(a, optimal_estimate(a, pom, rho, tol), rho, tol));
  }
  aggregate(out, std::move(reps), "");
  return out;
}

ScenarioResult suite_ungen(std::uint64_t seed, const Tolerances& tol) {
  ScenarioResult out;
  Rng rng(derive_seed(seed, "ungen"));
  std::vector<RelationReport> reps;
  for (int i = 0; i < 500; ++i) {
    Index dim = rng.integer(2, 5);
    PomPtr pom = random_instance_pom(dim, rng);
    DensityOperator rho = random_instance_state(dim, rng);
    HermitianOperator a = random_hermitian(dim, rng);
    HermitianOperator b = random_hermitian(dim, rng);
    Estimator f = random_estimator(a, pom, rho, rng, tol);
    Estimator g = random_estimator(b, pom, rho, rng, tol);
    reps.push_back(check_ungen(a, b, f, g, rho, tol));
  }
  aggregate(out, std::move(reps), "");
  return out;
}

ScenarioResult suite_geom(std::uint64_t seed, const Tolerances& tol) {
  ScenarioResult out;
  Rng rng(derive_seed(seed, "geom"));
  std::vector<RelationReport> reps;
  for (int i = 0; i < 200; ++i) {
    Index dim = rng.integer(2, 5);
    DensityOperator rho = random_instance_state(dim, rng);
    reps.push_back(check_geom(random_hermitian(dim, rng), random_hermitian(dim, rng), rho, tol));
  }
  aggregate(out, std::move(reps), "");
  return out;
}

ScenarioResult suite_accbound(std::uint64_t seed, const Tolerances& tol) {
  ScenarioResult out;
  Rng rng(derive_seed(seed, "accbound"));
  std::vector<RelationReport> reps;
  for (int i = 0; i < 200; ++i) {
    Index dim = rng.integer(2, 5);
    PomPtr pom = random_instance_pom(dim, rng);
    DensityOperator rho = random_instance_state(dim, rng);
    reps.push_back(check_accbound(random_hermitian(dim, rng), pom, rho, tol));
  }
  aggregate(out, std::move(reps), "");
  return out;
}

ScenarioResult suite_uni(std::uint64_t seed, const Tolerances& tol) {
  ScenarioResult out;
  Rng rng(derive_seed(seed, "uni"));
  std::vector<RelationReport> reps;
  for (int i = 0; i < 100; ++i) {
    PomPtr pom = rotated_spin_pom(i % 2 == 0 ? tetrahedron() : octahedron(), random_rotation(rng));
    DensityOperator rho = random_density(2, rng);
    HermitianOperator a = random_hermitian(2, rng);
    HermitianOperator b = random_hermitian(2, rng);
    CorrectionResult fa = unbiased_correction(optimal_estimate_no_info(a, pom), a, tol);
    CorrectionResult gb = unbiased_correction(optimal_estimate_no_info(b, pom), b, tol);
    if (!fa.estimator || !gb.estimator) throw NumericalError("uni suite: spin POM not correctable");
    reps.push_back(check_uni(a, b, *fa.estimator, *gb.estimator, rho, tol));
  }
  aggregate(out, std::move(reps), "");
  return out;
}

/// Optimal values against random perturbations of them.
ScenarioResult suite_optimality(std::uint64_t seed, const Tolerances& tol) {
  ScenarioResult out;
  Rng rng(derive_seed(seed, "optimality"));
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 100; ++i) {
    Index dim = rng.integer(2, 4);
    PomPtr pom = random_instance_pom(dim, rng);
    DensityOperator rho = random_density(dim, rng);
    HermitianOperator a = random_hermitian(dim, rng);
    Estimator best = optimal_estimate(a, pom, rho, tol);
    double d0 = statistical_deviation_squared(a, best, rho, tol);
    for (int t = 0; t < 10; ++t) {
      std::vector<double> v = best.values();
      for (auto& x : v) x += 0.1 * rng.normal();
      double d = statistical_deviation_squared(a, Estimator(pom, v, EstimatorKind::custom), rho, tol);
      worst = std::max(worst, d0 - d);
    }
  }
  out.checks.push_back(at_most("optimal_minus_perturbed", worst, tol.exact_slack));
  out.report["summary"] = {{"instances", 100}, {"perturbations", 1000}};
  return out;
}

// ---- scenarios ----

ScenarioResult scenario_heterodyne(Params& p, const Tolerances& tol, std::uint64_t) {
  ScenarioResult out;
  Index dim = p.integer("fock_dim", 40, 2);
  std::optional<Complex> beta = p.complex("beta");
  const Json* fock_n = p.raw("fock");
  const Json* ket = p.raw("ket");
  int given = (beta ? 1 : 0) + (fock_n ? 1 : 0) + (ket ? 1 : 0);
  if (given > 1) p.fail("beta", "give only one of beta, fock, ket");
  std::optional<DensityOperator> rho;
  bool coherent = false;
  double extent = 0;
  if (fock_n) {
    if (!fock_n->is_number_integer() || fock_n->get<Index>() < 0 || fock_n->get<Index>() >= dim) {
      p.fail("fock", "expected an integer level below fock_dim");
    }
    rho = DensityOperator::pure(Ket::basis(dim, fock_n->get<Index>()));
    extent = std::sqrt(static_cast<double>(fock_n->get<Index>()));
  } else if (ket) {
    Vector v = io::vector_from_json(*ket, p.scope() + ".ket");
    if (v.size() > dim) p.fail("ket", "more amplitudes than fock_dim");
    Vector full = Vector::Zero(dim);
    full.head(v.size()) = v;
    rho = DensityOperator::pure(Ket(full));
    extent = std::sqrt(static_cast<double>(v.size() - 1));
  } else {
    Complex b = beta.value_or(Complex(1, 0));
    rho = DensityOperator::pure(fock::coherent_state(b, dim));
    coherent = true;
    extent = std::abs(b);
  }
  GridSpec g;
  g.radius = p.positive("radius", coherent ? extent + 6 : std::max(7.5, extent + 6));
  g.points_per_axis = p.integer("points_per_axis", coherent ? 81 : 151, 5);
  if (auto c = p.complex("center")) g.center = *c;
  double hbar = p.positive("uncanon_hbar", 0.5);
  p.finish();

  PomPtr pom = coherent_pom(dim, g, tol);
  HeterodyneAnalysis an = analyze_heterodyne(*rho, pom, tol);
  out.report["grid"] = io::to_json(g);
  out.report["renormalization_correction"] = pom->info().renormalization_correction;
  out.report["analysis"] = io::to_json(an);
  out.relations = heterodyne_suite(*rho, pom, tol);
  out.relations.push_back(check_uncanon(*rho, pom, hbar, tol));
  if (coherent) {
    out.checks.push_back(at_most("noinfo_product_minus_half",
                                 std::abs(an.noinfo_d1 * an.noinfo_d2 - 0.5), tol.grid_saturation));
  }
  return out;
}

ScenarioResult scenario_epr(Params& p, const Tolerances& tol, std::uint64_t) {
  ScenarioResult out;
  scenarios::EprParams e;
  e.sigma = p.positive("sigma", e.sigma);
  e.tau = p.positive("tau", e.tau);
  e.a = p.num("a", e.a);
  e.p0 = p.num("p0", e.p0);
  e.hbar = p.positive("hbar", e.hbar);
  bool numeric = p.flag("numeric", false);
  scenarios::EprGrid g;
  g.nx = p.integer("nx", g.nx, 8);
  g.ns = p.integer("ns", g.ns, 8);
  g.x_half_width = p.num("x_half_width", 0);
  g.s_spacing = p.num("s_spacing", 0);
  p.finish();
  scenarios::EprReport r = numeric ? scenarios::epr_numeric(e, g) : scenarios::epr_closed_form(e);
  out.report = io::to_json(r);
  out.relations = scenarios::epr_relations(r, tol);
  return out;
}

ScenarioResult scenario_thermal(Params& p, const Tolerances& tol, std::uint64_t) {
  ScenarioResult out;
  scenarios::OscillatorParams o;
  o.beta = p.positive("beta", o.beta);
  o.hbar = p.positive("hbar", o.hbar);
  o.mass = p.positive("mass", o.mass);
  o.omega = p.positive("omega", o.omega);
  o.fock_dim = p.integer("fock_dim", 0, 0);
  p.finish();
  scenarios::OscillatorThermalReport r = scenarios::oscillator_thermal(o);
  out.report = io::to_json(r);
  auto trusted = static_cast<double>(std::count(r.trusted.begin(), r.trusted.end(), true));
  out.checks.push_back(at_least("trusted_nodes", trusted, 1));
  out.checks.push_back(at_most("closed_form_deviation", r.max_closed_form_deviation, 1e-6));
  out.checks.push_back(at_most("log_derivative_mismatch", r.max_derivative_mismatch, 1e-6));

  HermitianOperator h = fock::hamiltonian(r.fock_dim, o.hbar, o.omega);
  HermitianOperator x = fock::position(r.fock_dim, o.hbar, o.mass, o.omega);
  RealVector w(r.fock_dim);
  for (Index n = 0; n < r.fock_dim; ++n) w(n) = std::exp(-o.beta * o.hbar * o.omega * static_cast<double>(n));
  DensityOperator rho = DensityOperator::from_unnormalized(w.cast<Complex>().asDiagonal().toDenseMatrix(), tol);
  PomPtr pom = projective_pom(x, 1e-9, "position");
  out.relations.push_back(check_varsum(h, optimal_estimate(h, pom, rho, tol), rho, tol));
  out.relations.back().label = "energy";
  return out;
}

ScenarioResult scenario_quantum_potential(Params& p, const Tolerances&, std::uint64_t) {
  ScenarioResult out;
  double hbar = p.positive("hbar", 1), mass = p.positive("mass", 1), omega = p.positive("omega", 1);
  double half = p.positive("half_width", 6);
  double h = p.positive("spacing", 0.05);
  double p0 = p.num("momentum", 0.5);
  double core = p.positive("core", 3);
  p.finish();
  // Ground state with a momentum boost; its local energy is constant.
  auto run = [&](double step) {
    auto n = static_cast<Index>(std::llround(2 * half / step)) + 1;
    scenarios::GridWavefunction psi;
    psi.origin = -half;
    psi.spacing = step;
    psi.hbar = hbar;
    psi.mass = mass;
    psi.amplitudes.resize(n);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
      double x = psi.x(i);
      psi.amplitudes(i) = std::polar(std::exp(-mass * omega * x * x / (2 * hbar)), p0 * x / hbar);
      v[static_cast<std::size_t>(i)] = 0.5 * mass * omega * omega * x * x;
    }
    return scenarios::quantum_potential_estimate(psi, v);
  };
  const double exact = p0 * p0 / (2 * mass) + 0.5 * hbar * omega;
  auto core_error = [&](const scenarios::QuantumPotentialReport& r) {
    double e = 0;
    for (std::size_t i = 0; i < r.x.size(); ++i) {
      if (!r.near_node[i] && std::abs(r.x[i]) <= core) e = std::max(e, std::abs(r.estimate[i] - exact));
    }
    return e;
  };
  scenarios::QuantumPotentialReport coarse = run(h);
  scenarios::QuantumPotentialReport fine = run(h / 2);
  double e1 = core_error(coarse), e2 = core_error(fine);
  out.report = io::to_json(coarse);
  out.report["exact_local_energy"] = exact;
  out.report["core_error"] = io::number(e1);
  out.report["core_error_half_step"] = io::number(e2);
  out.report["convergence_ratio"] = io::number(e1 / e2);
  out.checks.push_back(at_least("convergence_ratio", e1 / e2, 3.5));
  out.checks.push_back(at_most("convergence_ratio_upper", e1 / e2, 4.5));
  return out;
}

scenarios::LinearEstimateInputs linear_inputs(Params& p) {
  scenarios::LinearEstimateInputs in;
  in.mean_x = p.num("mean_x", in.mean_x);
  in.var_x = p.num("var_x", in.var_x);
  in.mean_p = p.num("mean_p", in.mean_p);
  in.var_p = p.num("var_p", in.var_p);
  in.hbar = p.positive("hbar", in.hbar);
  in.var_xprime = p.num("var_xprime", in.hbar / 2);
  in.var_pprime = p.num("var_pprime", in.hbar / 2);
  return in;
}

ScenarioResult scenario_linear(Params& p, const Tolerances& tol, std::uint64_t) {
  ScenarioResult out;
  scenarios::LinearEstimateInputs in = linear_inputs(p);
  p.finish();
  scenarios::LinearReport r = scenarios::linear_estimate(in);
  out.report = io::to_json(r);
  std::string dg = digest_of({}, {in.mean_x, in.var_x, in.mean_p, in.var_p, in.var_xprime,
                                  in.var_pprime, in.hbar}, "linear");
  out.relations.push_back(make_report(RelationId::ungen, RelationKind::bound, r.joint_lhs,
                                      in.hbar / 2, tol.exact_slack, tol.exact_saturation, dg));
  auto split = [&](const scenarios::LinearComponent& c, double var, const char* label) {
    out.relations.push_back(make_report(RelationId::varsum, RelationKind::equality, var,
                                        c.dispersion * c.dispersion + c.inaccuracy * c.inaccuracy,
                                        tol.exact_slack, tol.exact_saturation, dg, label));
    out.checks.push_back(at_most(std::string("inaccuracy_gain_") + label,
                                 c.inaccuracy - c.noinfo_inaccuracy, 0));
  };
  split(r.x, in.var_x, "x");
  split(r.p, in.var_p, "p");
  return out;
}

ScenarioResult scenario_squeezing(Params& p, const Tolerances& tol, std::uint64_t) {
  ScenarioResult out;
  double hbar = p.positive("hbar", 1);
  double var_x = p.positive("var_x", 0.5);
  double var_p = p.positive("var_p", 0.5);
  p.finish();
  scenarios::SqueezingReport r = scenarios::optimize_squeezing(var_x, var_p, hbar);
  out.report = io::to_json(r);
  out.report["matches_predicted_regime"] = r.regime == r.predicted || r.candidates_tied;
  std::string dg = digest_of({}, {var_x, var_p, hbar}, "squeezing");
  out.relations.push_back(make_report(RelationId::ungen, RelationKind::bound, r.j_min, hbar / 2,
                                      tol.exact_slack, tol.exact_saturation, dg));
  out.checks.push_back(at_most("optimum_above_symmetric", r.j_min - r.j_symmetric, tol.exact_slack));
  out.checks.push_back(at_most("optimum_above_endpoint", r.j_min - r.j_endpoint, tol.exact_slack));
  return out;
}

ScenarioResult scenario_naimark(Params& p, const Tolerances& tol, std::uint64_t seed) {
  ScenarioResult out;
  const Json* pj = p.raw("pom");
  Index states = p.integer("states", 10, 1);
  p.finish();
  PomPtr pom = make_pom(pj ? io::raw_pom_from_json(*pj) : trine_raw(), tol);
  NaimarkExtension ext = naimark_extend(*pom);
  PomPtr big = ext.extended_pom(*pom);
  Rng rng(derive_seed(seed, "naimark"));
  double prob_diff = 0, dev_diff = 0, op_diff = 0;
  std::vector<RelationReport> reps;
  HermitianOperator anc_id = HermitianOperator::identity(ext.anc_dim);
  for (Index s = 0; s < states; ++s) {
    DensityOperator rho = random_density(pom->dim(), rng);
    DensityOperator joint = tensor(rho, ext.ancilla);
    std::vector<double> p1 = probabilities(*pom, rho), p2 = probabilities(*big, joint);
    for (std::size_t k = 0; k < p1.size(); ++k) prob_diff = std::max(prob_diff, std::abs(p1[k] - p2[k]));
    HermitianOperator a = random_hermitian(pom->dim(), rng);
    Estimator f = optimal_estimate(a, pom, rho, tol);
    HermitianOperator a_ext = tensor(a, anc_id);
    Estimator f_ext(big, f.values(), EstimatorKind::custom);
    double d1 = statistical_deviation_squared(a, f, rho, tol);
    double d2 = statistical_deviation_squared(a_ext, f_ext, joint, tol);
    Matrix diff = a_ext.matrix() - ext.extended_operator(f.values()).matrix();
    double d3 = (joint.matrix() * diff * diff).trace().real();
    dev_diff = std::max(dev_diff, std::abs(d1 - d2));
    op_diff = std::max(op_diff, std::abs(d1 - d3));
    reps.push_back(check_varsum(a_ext, optimal_estimate(a_ext, big, joint, tol), joint, tol));
  }
  out.report["pom_id"] = pom->id();
  out.report["system_dim"] = ext.sys_dim;
  out.report["ancilla_dim"] = ext.anc_dim;
  out.report["states"] = states;
  out.checks.push_back(at_most("probability_difference", prob_diff, 1e-10));
  out.checks.push_back(at_most("deviation_difference", dev_diff, 1e-10));
  out.checks.push_back(at_most("operator_deviation_difference", op_diff, 1e-10));
  aggregate(out, std::move(reps), "extended");
  return out;
}

ScenarioResult scenario_spin(Params& p, const Tolerances& tol, std::uint64_t seed) {
  ScenarioResult out;
  Index states = p.integer("states", 20, 1);
  p.finish();
  PomPtr pom = spin_pom(tetrahedron(), {0.25, 0.25, 0.25, 0.25}, "tetrahedron");
  Rng rng(derive_seed(seed, "spin"));
  std::vector<Estimator> g;
  double residual = 0;
  Json comps = Json::array();
  for (int c = 0; c < 3; ++c) {
    HermitianOperator a = spin_component(c);
    CorrectionResult cr = unbiased_correction(outcome_value_estimator(pom, static_cast<std::size_t>(c)), a, tol);
    if (!cr.estimator) throw NumericalError("spin: tetrahedral estimate not correctable");
    residual = std::max(residual, cr.residual);
    comps.push_back({{"method", to_string(cr.method)}, {"values", cr.estimator->values()}});
    g.push_back(*cr.estimator);
  }
  double bias = 0;
  std::vector<RelationReport> reps;
  for (Index s = 0; s < states; ++s) {
    DensityOperator rho = random_density(2, rng);
    for (int c = 0; c < 3; ++c) {
      auto cu = static_cast<std::size_t>(c);
      bias = std::max(bias, std::abs(estimate_mean(g[cu], rho) - expectation(spin_component(c), rho)));
    }
    reps.push_back(check_uni(spin_component(0), spin_component(1), g[0], g[1], rho, tol));
  }
  out.report["corrected"] = std::move(comps);
  out.report["states"] = states;
  out.checks.push_back(at_most("bias_operator_residual", residual, 1e-10));
  out.checks.push_back(at_most("mean_bias", bias, 1e-10));
  aggregate(out, std::move(reps), "xy");
  return out;
}

ScenarioResult scenario_photon(Params& p, const Tolerances& tol, std::uint64_t) {
  ScenarioResult out;
  Index dim = p.integer("fock_dim", 40, 2);
  double eta = p.positive("eta", 0.8);
  double hbar = p.positive("hbar", 1), omega = p.positive("omega", 1);
  Complex alpha = p.complex("alpha").value_or(Complex(1.5, 0));
  p.finish();
  if (eta > 1) throw ConfigError("photon.eta: must not exceed 1");
  PomPtr pom = inefficient_photon_pom(dim, eta);
  HermitianOperator a = fock::number(dim) * (hbar * omega);
  CorrectionResult cr = unbiased_correction(outcome_value_estimator(pom), a, tol);
  double err = std::numeric_limits<double>::infinity(), rel = err;
  if (cr.estimator) {
    err = rel = 0;
    auto reliable = static_cast<std::size_t>(pom->info().reliable_outcomes);
    for (std::size_t m = 0; m < pom->size(); ++m) {
      double want = hbar * omega * (*pom)[m].scalar_value() / eta;
      double e = std::abs((*cr.estimator)[m] - want);
      if (m < reliable) err = std::max(err, e);
      rel = std::max(rel, e / std::max(1.0, std::abs(want)));
    }
    out.report["corrected"] = cr.estimator->values();
  }
  out.report["method"] = to_string(cr.method);
  out.report["outcomes"] = pom->size();
  out.report["reliable_outcomes"] = pom->info().reliable_outcomes;
  out.checks.push_back(at_most("corrected_minus_m_over_eta_reliable", err, 1e-10));
  out.checks.push_back(at_most("corrected_minus_m_over_eta_relative", rel, 1e-6));
  DensityOperator rho = DensityOperator::pure(fock::coherent_state(alpha, dim));
  out.relations.push_back(check_varsum(a, optimal_estimate(a, pom, rho, tol), rho, tol));
  out.relations.back().label = "energy";
  out.relations.push_back(check_accbound(a, pom, rho, tol));
  out.relations.back().label = "energy";
  return out;
}

using ScenarioFn = std::function<ScenarioResult(Params&, const Tolerances&, std::uint64_t)>;

const std::vector<std::pair<std::string, ScenarioFn>>& scenario_table() {
  static const std::vector<std::pair<std::string, ScenarioFn>> t = {
      {"heterodyne", scenario_heterodyne},
      {"epr", scenario_epr},
      {"thermal", scenario_thermal},
      {"quantum-potential", scenario_quantum_potential},
      {"linear", scenario_linear},
      {"squeezing", scenario_squeezing},
      {"naimark", scenario_naimark},
      {"spin", scenario_spin},
      {"photon", scenario_photon},
  };
  return t;
}

using SuiteFn = ScenarioResult (*)(std::uint64_t, const Tolerances&);

const std::vector<std::pair<std::string, SuiteFn>>& suite_table() {
  static const std::vector<std::pair<std::string, SuiteFn>> t = {
      {"varsum", suite_varsum},     {"ungen", suite_ungen}, {"geom", suite_geom},
      {"accbound", suite_accbound}, {"uni", suite_uni},     {"optimality", suite_optimality},
  };
  return t;
}

}  // namespace

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [k, f] : scenario_table()) n.push_back(k);
    return n;
  }();
  return names;
}

const std::vector<std::string>& property_suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [k, f] : suite_table()) n.push_back(k);
    return n;
  }();
  return names;
}

ScenarioResult run_scenario(const std::string& name, const Json& params, const Tolerances& tol,
                            std::uint64_t seed) {
  for (const auto& [k, f] : scenario_table()) {
    if (k == name) {
      Params p(params, "params");
      ScenarioResult r = f(p, tol, seed);
      r.name = name;
      r.report["passed"] = r.passed();
      r.report["checks"] = checks_json(r.checks);
      return r;
    }
  }
  std::string known;
  for (const auto& n : scenario_names()) known += (known.empty() ? "" : ", ") + n;
  throw ConfigError("unknown scenario '" + name + "' (known: " + known + ")");
}

ScenarioResult run_property_suite(const std::string& name, std::uint64_t seed,
                                  const Tolerances& tol) {
  for (const auto& [k, f] : suite_table()) {
    if (k == name) {
      ScenarioResult r = f(seed, tol);
      r.name = "property:" + name;
      r.report["passed"] = r.passed();
      r.report["checks"] = checks_json(r.checks);
      return r;
    }
  }
  throw ConfigError("unknown property suite '" + name + "'");
}

}  // namespace pomest::cli
