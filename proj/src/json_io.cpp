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

#include "pomest/json_io.hpp"

#include <cmath>
#include <cstdio>

#include "pomest/errors.hpp"

namespace pomest::io {

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  throw ConfigError(where + ": " + what);
}

double get_number(const Json& j, const std::string& where) {
  if (!j.is_number()) bad(where, "expected a number");
  return j.get<double>();
}

Complex entry_from_json(const Json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0};
  if (!j.is_array() || j.size() != 2) bad(where, "expected an [re, im] pair");
  return {get_number(j[0], where + "[0]"), get_number(j[1], where + "[1]")};
}

Json values_json(const std::vector<double>& v) {
  if (v.size() == 1) return number(v[0]);
  Json a = Json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

Json details_json(const std::vector<std::pair<std::string, double>>& d) {
  Json o = Json::object();
  for (const auto& [k, v] : d) o[k] = number(v);
  return o;
}

Json doubles(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

std::string fmt(double x) {
  if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

Json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) bad(where, "expected a non-empty array of rows");
  const auto rows = static_cast<Index>(j.size());
  if (!j[0].is_array()) bad(where, "expected rows of [re, im] pairs");
  const auto cols = static_cast<Index>(j[0].size());
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    std::string rw = where + "[" + std::to_string(i) + "]";
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) bad(rw, "ragged row");
    for (Index c = 0; c < cols; ++c) {
      m(i, c) = entry_from_json(row[static_cast<std::size_t>(c)], rw + "[" + std::to_string(c) + "]");
    }
  }
  return m;
}

Json vector_to_json(const Vector& v) {
  Json a = Json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(Json::array({v(i).real(), v(i).imag()}));
  return a;
}

Vector vector_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) bad(where, "expected a non-empty array");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Index>(i)) = entry_from_json(j[i], where + "[" + std::to_string(i) + "]");
  }
  return v;
}

Json to_json(const RawPom& pom) {
  Json o;
  if (!pom.id.empty()) o["id"] = pom.id;
  o["dim"] = pom.dim;
  Json outs = Json::array();
  for (const auto& x : pom.outcomes) {
    Json e;
    e["label"] = x.label;
    e["value"] = values_json(x.value);
    e["weight"] = x.weight;
    e["matrix"] = matrix_to_json(x.matrix);
    outs.push_back(std::move(e));
  }
  o["outcomes"] = std::move(outs);
  return o;
}

RawPom raw_pom_from_json(const Json& j) {
  if (!j.is_object()) bad("pom", "expected an object");
  RawPom p;
  p.id = j.contains("id") && j["id"].is_string() ? j["id"].get<std::string>() : "pom";
  if (!j.contains("dim") || !j["dim"].is_number_integer()) bad("pom.dim", "expected an integer");
  p.dim = j["dim"].get<Index>();
  if (!j.contains("outcomes") || !j["outcomes"].is_array()) bad("pom.outcomes", "expected an array");
  std::size_t k = 0;
  for (const auto& e : j["outcomes"]) {
    std::string w = "pom.outcomes[" + std::to_string(k) + "]";
    if (!e.is_object()) bad(w, "expected an object");
    RawPomOutcome o;
    o.label = e.contains("label") && e["label"].is_string() ? e["label"].get<std::string>()
                                                            : std::to_string(k);
    if (!e.contains("value")) bad(w + ".value", "missing");
    const Json& v = e["value"];
    if (v.is_number()) {
      o.value = {v.get<double>()};
    } else if (v.is_array()) {
      for (std::size_t i = 0; i < v.size(); ++i) {
        o.value.push_back(get_number(v[i], w + ".value[" + std::to_string(i) + "]"));
      }
    } else {
      bad(w + ".value", "expected a number or an array of numbers");
    }
    o.weight = e.contains("weight") ? get_number(e["weight"], w + ".weight") : 1.0;
    if (!e.contains("matrix")) bad(w + ".matrix", "missing");
    o.matrix = matrix_from_json(e["matrix"], w + ".matrix");
    p.outcomes.push_back(std::move(o));
    ++k;
  }
  return p;
}

Json to_json(const Pom& pom) {
  Json o = to_json(pom.to_raw());
  o["family"] = to_string(pom.info().family);
  if (pom.info().grid) {
    o["grid"] = to_json(*pom.info().grid);
    o["renormalization_correction"] = pom.info().renormalization_correction;
  }
  return o;
}

Json to_json(const GridSpec& g) {
  Json o;
  o["center"] = Json::array({g.center.real(), g.center.imag()});
  o["radius"] = g.radius;
  o["points_per_axis"] = g.points_per_axis;
  return o;
}

GridSpec grid_from_json(const Json& j, const std::string& where) {
  if (!j.is_object()) bad(where, "expected an object");
  GridSpec g;
  if (j.contains("center")) g.center = entry_from_json(j["center"], where + ".center");
  if (j.contains("radius")) g.radius = get_number(j["radius"], where + ".radius");
  if (j.contains("points_per_axis")) {
    if (!j["points_per_axis"].is_number_integer()) bad(where + ".points_per_axis", "expected an integer");
    g.points_per_axis = j["points_per_axis"].get<Index>();
  }
  if (!(g.radius > 0)) bad(where + ".radius", "must be positive");
  if (g.points_per_axis < 2) bad(where + ".points_per_axis", "must be at least 2");
  return g;
}

Json to_json(const ValidationReport& r) {
  Json o;
  o["pom_id"] = r.pom_id;
  o["dim"] = r.dim;
  o["passed"] = r.passed;
  o["positive"] = r.positive;
  o["complete"] = r.complete;
  o["hermitian"] = r.hermitian;
  o["min_eigenvalue"] = number(r.min_eigenvalue);
  o["completeness_deviation"] = number(r.completeness_deviation);
  o["max_hermiticity_error"] = number(r.max_hermiticity_error);
  Json outs = Json::array();
  for (const auto& c : r.outcomes) {
    outs.push_back({{"label", c.label},
                    {"min_eigenvalue", number(c.min_eigenvalue)},
                    {"hermiticity_error", number(c.hermiticity_error)}});
  }
  o["outcomes"] = std::move(outs);
  o["problems"] = r.problems;
  return o;
}

Json to_json(const Estimator& e) {
  Json o;
  o["pom_id"] = e.pom().id();
  o["values"] = doubles(e.values());
  Json meta;
  meta["kind"] = to_string(e.kind());
  meta["zero_probability"] = e.zero_probability();
  meta["out_of_range"] = e.out_of_range();
  o["meta"] = std::move(meta);
  return o;
}

Estimator estimator_from_json(const Json& j, PomPtr pom) {
  if (!j.is_object()) bad("estimator", "expected an object");
  if (!j.contains("values") || !j["values"].is_array()) bad("estimator.values", "expected an array");
  if (j.contains("pom_id") && j["pom_id"].is_string() && j["pom_id"].get<std::string>() != pom->id()) {
    bad("estimator.pom_id", "does not match POM '" + pom->id() + "'");
  }
  std::vector<double> v;
  for (std::size_t i = 0; i < j["values"].size(); ++i) {
    v.push_back(get_number(j["values"][i], "estimator.values[" + std::to_string(i) + "]"));
  }
  EstimatorKind kind = EstimatorKind::custom;
  std::vector<std::size_t> zero, oor;
  if (j.contains("meta") && j["meta"].is_object()) {
    const Json& m = j["meta"];
    if (m.contains("kind")) kind = estimator_kind_from_string(m["kind"].get<std::string>());
    if (m.contains("zero_probability")) zero = m["zero_probability"].get<std::vector<std::size_t>>();
    if (m.contains("out_of_range")) oor = m["out_of_range"].get<std::vector<std::size_t>>();
  }
  return Estimator(std::move(pom), std::move(v), kind, std::move(zero), std::move(oor));
}

Json to_json(const RelationReport& r) {
  Json o;
  o["relation_id"] = to_string(r.id);
  if (!r.label.empty()) o["label"] = r.label;
  o["kind"] = r.kind == RelationKind::bound ? "bound" : "equality";
  o["lhs"] = number(r.lhs);
  o["rhs"] = number(r.rhs);
  o["slack"] = number(r.slack);
  o["saturated"] = r.saturated;
  o["passed"] = r.passed;
  o["tolerance"] = r.tolerance;
  o["saturation_tol"] = r.saturation_tol;
  o["inputs_digest"] = r.inputs_digest;
  o["details"] = details_json(r.details);
  return o;
}

RelationReport relation_report_from_json(const Json& j) {
  RelationReport r;
  r.id = relation_id_from_string(j.at("relation_id").get<std::string>());
  r.label = j.value("label", "");
  r.kind = j.value("kind", "bound") == "bound" ? RelationKind::bound : RelationKind::equality;
  r.lhs = j.at("lhs").get<double>();
  r.rhs = j.at("rhs").get<double>();
  r.slack = j.at("slack").get<double>();
  r.saturated = j.at("saturated").get<bool>();
  r.passed = j.at("passed").get<bool>();
  r.tolerance = j.at("tolerance").get<double>();
  r.saturation_tol = j.at("saturation_tol").get<double>();
  r.inputs_digest = j.at("inputs_digest").get<std::string>();
  for (const auto& [k, v] : j.at("details").items()) {
    r.details.emplace_back(k, v.is_null() ? std::nan("") : v.get<double>());
  }
  return r;
}

Json to_json(const scenarios::EprReport& r) {
  Json o;
  o["params"] = {{"sigma", r.params.sigma}, {"tau", r.params.tau}, {"a", r.params.a},
                 {"p0", r.params.p0}, {"hbar", r.params.hbar}};
  o["numeric"] = r.numeric;
  o["delta_x"] = number(r.delta_x);
  o["eps_x"] = number(r.eps_x);
  o["delta_p"] = number(r.delta_p);
  o["eps_p"] = number(r.eps_p);
  o["var_p"] = number(r.var_p);
  o["var_p_prime"] = number(r.var_p_prime);
  o["ungen_lhs"] = number(r.ungen_lhs);
  o["ungen_rhs"] = number(r.ungen_rhs);
  if (r.numeric) {
    o["max_relative_mismatch"] = number(r.max_relative_mismatch);
    o["max_estimate_error"] = number(r.max_estimate_error);
  }
  return o;
}

Json to_json(const scenarios::LinearReport& r) {
  auto comp = [](const scenarios::LinearComponent& c) {
    Json o;
    o["lambda"] = number(c.lambda);
    o["inaccuracy"] = number(c.inaccuracy);
    o["dispersion"] = number(c.dispersion);
    o["noinfo_inaccuracy"] = number(c.noinfo_inaccuracy);
    o["noinfo_dispersion"] = number(c.noinfo_dispersion);
    return o;
  };
  Json o;
  o["x"] = comp(r.x);
  o["p"] = comp(r.p);
  o["joint_lhs"] = number(r.joint_lhs);
  o["dispersion_product"] = number(r.dispersion_product);
  return o;
}

Json to_json(const scenarios::SqueezingReport& r) {
  Json o;
  o["regime"] = scenarios::to_string(r.regime);
  o["predicted_regime"] = scenarios::to_string(r.predicted);
  o["candidates_tied"] = r.candidates_tied;
  o["best_ratio"] = number(r.best_ratio);
  o["j_min"] = number(r.j_min);
  o["interior_ratio"] = number(r.interior_ratio);
  o["j_interior"] = number(r.j_interior);
  o["j_endpoint"] = number(r.j_endpoint);
  o["symmetric_ratio"] = number(r.symmetric_ratio);
  o["j_symmetric"] = number(r.j_symmetric);
  o["product_at_optimum"] = number(r.product_at_optimum);
  o["product_symmetric"] = number(r.product_symmetric);
  o["uncertainty_product"] = number(r.uncertainty_product);
  o["hbar"] = r.hbar;
  return o;
}

Json to_json(const scenarios::OscillatorThermalReport& r) {
  Json o;
  o["fock_dim"] = r.fock_dim;
  o["a_t"] = number(r.a_t);
  o["b_t"] = number(r.b_t);
  o["positions"] = doubles(r.positions);
  o["estimate"] = doubles(r.estimate);
  o["closed_form"] = doubles(r.closed_form);
  Json t = Json::array();
  for (bool b : r.trusted) t.push_back(b);
  o["trusted"] = std::move(t);
  o["max_closed_form_deviation"] = number(r.max_closed_form_deviation);
  o["max_derivative_mismatch"] = number(r.max_derivative_mismatch);
  return o;
}

Json to_json(const scenarios::QuantumPotentialReport& r) {
  Json o;
  o["x"] = doubles(r.x);
  o["kinetic"] = doubles(r.kinetic);
  o["potential"] = doubles(r.potential);
  o["quantum"] = doubles(r.quantum);
  o["estimate"] = doubles(r.estimate);
  o["matrix_estimate"] = doubles(r.matrix_estimate);
  Json t = Json::array();
  for (bool b : r.near_node) t.push_back(b);
  o["near_node"] = std::move(t);
  o["max_discrepancy"] = number(r.max_discrepancy);
  return o;
}

Json to_json(const HeterodyneAnalysis& a) {
  auto m2 = [](const Eigen::Matrix2d& m) {
    return Json::array({Json::array({number(m(0, 0)), number(m(0, 1))}),
                        Json::array({number(m(1, 0)), number(m(1, 1))})});
  };
  Json o;
  o["dispersion"] = {number(a.d1), number(a.d2)};
  o["inaccuracy"] = {number(a.eps1), number(a.eps2)};
  o["variance"] = {number(a.var1), number(a.var2)};
  o["fisher"] = m2(a.fisher);
  o["fisher_fd"] = m2(a.fisher_fd);
  o["cov_q"] = m2(a.cov_q);
  o["cov_opt"] = m2(a.cov_opt);
  o["marginal_fisher"] = {number(a.marginal_fisher1), number(a.marginal_fisher2)};
  o["crosscheck_rms"] = number(a.crosscheck_rms);
  o["crosscheck_max"] = number(a.crosscheck_max);
  o["excluded_mass"] = number(a.excluded_mass);
  o["noinfo_dispersion"] = {number(a.noinfo_d1), number(a.noinfo_d2)};
  o["purity"] = number(a.purity);
  return o;
}

std::string csv_header() { return "scenario,relation_id,lhs,rhs,slack,saturated,tolerance\n"; }

std::string csv_row(const std::string& scenario, const RelationReport& r) {
  std::string id = to_string(r.id);
  if (!r.label.empty()) id += "/" + r.label;
  return scenario + "," + id + "," + fmt(r.lhs) + "," + fmt(r.rhs) + "," + fmt(r.slack) + "," +
         (r.saturated ? "true" : "false") + "," + fmt(r.tolerance) + "\n";
}

}  // namespace pomest::io
