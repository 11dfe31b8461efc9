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

#include "cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "pomest/errors.hpp"
#include "pomest/estimation.hpp"
#include "pomest/random.hpp"
#include "suite.hpp"

#include <unistd.h>

namespace pomest::cli {

using io::Json;

const char* to_string(Command c) {
  switch (c) {
    case Command::validate: return "validate";
    case Command::estimate: return "estimate";
    case Command::relations: return "relations";
    case Command::scenario: return "scenario";
    case Command::suite: return "suite";
  }
  return "?";
}

namespace {

std::string read_file(const std::string& path, const std::string& what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(what + ": cannot open '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    // e.what() carries "line L, column C"
    throw ConfigError(what + ": " + e.what());
  }
}

void apply_tolerance_overrides(Tolerances& tol, const Json& params) {
  if (!params.is_object() || !params.contains("tolerances")) return;
  const Json& t = params["tolerances"];
  if (!t.is_object()) throw ConfigError("params.tolerances: expected an object");
  for (const auto& [k, v] : t.items()) {
    if (!v.is_number()) throw ConfigError("params.tolerances." + k + ": expected a number");
    tol.set(k, v.get<double>());
  }
}

Json tolerances_json(const Tolerances& tol) {
  Json o = Json::object();
  for (const auto& [k, v] : tol.fields()) o[k] = v;
  return o;
}

/// Strict key checking for the estimate and relations blocks.
void reject_unknown(const Json& params, const std::set<std::string>& allowed) {
  for (const auto& [k, v] : params.items()) {
    if (!allowed.count(k)) throw ConfigError("params." + k + ": unknown parameter");
  }
}

PomPtr load_pom(const RunConfig& c, const Tolerances& tol) {
  Json j;
  if (!c.pom_path.empty()) {
    if (c.params.contains("pom")) throw ConfigError("params.pom: given together with --pom");
    j = parse_json_text(read_file(c.pom_path, "--pom"), "pom file '" + c.pom_path + "'");
  } else if (c.params.contains("pom")) {
    j = c.params["pom"];
  } else {
    throw ConfigError("no POM: pass --pom FILE or params.pom");
  }
  return make_pom(io::raw_pom_from_json(j), tol);
}

std::optional<DensityOperator> load_state(const Json& params, const Tolerances& tol) {
  bool has_rho = params.contains("rho"), has_ket = params.contains("ket");
  if (has_rho && has_ket) throw ConfigError("params.rho: give rho or ket, not both");
  if (has_rho) return DensityOperator(io::matrix_from_json(params["rho"], "params.rho"), tol);
  if (has_ket) return DensityOperator::pure(Ket(io::vector_from_json(params["ket"], "params.ket")));
  return std::nullopt;
}

HermitianOperator load_observable(const Json& params, const std::string& key, const Tolerances& tol) {
  if (!params.contains(key)) throw ConfigError("params." + key + ": missing");
  return HermitianOperator(io::matrix_from_json(params[key], "params." + key), tol.hermiticity);
}

ScenarioResult do_validate(const RunConfig& c, const Tolerances& tol, bool& valid) {
  Json j;
  if (!c.pom_path.empty()) {
    j = parse_json_text(read_file(c.pom_path, "--pom"), "pom file '" + c.pom_path + "'");
  } else if (c.params.contains("pom")) {
    j = c.params["pom"];
  } else {
    throw ConfigError("validate: pass --pom FILE or params.pom");
  }
  ValidationReport v = validate(io::raw_pom_from_json(j), tol);
  valid = v.passed;
  ScenarioResult r;
  r.name = "validate";
  r.report = io::to_json(v);
  return r;
}

ScenarioResult do_estimate(const RunConfig& c, const Tolerances& tol) {
  reject_unknown(c.params, {"pom", "rho", "ket", "a", "method", "component", "tolerances"});
  PomPtr pom = load_pom(c, tol);
  HermitianOperator a = load_observable(c.params, "a", tol);
  std::optional<DensityOperator> rho = load_state(c.params, tol);
  std::string method = c.params.value("method", rho ? "optimal" : "no-info");
  ScenarioResult r;
  r.name = "estimate";
  std::optional<Estimator> est;
  if (method == "optimal") {
    if (!rho) throw ConfigError("params.method: 'optimal' needs rho or ket");
    est = optimal_estimate(a, pom, *rho, tol);
  } else if (method == "no-info") {
    est = optimal_estimate_no_info(a, pom);
  } else if (method == "outcome-value" || method == "unbiased") {
    std::size_t comp = 0;
    if (c.params.contains("component")) {
      if (!c.params["component"].is_number_unsigned()) {
        throw ConfigError("params.component: expected a non-negative integer");
      }
      comp = c.params["component"].get<std::size_t>();
      if (comp >= pom->value_components()) throw ConfigError("params.component: out of range");
    }
    est = method == "unbiased" && !c.params.contains("component") ? optimal_estimate_no_info(a, pom)
                                                                 : outcome_value_estimator(pom, comp);
    if (method == "unbiased") {
      CorrectionResult cr = unbiased_correction(*est, a, tol);
      r.report["correction"] = {{"method", to_string(cr.method)},
                                {"shift", cr.shift},
                                {"residual", io::number(cr.residual)}};
      if (!cr.estimator) throw UnbiasednessViolation("estimate: no universally unbiased correction exists");
      est = *cr.estimator;
    }
  } else {
    throw ConfigError("params.method: expected optimal, no-info, outcome-value or unbiased");
  }
  r.report["estimator"] = io::to_json(*est);
  r.report["hs_distance"] = io::number(hs_distance(a, *est));
  r.report["universally_unbiased"] = is_universally_unbiased(*est, a, tol);
  if (rho) {
    EstimateStats s = estimate_stats(a, *est, *rho, tol);
    r.report["stats"] = {{"mean", io::number(s.mean)},
                         {"dispersion", io::number(s.dispersion)},
                         {"inaccuracy", io::number(s.inaccuracy)},
                         {"expectation", io::number(expectation(a, *rho))},
                         {"variance", io::number(variance(a, *rho))}};
    r.report["probabilities"] = probabilities(*pom, *rho);
  }
  return r;
}

ScenarioResult do_relations(const RunConfig& c, const Tolerances& tol) {
  reject_unknown(c.params, {"pom", "rho", "ket", "a", "b", "unbiased", "tolerances"});
  PomPtr pom = load_pom(c, tol);
  std::optional<DensityOperator> rho = load_state(c.params, tol);
  if (!rho) throw ConfigError("params.rho: relations need rho or ket");
  HermitianOperator a = load_observable(c.params, "a", tol);
  ScenarioResult r;
  r.name = "relations";
  Estimator fa = optimal_estimate(a, pom, *rho, tol);
  r.relations.push_back(check_varsum(a, fa, *rho, tol));
  r.relations.back().label = "a";
  r.relations.push_back(check_accbound(a, pom, *rho, tol));
  r.relations.back().label = "a";
  if (c.params.contains("b")) {
    HermitianOperator b = load_observable(c.params, "b", tol);
    Estimator gb = optimal_estimate(b, pom, *rho, tol);
    r.relations.push_back(check_varsum(b, gb, *rho, tol));
    r.relations.back().label = "b";
    r.relations.push_back(check_accbound(b, pom, *rho, tol));
    r.relations.back().label = "b";
    r.relations.push_back(check_geom(a, b, *rho, tol));
    r.relations.push_back(check_ungen(a, b, fa, gb, *rho, tol));
    bool unbiased = c.params.value("unbiased", false);
    if (unbiased) {
      CorrectionResult ca = unbiased_correction(optimal_estimate_no_info(a, pom), a, tol);
      CorrectionResult cb = unbiased_correction(optimal_estimate_no_info(b, pom), b, tol);
      r.report["correction"] = {{"a", to_string(ca.method)}, {"b", to_string(cb.method)}};
      if (!ca.estimator || !cb.estimator) {
        throw UnbiasednessViolation("relations: no universally unbiased estimates for a and b");
      }
      r.relations.push_back(check_uni(a, b, *ca.estimator, *cb.estimator, *rho, tol));
    }
  }
  return r;
}

Json result_json(const ScenarioResult& r) {
  Json o;
  o["name"] = r.name;
  o["passed"] = r.passed();
  o["report"] = r.report;
  Json rel = Json::array();
  for (const auto& x : r.relations) rel.push_back(io::to_json(x));
  o["relations"] = std::move(rel);
  return o;
}

}  // namespace

io::Json parse_params(const std::string& text) {
  if (!text.empty() && text[0] == '@') {
    std::string path = text.substr(1);
    return parse_json_text(read_file(path, "--params"), "params file '" + path + "'");
  }
  return parse_json_text(text, "--params");
}

std::optional<RunConfig> parse_command_line(int argc, const char* const* argv, std::ostream& out) {
  CLI::App app{"Optimal estimates of quantum observables from measurement outcomes", "pomest"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string params_text, format = "json";
  RunConfig c;
  app.add_option("--params", params_text, "JSON parameter block, or @file");
  app.add_option("--pom", c.pom_path, "POM file (validate, estimate, relations)");
  app.add_option("--output", c.output_path, "Report path; written atomically");
  app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--seed", c.seed, "Seed for randomized suites");
  app.add_subcommand("validate", "Check a POM");
  app.add_subcommand("estimate", "Estimator for an observable");
  app.add_subcommand("relations", "Uncertainty relations for given observables");
  CLI::App* sc = app.add_subcommand("scenario", "Run a named scenario");
  sc->add_option("name", c.scenario_name, "Scenario name")->required();
  app.add_subcommand("suite", "Property suites and every scenario");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw ConfigError(std::string("command line: ") + e.what());
  }
  const std::string sub = app.get_subcommands().front()->get_name();
  for (Command k : {Command::validate, Command::estimate, Command::relations, Command::scenario,
                    Command::suite}) {
    if (sub == to_string(k)) c.command = k;
  }
  c.format = format == "csv" ? OutputFormat::csv : OutputFormat::json;
  if (!params_text.empty()) c.params = parse_params(params_text);
  if (!c.params.is_object()) throw ConfigError("--params: expected a JSON object");
  c.tolerances = Tolerances::from_env(default_tolerances());
  apply_tolerance_overrides(c.tolerances, c.params);
  return c;
}

RunOutput execute(const RunConfig& c) {
  const Tolerances& tol = c.tolerances;
  std::vector<ScenarioResult> results;
  bool valid = true;
  switch (c.command) {
    case Command::validate:
      results.push_back(do_validate(c, tol, valid));
      break;
    case Command::estimate:
      results.push_back(do_estimate(c, tol));
      break;
    case Command::relations:
      results.push_back(do_relations(c, tol));
      break;
    case Command::scenario:
      results.push_back(run_scenario(c.scenario_name, c.params, tol, c.seed));
      break;
    case Command::suite: {
      for (const auto& k : c.params.items()) {
        if (k.key() != "tolerances") throw ConfigError("params." + k.key() + ": suite takes no parameters");
      }
      for (const auto& n : property_suite_names()) results.push_back(run_property_suite(n, c.seed, tol));
      for (const auto& n : scenario_names()) {
        results.push_back(run_scenario(n, Json::object(), tol, c.seed));
        if (n == "epr") {
          ScenarioResult r = run_scenario(n, Json{{"numeric", true}}, tol, c.seed);
          r.name = "epr-numeric";
          results.push_back(std::move(r));
        }
      }
      break;
    }
  }

  bool passed = valid;
  for (const auto& r : results) passed = passed && r.passed();
  RunOutput o;
  o.exit_code = !valid ? kValidationFailure : (passed ? kOk : kRelationViolated);

  if (c.format == OutputFormat::csv) {
    std::string s = io::csv_header();
    for (const auto& r : results) {
      for (const auto& rel : r.relations) s += io::csv_row(r.name, rel);
    }
    o.text = std::move(s);
    return o;
  }
  Json top;
  top["tool"] = "pomest";
  top["command"] = to_string(c.command);
  if (c.command == Command::scenario) top["scenario"] = c.scenario_name;
  top["seed"] = c.seed;
  top["rng"] = Rng::kName;
  top["params"] = c.params;
  top["tolerances"] = tolerances_json(tol);
  Json rs = Json::array();
  for (const auto& r : results) rs.push_back(result_json(r));
  top["results"] = std::move(rs);
  top["passed"] = passed;
  o.text = top.dump(2) + "\n";
  return o;
}

void write_atomically(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("--output: cannot write '" + tmp.string() + "'");
    f << text;
    f.flush();
    if (!f) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw ConfigError("--output: write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw ConfigError("--output: cannot move report to '" + path + "'");
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    std::optional<RunConfig> c = parse_command_line(argc, argv, out);
    if (!c) return kOk;
    RunOutput o = execute(*c);
    if (c->output_path.empty()) {
      out << o.text;
    } else {
      write_atomically(c->output_path, o.text);
    }
    return o.exit_code;
  } catch (const ConfigError& e) {
    err << "pomest: config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const Json::exception& e) {
    err << "pomest: config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "pomest: " << e.what() << "\n";
    return kValidationFailure;
  }
}

}  // namespace pomest::cli
