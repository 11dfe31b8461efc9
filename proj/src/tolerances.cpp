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

#include "pomest/tolerances.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>

#include "pomest/errors.hpp"

namespace pomest {

namespace {

template <typename T, typename F>
void for_each_field(T& t, F&& f) {
  f("hermiticity", t.hermiticity);
  f("ket_norm", t.ket_norm);
  f("trace", t.trace);
  f("positivity", t.positivity);
  f("completeness", t.completeness);
  f("zero_probability", t.zero_probability);
  f("negative_deviation", t.negative_deviation);
  f("unbiasedness", t.unbiasedness);
  f("commutation", t.commutation);
  f("exact_saturation", t.exact_saturation);
  f("grid_saturation", t.grid_saturation);
  f("exact_slack", t.exact_slack);
  f("grid_slack", t.grid_slack);
  f("grid_crosscheck", t.grid_crosscheck);
  f("max_grid_correction", t.max_grid_correction);
}

double parse_positive(const std::string& name, const char* text) {
  char* end = nullptr;
  double v = std::strtod(text, &end);
  if (end == text || *end != '\0' || !std::isfinite(v) || v < 0) {
    throw ConfigError("tolerance " + name + ": expected a non-negative number, got '" +
                      std::string(text) + "'");
  }
  return v;
}

}  // namespace

Tolerances Tolerances::from_env(const Tolerances& base) {
  Tolerances t = base;
  for_each_field(t, [](const char* name, double& field) {
    std::string var = "POMEST_";
    for (const char* c = name; *c; ++c) var += static_cast<char>(std::toupper(*c));
    if (const char* v = std::getenv(var.c_str())) field = parse_positive(var, v);
  });
  return t;
}

std::vector<std::pair<std::string, double>> Tolerances::fields() const {
  std::vector<std::pair<std::string, double>> out;
  Tolerances copy = *this;
  for_each_field(copy, [&](const char* name, double& v) { out.emplace_back(name, v); });
  return out;
}

void Tolerances::set(const std::string& name, double value) {
  bool found = false;
  for_each_field(*this, [&](const char* n, double& field) {
    if (name == n) {
      if (!std::isfinite(value) || value < 0) {
        throw ConfigError("tolerance " + name + " must be a non-negative number");
      }
      field = value;
      found = true;
    }
  });
  if (!found) throw ConfigError("unknown tolerance '" + name + "'");
}

const Tolerances& default_tolerances() {
  static const Tolerances t{};
  return t;
}

}  // namespace pomest
