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

#include <cstdint>
#include <string>
#include <vector>

#include "pomest/json_io.hpp"
#include "pomest/relations.hpp"

namespace pomest::cli {

/// A numeric check that is not one of the relations: value against limit.
struct Check {
  std::string name;
  double value = 0;
  double limit = 0;
  bool at_least = false;  // value >= limit instead of value <= limit
  bool passed = false;
};

Check at_most(std::string name, double value, double limit);
Check at_least(std::string name, double value, double limit);

struct ScenarioResult {
  std::string name;
  io::Json report = io::Json::object();
  std::vector<Check> checks;
  std::vector<RelationReport> relations;

  bool passed() const;
};

/// Names accepted by run_scenario, in suite order.
const std::vector<std::string>& scenario_names();

/// Runs one scenario from its JSON parameter block. Unknown parameters and
/// badly typed values raise ConfigError naming the field.
ScenarioResult run_scenario(const std::string& name, const io::Json& params,
                            const Tolerances& tol, std::uint64_t seed);

const std::vector<std::string>& property_suite_names();

/// Randomized instances of one relation. The result keeps the tightest
/// instance and every failing one.
ScenarioResult run_property_suite(const std::string& name, std::uint64_t seed,
                                  const Tolerances& tol);

/// Seed for a named stream derived from the run seed.
std::uint64_t derive_seed(std::uint64_t seed, const std::string& stream);

}  // namespace pomest::cli
