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

#include <string>
#include <utility>
#include <vector>

namespace pomest {

struct Tolerances {
  double hermiticity = 1e-8;
  double ket_norm = 1e-12;
  double trace = 1e-10;
  double positivity = 1e-10;
  double completeness = 1e-8;
  double zero_probability = 1e-14;
  double negative_deviation = 1e-9;
  double unbiasedness = 1e-8;
  double commutation = 1e-8;
  double exact_saturation = 1e-6;
  double grid_saturation = 1e-3;
  double exact_slack = 1e-9;
  double grid_slack = 1e-3;
  double grid_crosscheck = 1e-3;
  double max_grid_correction = 0.1;

  /// Copy of `base` with any POMEST_<FIELD> environment overrides applied,
  /// e.g. POMEST_EXACT_SATURATION=1e-8. Throws ConfigError on bad values.
  static Tolerances from_env(const Tolerances& base);

  std::vector<std::pair<std::string, double>> fields() const;
  void set(const std::string& name, double value);
};

const Tolerances& default_tolerances();

}  // namespace pomest
