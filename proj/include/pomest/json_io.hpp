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

#include <json.hpp>
#include <string>
#include <vector>

#include "pomest/estimation.hpp"
#include "pomest/linalg.hpp"
#include "pomest/pom.hpp"
#include "pomest/relations.hpp"
#include "pomest/scenarios.hpp"

// Matrices are row-major arrays of rows, each entry an [re, im] pair.
namespace pomest::io {

using Json = nlohmann::ordered_json;

Json matrix_to_json(const Matrix& m);
/// Throws ConfigError naming `where` on malformed input.
Matrix matrix_from_json(const Json& j, const std::string& where = "matrix");
Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& j, const std::string& where = "vector");

Json to_json(const RawPom& pom);
RawPom raw_pom_from_json(const Json& j);
Json to_json(const Pom& pom);
Json to_json(const GridSpec& g);
GridSpec grid_from_json(const Json& j, const std::string& where = "grid");
Json to_json(const ValidationReport& r);

/// {pom_id, values[], meta}
Json to_json(const Estimator& e);
Estimator estimator_from_json(const Json& j, PomPtr pom);

Json to_json(const RelationReport& r);
RelationReport relation_report_from_json(const Json& j);

Json to_json(const scenarios::EprReport& r);
Json to_json(const scenarios::LinearReport& r);
Json to_json(const scenarios::SqueezingReport& r);
Json to_json(const scenarios::OscillatorThermalReport& r);
Json to_json(const scenarios::QuantumPotentialReport& r);
Json to_json(const HeterodyneAnalysis& a);

/// Finite doubles as numbers, non-finite as null.
Json number(double x);

/// Columns: scenario, relation_id, lhs, rhs, slack, saturated, tolerance.
std::string csv_header();
std::string csv_row(const std::string& scenario, const RelationReport& r);

}  // namespace pomest::io
