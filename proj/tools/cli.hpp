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
#include <iosfwd>
#include <optional>
#include <string>

#include "pomest/json_io.hpp"
#include "pomest/tolerances.hpp"

namespace pomest::cli {

enum ExitCode : int { kOk = 0, kRelationViolated = 1, kValidationFailure = 2, kConfigError = 3 };

enum class Command { validate, estimate, relations, scenario, suite };
enum class OutputFormat { json, csv };

const char* to_string(Command c);

struct RunConfig {
  Command command = Command::suite;
  std::string scenario_name;
  io::Json params = io::Json::object();
  std::string pom_path;     // --pom
  OutputFormat format = OutputFormat::json;
  std::string output_path;  // empty: standard output
  std::uint64_t seed = 0;
  Tolerances tolerances;    // defaults, then POMEST_* variables, then params.tolerances
};

/// Throws ConfigError with a field or line diagnostic. Returns nullopt
/// after printing help to `out`.
std::optional<RunConfig> parse_command_line(int argc, const char* const* argv, std::ostream& out);

/// `--params` text: inline JSON, or @path to a JSON file.
io::Json parse_params(const std::string& text);

struct RunOutput {
  int exit_code = kOk;
  std::string text;  // the rendered report
};

/// Runs a parsed configuration. Library errors propagate.
RunOutput execute(const RunConfig& config);

/// Writes `text` to a temporary file next to `path` and renames it over.
void write_atomically(const std::string& path, const std::string& text);

/// Full front-end: parse, execute, write; maps errors to exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pomest::cli
