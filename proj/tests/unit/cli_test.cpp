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

#include <gtest/gtest.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace pomest::cli {
namespace {

const std::string kFixtures = POMEST_FIXTURES;

struct Result {
  int code;
  std::string out, err;
  io::Json json() const { return io::Json::parse(out); }
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "pomest");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

TEST(Cli, ValidateExitCodes) {
  Result ok = invoke({"validate", "--pom", kFixtures + "/trine.json"});
  EXPECT_EQ(ok.code, kOk) << ok.err;
  EXPECT_TRUE(ok.json()["passed"].get<bool>());
  Result bad = invoke({"validate", "--pom", kFixtures + "/incomplete.json"});
  EXPECT_EQ(bad.code, kValidationFailure);
}

TEST(Cli, ConfigErrors) {
  Result parse = invoke({"scenario", "epr", "--params", "{\"sigma\": 0.1,\n \"tau\": }"});
  EXPECT_EQ(parse.code, kConfigError);
  EXPECT_NE(parse.err.find("line"), std::string::npos) << parse.err;
  Result unknown = invoke({"scenario", "epr", "--params", "{\"sigmaa\": 0.1}"});
  EXPECT_EQ(unknown.code, kConfigError);
  EXPECT_NE(unknown.err.find("sigmaa"), std::string::npos) << unknown.err;
  Result name = invoke({"scenario", "nope"});
  EXPECT_EQ(name.code, kConfigError);
  EXPECT_NE(name.err.find("heterodyne"), std::string::npos) << name.err;
}

TEST(Cli, EprScenario) {
  Result r = invoke({"scenario", "epr"});
  ASSERT_EQ(r.code, kOk) << r.err;
  io::Json j = r.json();
  EXPECT_EQ(j["scenario"], "epr");
  bool found = false;
  for (const auto& rel : j["results"][0]["relations"]) {
    if (rel["relation_id"] == "ungen") {
      EXPECT_NEAR(rel["lhs"].get<double>(), 0.5, 1e-9);
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

TEST(Cli, FailedCheckExitsOne) {
  Result r = invoke({"scenario", "thermal", "--params", "{\"fock_dim\": 3}"});
  EXPECT_EQ(r.code, kRelationViolated);
  EXPECT_FALSE(r.json()["passed"].get<bool>());
}

TEST(Cli, RelationsFromFixture) {
  Result r = invoke({"relations", "--pom", kFixtures + "/tetrahedron.json", "--params",
                     "@" + kFixtures + "/qubit_relations.json"});
  EXPECT_EQ(r.code, kOk) << r.err << r.out;
}

TEST(Cli, CsvHeader) {
  Result r = invoke({"scenario", "linear", "--format", "csv"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(r.out.rfind("scenario,relation_id,lhs,rhs,slack,saturated,tolerance\n", 0), 0u);
  EXPECT_NE(r.out.find("\nlinear,ungen"), std::string::npos) << r.out;
}

TEST(Cli, EnvironmentToleranceIsReported) {
  ::setenv("POMEST_EXACT_SLACK", "2e-9", 1);
  Result r = invoke({"scenario", "linear"});
  ::unsetenv("POMEST_EXACT_SLACK");
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(r.json()["tolerances"]["exact_slack"].get<double>(), 2e-9);
  ::setenv("POMEST_EXACT_SLACK", "abc", 1);
  Result bad = invoke({"scenario", "linear"});
  ::unsetenv("POMEST_EXACT_SLACK");
  EXPECT_EQ(bad.code, kConfigError);
}

TEST(Cli, AtomicOutput) {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / ("pomest_cli_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  fs::path out = dir / "report.json";
  Result r = invoke({"scenario", "spin", "--output", out.string()});
  ASSERT_EQ(r.code, kOk) << r.err;
  std::ifstream in(out);
  io::Json j = io::Json::parse(in);
  EXPECT_EQ(j["scenario"], "spin");
  int files = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++files;
  EXPECT_EQ(files, 1);
  fs::remove_all(dir);
}

TEST(Cli, SeededRunsAreIdentical) {
  Result a = invoke({"scenario", "naimark", "--seed", "9"});
  Result b = invoke({"scenario", "naimark", "--seed", "9"});
  ASSERT_EQ(a.code, kOk) << a.err;
  EXPECT_EQ(a.out, b.out);
}

}  // namespace
}  // namespace pomest::cli
