// Copyright 2026 The PMGA Authors
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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace {

using nlohmann::json;

struct RunResult {
  int exit_code = -1;
  std::string stdout_text;
};

// Runs the CLI via the shell, capturing stdout. Stderr passes through.
RunResult Run(const std::string& args) {
  const std::string out_file =
      std::string(PMGA_TEST_DATA) + "/../../build/cli_test_stdout.tmp";
  const std::string command =
      std::string(PMGA_BIN) + " " + args + " > " + out_file;
  const int status = std::system(command.c_str());
  RunResult result;
  result.exit_code = WEXITSTATUS(status);
  std::ifstream in(out_file);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  result.stdout_text = buffer.str();
  std::remove(out_file.c_str());
  return result;
}

std::string DataFile(const std::string& name) {
  return std::string(PMGA_TEST_DATA) + "/" + name;
}

}  // namespace

TEST_CASE("theory: uniform qa reports zero epsilon and alpha 1") {
  const RunResult r = Run("theory --scenario " + DataFile("uniform_m1_k2.json") +
                          " --scheme qa");
  REQUIRE(r.exit_code == 0);
  const json report = json::parse(r.stdout_text);
  CHECK(report["epsilon"].get<double>() == doctest::Approx(0.0));
  CHECK(report["alpha"].get<double>() == doctest::Approx(1.0));
  CHECK(report["relative_mse"].get<double>() ==
        doctest::Approx(1.0 / 500).epsilon(1e-12));
  CHECK(report["bits_per_user"].get<int>() == 1);
}

TEST_CASE("theory: rg optimizer picks the closed-form parameters") {
  const RunResult r = Run("theory --scenario " + DataFile("uniform_m1_k2.json") +
                          " --scheme rg --epsilon 1");
  REQUIRE(r.exit_code == 0);
  const json report = json::parse(r.stdout_text);
  CHECK(report["lambda_vl"].get<double>() == doctest::Approx(0.0));
  CHECK(report["lambda_gr"].get<double>() ==
        doctest::Approx(1.0 / (1.0 + std::exp(1.0))).epsilon(1e-12));
}

TEST_CASE("theory: malformed row sum exits 2 and names the row") {
  const RunResult r =
      Run("theory --scenario " + DataFile("bad_row.json") + " --scheme qa 2>&1");
  CHECK(r.exit_code == 2);
}

TEST_CASE("simulate: emits a full summary and is seed-deterministic") {
  const std::string args = "simulate --scenario " +
                           DataFile("uniform_m1_k2.json") +
                           " --scheme qa --trials 10 --seed 4";
  const RunResult a = Run(args);
  REQUIRE(a.exit_code == 0);
  const json report = json::parse(a.stdout_text);
  for (const char* key :
       {"scheme", "n", "bits_per_user", "total_bits", "trials",
        "empirical_relative_mse", "standard_error", "theory_relative_mse",
        "mean_estimate", "expected_aggregate", "bias", "bias_se"}) {
    CHECK(report.contains(key));
  }
  CHECK(report["trials"].get<int>() == 10);
  const RunResult b = Run(args);
  CHECK(a.stdout_text == b.stdout_text);
}

TEST_CASE("compare: csv plus crossover trailer, stderr warning on remainders") {
  const RunResult r = Run("compare --scenario " + DataFile("skewed_m1_k2.json"));
  REQUIRE(r.exit_code == 0);
  std::istringstream lines(r.stdout_text);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "# pmga curve csv v1");
  std::getline(lines, line);
  CHECK(line.rfind("epsilon,", 0) == 0);
  int rows = 0;
  std::string last;
  while (std::getline(lines, line)) {
    last = line;
    ++rows;
  }
  CHECK(rows == 41);  // 40 grid rows plus the crossover comment
  CHECK(last.rfind("# crossover:", 0) == 0);
  const json crossover = json::parse(last.substr(12));
  CHECK(crossover["found"].get<bool>());

  // An indivisible budget floors the user counts and warns on stderr.
  const std::string warn_file =
      std::string(PMGA_TEST_DATA) + "/../../build/cli_test_stderr.tmp";
  const int status = std::system(
      (std::string(PMGA_BIN) + " compare --scenario " +
       DataFile("skewed_m1_k2.json") + " --budget 501 > /dev/null 2> " +
       warn_file)
          .c_str());
  CHECK(WEXITSTATUS(status) == 0);
  std::ifstream warn(warn_file);
  std::string warn_text((std::istreambuf_iterator<char>(warn)),
                        std::istreambuf_iterator<char>());
  CHECK(warn_text.find("floor") != std::string::npos);
  std::remove(warn_file.c_str());
}

TEST_CASE("audit: closed forms match the channel audit") {
  const RunResult r = Run("audit --scenario " + DataFile("uniform_m1_k2.json"));
  REQUIRE(r.exit_code == 0);
  const json report = json::parse(r.stdout_text);
  CHECK(report["qa"]["delta"].get<double>() < 1e-12);
  CHECK(report["rg"]["delta"].get<double>() < 1e-12);
  CHECK(report["qa"]["audited_epsilon"].get<double>() ==
        doctest::Approx(0.0));
}

TEST_CASE("region: grid size and membership of the center") {
  const RunResult r = Run("region --epsilon 0.5 1 2.5 --resolution 25");
  REQUIRE(r.exit_code == 0);
  std::istringstream lines(r.stdout_text);
  std::string line;
  std::getline(lines, line);  // version comment
  std::getline(lines, line);  // column header
  int rows = 0;
  bool center_in_all = false;
  while (std::getline(lines, line)) {
    ++rows;
    if (line.rfind("0.5,0.5,", 0) == 0) {
      center_in_all = line.substr(line.size() - 5) == "1,1,1";
    }
  }
  CHECK(rows == 625);
  CHECK(center_in_all);
}

TEST_CASE("unknown scenario key exits 2") {
  const RunResult r =
      Run("theory --scenario " + DataFile("unknown_key.json") + " 2>&1");
  CHECK(r.exit_code == 2);
}
