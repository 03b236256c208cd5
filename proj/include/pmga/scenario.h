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

#ifndef PMGA_SCENARIO_H_
#define PMGA_SCENARIO_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pmga/experiment.h"
#include "pmga/population.h"
#include "pmga/qa.h"
#include "pmga/rg.h"

namespace pmga {

// JSON scenario file. Layout:
//
//   {
//     "model": {"k": 2, "m": 1, "p": [[...], [...]], "theta": [...]},
//     "qa": {"lambda": 0.2},
//     "rg": {"lambda_gr": 0.5, "lambda_vl": 0.0},
//     "experiment": {"n": 500, "trials": 100, "seed": 1,
//                    "epsilon_grid": [...], "threads": 2}
//   }
//
// "model" is required; the other blocks are optional. "experiment" takes
// either "n" or "b" (total bit budget), not both. Unknown keys anywhere are
// rejected with a ValidationError naming the key.
struct Scenario {
  PopulationModel model;
  std::optional<QaParams> qa;
  std::optional<RgParams> rg;
  std::optional<std::int64_t> n;
  std::optional<std::int64_t> budget_bits;
  std::optional<std::int64_t> trials;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::vector<double> epsilon_grid;  // empty = DefaultEpsilonGrid()
};

Scenario ParseScenario(const std::string& json_text);
Scenario LoadScenario(const std::string& path);

// ExperimentConfig for one scheme, filling scheme params with their defaults
// when the scenario omits the block. Throws if neither n nor b was given.
ExperimentConfig MakeExperimentConfig(const Scenario& scenario, Scheme scheme);

}  // namespace pmga

#endif  // PMGA_SCENARIO_H_
