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

#include "pmga/scenario.h"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace pmga {

namespace {

using nlohmann::json;

void RejectUnknownKeys(const json& object, const char* block,
                       std::initializer_list<const char*> known) {
  for (const auto& [key, value] : object.items()) {
    bool ok = false;
    for (const char* k : known) {
      if (key == k) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      throw ValidationError(std::string("unknown key \"") + key + "\" in " +
                            block);
    }
  }
}

const json& Require(const json& object, const char* block, const char* key) {
  auto it = object.find(key);
  if (it == object.end()) {
    throw ValidationError(std::string("missing key \"") + key + "\" in " +
                          block);
  }
  return *it;
}

PopulationModel ParseModel(const json& block) {
  if (!block.is_object()) {
    throw ValidationError("\"model\" must be an object");
  }
  RejectUnknownKeys(block, "\"model\"", {"k", "m", "p", "theta"});
  const int k = Require(block, "\"model\"", "k").get<int>();
  const int m = Require(block, "\"model\"", "m").get<int>();
  const auto p =
      Require(block, "\"model\"", "p").get<std::vector<std::vector<double>>>();
  const auto theta =
      Require(block, "\"model\"", "theta").get<std::vector<double>>();
  return PopulationModel(k, m, p, theta);
}

}  // namespace

Scenario ParseScenario(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("scenario is not valid JSON: ") +
                          e.what());
  }
  if (!root.is_object()) {
    throw ValidationError("scenario root must be a JSON object");
  }
  RejectUnknownKeys(root, "scenario", {"model", "qa", "rg", "experiment"});

  try {
    Scenario scenario{.model = ParseModel(Require(root, "scenario", "model"))};

    if (auto it = root.find("qa"); it != root.end()) {
      RejectUnknownKeys(*it, "\"qa\"", {"lambda"});
      QaParams qa{.lambda = Require(*it, "\"qa\"", "lambda").get<double>()};
      ValidateQaParams(qa, scenario.model.alphabet().m());
      scenario.qa = qa;
    }
    if (auto it = root.find("rg"); it != root.end()) {
      RejectUnknownKeys(*it, "\"rg\"", {"lambda_gr", "lambda_vl"});
      RgParams rg;
      rg.lambda_gr = Require(*it, "\"rg\"", "lambda_gr").get<double>();
      if (auto vl = it->find("lambda_vl"); vl != it->end()) {
        rg.lambda_vl = vl->get<double>();
      }
      ValidateRgParams(rg, scenario.model.alphabet().m());
      scenario.rg = rg;
    }
    if (auto it = root.find("experiment"); it != root.end()) {
      RejectUnknownKeys(*it, "\"experiment\"",
                        {"n", "b", "trials", "seed", "epsilon_grid",
                         "threads"});
      if (it->contains("n") && it->contains("b")) {
        throw ValidationError("\"experiment\" takes n or b, not both");
      }
      if (auto f = it->find("n"); f != it->end()) {
        scenario.n = f->get<std::int64_t>();
      }
      if (auto f = it->find("b"); f != it->end()) {
        scenario.budget_bits = f->get<std::int64_t>();
      }
      if (auto f = it->find("trials"); f != it->end()) {
        scenario.trials = f->get<std::int64_t>();
      }
      if (auto f = it->find("seed"); f != it->end()) {
        scenario.seed = f->get<std::uint64_t>();
      }
      if (auto f = it->find("threads"); f != it->end()) {
        scenario.threads = f->get<int>();
      }
      if (auto f = it->find("epsilon_grid"); f != it->end()) {
        scenario.epsilon_grid = f->get<std::vector<double>>();
      }
    }
    return scenario;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("scenario type error: ") + e.what());
  }
}

Scenario LoadScenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("cannot open scenario file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseScenario(buffer.str());
}

ExperimentConfig MakeExperimentConfig(const Scenario& scenario, Scheme scheme) {
  if (!scenario.n.has_value() && !scenario.budget_bits.has_value()) {
    throw ValidationError("scenario must set experiment.n or experiment.b");
  }
  ExperimentConfig config{.model = scenario.model, .scheme = scheme};
  if (scenario.qa.has_value()) config.qa = *scenario.qa;
  if (scenario.rg.has_value()) config.rg = *scenario.rg;
  config.n = scenario.n;
  config.budget_bits = scenario.budget_bits;
  if (scenario.trials.has_value()) config.trials = *scenario.trials;
  if (scenario.seed.has_value()) config.master_seed = *scenario.seed;
  if (scenario.threads.has_value()) config.threads = *scenario.threads;
  return config;
}

}  // namespace pmga
