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

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pmga/audit.h"
#include "pmga/error.h"
#include "pmga/experiment.h"
#include "pmga/qa.h"
#include "pmga/rg.h"
#include "pmga/scenario.h"
#include "pmga/wire.h"

namespace {

using nlohmann::json;
using namespace pmga;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInternal = 3;

struct CommonFlags {
  std::string scenario_path;
  std::string out_path;
  std::string scheme = "qa";
  std::optional<double> epsilon;
  std::optional<std::int64_t> trials;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> budget;
  int threads = 0;
};

Scenario LoadWithOverrides(const CommonFlags& flags) {
  Scenario scenario = LoadScenario(flags.scenario_path);
  if (flags.trials.has_value()) scenario.trials = flags.trials;
  if (flags.seed.has_value()) scenario.seed = flags.seed;
  if (flags.budget.has_value()) {
    scenario.budget_bits = flags.budget;
    scenario.n.reset();
  }
  if (flags.threads > 0) scenario.threads = flags.threads;
  return scenario;
}

Scheme ParseScheme(const std::string& name) {
  if (name == "qa") return Scheme::kQa;
  if (name == "rg") return Scheme::kRg;
  throw ValidationError("scheme must be qa or rg");
}

void Emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) {
    throw ValidationError("cannot open output file: " + out_path);
  }
  out << text;
}

// Resolves the per-scheme user count if the scenario pins one down.
std::optional<std::int64_t> ResolveUsers(const Scenario& scenario,
                                         Scheme scheme) {
  if (scenario.n.has_value()) return scenario.n;
  if (scenario.budget_bits.has_value()) {
    const auto [n_qa, n_rg] =
        BudgetUsers(*scenario.budget_bits, scenario.model.alphabet().m(),
                    scenario.model.k());
    return scheme == Scheme::kQa ? n_qa : n_rg;
  }
  return std::nullopt;
}

int CmdTheory(const CommonFlags& flags) {
  const Scenario scenario = LoadWithOverrides(flags);
  const Scheme scheme = ParseScheme(flags.scheme);
  const PopulationModel& model = scenario.model;
  const int m = model.alphabet().m();
  const int k = model.k();
  const double second_moment = model.SecondMoment();
  const std::optional<std::int64_t> n = ResolveUsers(scenario, scheme);

  json report;
  report["scheme"] = flags.scheme;
  report["k"] = k;
  report["m"] = m;
  report["intrinsic_epsilon"] = IntrinsicEpsilon(model);
  if (scheme == Scheme::kQa) {
    QaParams qa = scenario.qa.value_or(QaParams{});
    if (flags.epsilon.has_value()) {
      qa = MinLambdaExact(model, *flags.epsilon);
      report["target_epsilon"] = *flags.epsilon;
    }
    report["lambda"] = qa.lambda;
    report["epsilon"] = EpsilonQa(model, qa);
    report["alpha"] = QaAlpha(m, k, qa.lambda, second_moment);
    report["bits_per_user"] = QaBitsPerUser(m);
    if (n.has_value()) {
      report["n"] = *n;
      report["relative_mse"] =
          RelativeMseTheoryQa(m, k, qa.lambda, second_moment, *n);
    }
  } else {
    const auto [p_max, p_min] = model.ExtremeProbs();
    RgParams rg = scenario.rg.value_or(RgParams{});
    if (flags.epsilon.has_value()) {
      rg = OptimalRgParams(p_max, p_min, *flags.epsilon, m, k);
      report["target_epsilon"] = *flags.epsilon;
    }
    report["lambda_gr"] = rg.lambda_gr;
    report["lambda_vl"] = rg.lambda_vl;
    report["epsilon"] = EpsilonRg(p_max, p_min, rg, m, k);
    report["beta3"] = RgBeta3(m, k, rg, second_moment);
    report["bits_per_user"] = RgBitsPerUser(k, m);
    if (n.has_value()) {
      report["n"] = *n;
      report["relative_mse"] =
          RelativeMseTheoryRg(m, k, rg, second_moment, *n);
    }
  }
  Emit(report.dump(2) + "\n", flags.out_path);
  return kExitOk;
}

int CmdSimulate(const CommonFlags& flags) {
  const Scenario scenario = LoadWithOverrides(flags);
  const ExperimentConfig config =
      MakeExperimentConfig(scenario, ParseScheme(flags.scheme));
  if (config.budget_bits.has_value()) {
    bool exact = false;
    BudgetUsers(*config.budget_bits, scenario.model.alphabet().m(),
                scenario.model.k(), &exact);
    if (!exact) {
      std::cerr << "warning: budget not divisible by bits/user; using floor\n";
    }
  }
  const TrialSummary summary = RunTrials(config);
  json report;
  report["scheme"] = summary.scheme;
  report["n"] = summary.n_used;
  report["bits_per_user"] = summary.bits_per_user;
  report["total_bits"] = summary.total_bits;
  report["trials"] = summary.trials;
  report["empirical_relative_mse"] = summary.empirical_relative_mse;
  report["standard_error"] = summary.standard_error;
  report["theory_relative_mse"] = summary.theory_relative_mse;
  report["theory_within_3se"] =
      std::abs(summary.empirical_relative_mse - summary.theory_relative_mse) <=
      3.0 * summary.standard_error;
  report["mean_estimate"] = summary.mean_estimate;
  report["expected_aggregate"] = summary.expected_aggregate;
  report["bias"] = summary.bias;
  report["bias_se"] = summary.bias_se;
  Emit(report.dump(2) + "\n", flags.out_path);
  return kExitOk;
}

int CmdCompare(const CommonFlags& flags) {
  const Scenario scenario = LoadWithOverrides(flags);
  if (!scenario.budget_bits.has_value()) {
    throw ValidationError("compare needs a total bit budget (experiment.b)");
  }
  const std::int64_t b = *scenario.budget_bits;
  bool exact = false;
  BudgetUsers(b, scenario.model.alphabet().m(), scenario.model.k(), &exact);
  if (!exact) {
    std::cerr << "warning: budget not divisible by bits/user; using floor\n";
  }
  const std::vector<double> grid = scenario.epsilon_grid.empty()
                                       ? DefaultEpsilonGrid()
                                       : scenario.epsilon_grid;
  const CurveTable table = CompareCurves(
      scenario.model, b, grid, scenario.trials.value_or(0),
      scenario.seed.value_or(1), scenario.threads.value_or(0));
  const CrossoverReport crossover = FindCrossover(table);

  json report;
  report["found"] = crossover.found;
  if (crossover.found) {
    report["epsilon_h"] = crossover.epsilon_h;
    report["epsilon_l"] = crossover.epsilon_l;
  }
  report["gap_at_max_epsilon"] = crossover.gap_at_max_epsilon;
  report["large_epsilon_gap"] = LargeEpsilonGap(
      scenario.model.alphabet().m(), scenario.model.k(), b);

  if (flags.out_path.empty()) {
    std::cout << CurveCsv(table);
    std::cout << "# crossover: " << report.dump() << "\n";
  } else {
    Emit(CurveCsv(table), flags.out_path);
    std::cout << report.dump(2) << "\n";
  }
  return kExitOk;
}

int CmdAudit(const CommonFlags& flags) {
  const Scenario scenario = LoadWithOverrides(flags);
  const PopulationModel& model = scenario.model;
  const int m = model.alphabet().m();
  const int k = model.k();
  const double lambda = scenario.qa.value_or(QaParams{}).lambda;
  const RgParams rg = scenario.rg.value_or(RgParams{});
  const auto [p_max, p_min] = model.ExtremeProbs();

  json report;
  report["qa"]["lambda"] = lambda;
  report["qa"]["closed_form_epsilon"] =
      EpsilonQa(model, QaParams{.lambda = lambda});
  report["qa"]["audited_epsilon"] = AuditQaEpsilon(model, lambda);
  report["qa"]["delta"] = std::abs(report["qa"]["closed_form_epsilon"]
                                       .get<double>() -
                                   report["qa"]["audited_epsilon"]
                                       .get<double>());
  report["rg"]["lambda_gr"] = rg.lambda_gr;
  report["rg"]["lambda_vl"] = rg.lambda_vl;
  report["rg"]["closed_form_epsilon"] = EpsilonRg(p_max, p_min, rg, m, k);
  report["rg"]["audited_epsilon"] = AuditedEpsilon(RgChannel(model, rg));
  report["rg"]["delta"] = std::abs(report["rg"]["closed_form_epsilon"]
                                       .get<double>() -
                                   report["rg"]["audited_epsilon"]
                                       .get<double>());
  Emit(report.dump(2) + "\n", flags.out_path);
  return kExitOk;
}

int CmdRegion(const std::vector<double>& epsilons, int resolution,
              const std::string& out_path) {
  if (epsilons.empty()) {
    throw ValidationError("region needs at least one --epsilon");
  }
  Emit(RegionCsv(epsilons, resolution), out_path);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Private multi-group aggregation toolkit"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::vector<double> region_epsilons;
  int region_resolution = 200;

  const auto add_common = [&](CLI::App* cmd, bool needs_scenario) {
    if (needs_scenario) {
      cmd->add_option("--scenario", flags.scenario_path,
                      "Scenario JSON file")
          ->required();
    }
    cmd->add_option("--out", flags.out_path, "Write output to this file");
    cmd->add_option("--seed", flags.seed, "Override experiment.seed");
    cmd->add_option("--trials", flags.trials, "Override experiment.trials");
    cmd->add_option("--budget", flags.budget, "Override experiment.b (bits)");
    cmd->add_option("--threads", flags.threads,
                    "Worker threads (0 = PMGA_THREADS or hardware)");
  };

  CLI::App* theory = app.add_subcommand(
      "theory", "Closed-form privacy and error for one scheme");
  add_common(theory, true);
  theory->add_option("--scheme", flags.scheme, "qa or rg");
  theory->add_option("--epsilon", flags.epsilon,
                     "Pick error-minimizing parameters for this privacy level");

  CLI::App* simulate = app.add_subcommand(
      "simulate", "Monte Carlo trials for one scheme");
  add_common(simulate, true);
  simulate->add_option("--scheme", flags.scheme, "qa or rg");

  CLI::App* compare = app.add_subcommand(
      "compare", "Fixed-budget error curves for both schemes");
  add_common(compare, true);

  CLI::App* audit = app.add_subcommand(
      "audit", "Audited channel privacy vs the closed forms");
  add_common(audit, true);

  CLI::App* region = app.add_subcommand(
      "region", "Intrinsic-privacy region grid over (p1, p2)");
  region->add_option("--epsilon", region_epsilons, "Privacy levels")
      ->expected(-1);
  region->add_option("--resolution", region_resolution, "Grid cells per axis");
  region->add_option("--out", flags.out_path, "Write output to this file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (theory->parsed()) return CmdTheory(flags);
    if (simulate->parsed()) return CmdSimulate(flags);
    if (compare->parsed()) return CmdCompare(flags);
    if (audit->parsed()) return CmdAudit(flags);
    if (region->parsed()) {
      return CmdRegion(region_epsilons, region_resolution, flags.out_path);
    }
  } catch (const pmga::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
