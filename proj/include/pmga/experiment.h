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

#ifndef PMGA_EXPERIMENT_H_
#define PMGA_EXPERIMENT_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pmga/population.h"
#include "pmga/qa.h"
#include "pmga/rg.h"

namespace pmga {

enum class Scheme { kQa, kRg };

struct ExperimentConfig {
  PopulationModel model;
  Scheme scheme = Scheme::kQa;
  QaParams qa;
  RgParams rg;
  // Exactly one of n (users) or budget_bits must be set; a budget is
  // converted through BudgetUsers for the chosen scheme.
  std::optional<std::int64_t> n;
  std::optional<std::int64_t> budget_bits;
  std::int64_t trials = 10000;
  std::uint64_t master_seed = 1;
  int threads = 0;  // 0 = PMGA_THREADS env or hardware default
};

struct TrialSummary {
  std::string scheme;
  std::int64_t n_used = 0;
  int bits_per_user = 0;
  std::int64_t total_bits = 0;
  std::int64_t trials = 0;
  double empirical_relative_mse = 0.0;
  double standard_error = 0.0;  // of the relative MSE estimate
  double theory_relative_mse = 0.0;
  // Per-group mean of S-hat over trials, its expectation n theta_g E[V|G=g],
  // mean of (S-hat - S), and the standard error of that bias estimate.
  std::vector<double> mean_estimate;
  std::vector<double> expected_aggregate;
  std::vector<double> bias;
  std::vector<double> bias_se;
};

// T independent trials, each with a fresh population and fresh scheme
// randomness, all derived from (master_seed, trial_index). Deterministic and
// thread-count independent.
TrialSummary RunTrials(const ExperimentConfig& config);

// Users affordable under a total bit budget: floor(b / log2(2m)) for Q&A and
// floor(b / (log2(2m) + log2(k))) for RG. `exact` (optional) reports whether
// both divisions were exact; the CLI warns when they are not.
std::pair<std::int64_t, std::int64_t> BudgetUsers(std::int64_t b, int m, int k,
                                                  bool* exact = nullptr);

struct CurvePoint {
  double epsilon = 0.0;
  double lambda_qa = 0.0;
  double lambda_gr = 0.0;
  double lambda_vl = 0.0;
  double e_qa_theory = 0.0;
  double e_rg_theory = 0.0;
  // NaN when the table is theory-only.
  double e_qa_empirical = 0.0;
  double e_qa_se = 0.0;
  double e_rg_empirical = 0.0;
  double e_rg_se = 0.0;
  std::int64_t n_qa = 0;
  std::int64_t n_rg = 0;
  std::int64_t b = 0;
};

struct CurveTable {
  std::vector<CurvePoint> points;
};

// Fixed-budget privacy/accuracy curves. For each epsilon the Q&A lambda is
// the smallest feasible one (error is increasing in lambda) and the RG
// parameters come from OptimalRgParams. trials = 0 emits theory only.
CurveTable CompareCurves(const PopulationModel& model, std::int64_t b,
                         std::span<const double> epsilon_grid,
                         std::int64_t trials = 0, std::uint64_t seed = 1,
                         int threads = 0);

std::string CurveCsv(const CurveTable& table);

struct CrossoverReport {
  bool found = false;
  double epsilon_h = 0.0;  // largest grid eps below which Q&A wins everywhere
  double epsilon_l = 0.0;  // smallest grid eps above which RG wins everywhere
  // E_QA - E_RG at the top of the grid; tends to the constant
  // log2(2m)(2m+1)(m+1)(k-1)/(6b) as the grid extends.
  double gap_at_max_epsilon = 0.0;
};

CrossoverReport FindCrossover(const CurveTable& table);

// E_QA - E_RG in the large-epsilon limit: log2(2m)(2m+1)(m+1)(k-1)/(6b).
double LargeEpsilonGap(int m, int k, std::int64_t b);

// 40 log-spaced points in [0.05, 8].
std::vector<double> DefaultEpsilonGrid();

// Thread count: `requested` if > 0, else PMGA_THREADS, else hardware.
int ResolveThreads(int requested);

}  // namespace pmga

#endif  // PMGA_EXPERIMENT_H_
