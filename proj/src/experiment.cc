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

#include "pmga/experiment.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <thread>

#include "pmga/wire.h"

namespace pmga {

namespace {

std::uint64_t TrialSeed(std::uint64_t master_seed, std::int64_t trial) {
  return HashCombine(master_seed,
                     HashCombine(kDomainTrial, static_cast<std::uint64_t>(trial)));
}

template <typename Fn>
void ParallelFor(std::int64_t count, int threads, Fn&& fn) {
  threads = std::max(1, std::min<int>(threads, static_cast<int>(count)));
  if (threads == 1) {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    const std::int64_t begin = count * t / threads;
    const std::int64_t end = count * (t + 1) / threads;
    pool.emplace_back([&fn, begin, end] {
      for (std::int64_t i = begin; i < end; ++i) fn(i);
    });
  }
  for (auto& worker : pool) worker.join();
}

// Order-independent two-pass mean / standard error over per-trial values.
std::pair<double, double> MeanAndStandardError(std::span<const double> values) {
  const double count = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / count;
  if (values.size() < 2) return {mean, 0.0};
  double sq = 0.0;
  for (double v : values) sq += (v - mean) * (v - mean);
  const double variance = sq / (count - 1.0);
  return {mean, std::sqrt(variance / count)};
}

// One full scheme execution over a fresh population; returns S-hat.
AggregateVector SimulateTrial(const ExperimentConfig& config, std::int64_t n,
                              std::uint64_t trial_seed,
                              AggregateVector* true_aggregate) {
  const PopulationModel& model = config.model;
  const Alphabet& alphabet = model.alphabet();
  const int k = model.k();
  const std::vector<UserRecord> users = SamplePopulation(model, n, trial_seed);
  *true_aggregate = TrueAggregate(users, k);

  AggregateVector estimate(static_cast<std::size_t>(k), 0.0);
  if (config.scheme == Scheme::kQa) {
    for (const UserRecord& user : users) {
      const QueryMatrix query =
          DeriveQuery(trial_seed, user.index, k, alphabet);
      RngStream noise = RngStream::Derive(
          trial_seed, static_cast<std::uint64_t>(user.index), kDomainValueNoise);
      const int randomized =
          RandomizeValue(user.value, config.qa, alphabet, noise);
      const QaAnswer a = Answer(query, user.group, randomized, user.index);
      for (int g = 1; g <= k; ++g) {
        estimate[static_cast<std::size_t>(g - 1)] += query.At(g, a.column);
      }
    }
    const double scale = QaScale(alphabet.m(), config.qa.lambda);
    for (double& s : estimate) s *= scale;
  } else {
    for (const UserRecord& user : users) {
      RngStream noise = RngStream::Derive(
          trial_seed, static_cast<std::uint64_t>(user.index), kDomainRg);
      const RgAnswer a =
          RgRandomize(user.group, user.value, config.rg, k, alphabet, noise);
      estimate[static_cast<std::size_t>(a.group - 1)] += a.value;
    }
    const double scale = RgScale(alphabet.m(), config.rg);
    for (double& s : estimate) s *= scale;
  }
  return estimate;
}

}  // namespace

int ResolveThreads(int requested) {
  if (requested > 0) return std::min(requested, 256);
  if (const char* env = std::getenv("PMGA_THREADS")) {
    const int parsed = std::atoi(env);
    if (parsed > 0) return std::min(parsed, 256);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(std::min(hw, 8u));
}

std::pair<std::int64_t, std::int64_t> BudgetUsers(std::int64_t b, int m, int k,
                                                  bool* exact) {
  if (b < 1) {
    throw ValidationError("budget must be positive");
  }
  const double bits_qa = std::log2(2.0 * m);
  const double bits_rg = std::log2(2.0 * m) + std::log2(static_cast<double>(k));
  const auto users = [b](double bits) {
    return static_cast<std::int64_t>(
        std::floor(static_cast<double>(b) / bits + 1e-9));
  };
  const std::int64_t n_qa = users(bits_qa);
  const std::int64_t n_rg = users(bits_rg);
  if (n_qa < 1 || n_rg < 1) {
    throw ValidationError("budget too small for even one user");
  }
  if (exact != nullptr) {
    *exact = std::abs(static_cast<double>(n_qa) * bits_qa - b) < 1e-6 &&
             std::abs(static_cast<double>(n_rg) * bits_rg - b) < 1e-6;
  }
  return {n_qa, n_rg};
}

TrialSummary RunTrials(const ExperimentConfig& config) {
  const PopulationModel& model = config.model;
  const int k = model.k();
  const int m = model.alphabet().m();
  if (config.n.has_value() == config.budget_bits.has_value()) {
    throw ValidationError("exactly one of n and budget must be given");
  }
  if (config.trials < 1) {
    throw ValidationError("trials must be >= 1");
  }
  if (config.scheme == Scheme::kQa) {
    ValidateQaParams(config.qa, m);
  } else {
    ValidateRgParams(config.rg, m);
  }

  std::int64_t n;
  if (config.n.has_value()) {
    n = *config.n;
    if (n < 1) throw ValidationError("n must be >= 1");
  } else {
    const auto [n_qa, n_rg] = BudgetUsers(*config.budget_bits, m, k);
    n = config.scheme == Scheme::kQa ? n_qa : n_rg;
  }

  const std::int64_t trials = config.trials;
  std::vector<double> errors(static_cast<std::size_t>(trials));
  std::vector<double> estimates(static_cast<std::size_t>(trials * k));
  std::vector<double> deviations(static_cast<std::size_t>(trials * k));

  ParallelFor(trials, ResolveThreads(config.threads), [&](std::int64_t t) {
    AggregateVector truth;
    const AggregateVector estimate =
        SimulateTrial(config, n, TrialSeed(config.master_seed, t), &truth);
    double err = 0.0;
    for (int g = 0; g < k; ++g) {
      const double diff = estimate[g] - truth[g];
      err += diff * diff;
      estimates[static_cast<std::size_t>(t * k + g)] = estimate[g];
      deviations[static_cast<std::size_t>(t * k + g)] = diff;
    }
    errors[static_cast<std::size_t>(t)] =
        err / (static_cast<double>(n) * static_cast<double>(n));
  });

  TrialSummary summary;
  summary.scheme = config.scheme == Scheme::kQa ? "qa" : "rg";
  summary.n_used = n;
  summary.bits_per_user = config.scheme == Scheme::kQa ? QaBitsPerUser(m)
                                                       : RgBitsPerUser(k, m);
  summary.total_bits = summary.bits_per_user * n;
  summary.trials = trials;
  const auto [mse_mean, mse_se] = MeanAndStandardError(errors);
  summary.empirical_relative_mse = mse_mean;
  summary.standard_error = mse_se;
  const double second_moment = model.SecondMoment();
  summary.theory_relative_mse =
      config.scheme == Scheme::kQa
          ? RelativeMseTheoryQa(m, k, config.qa.lambda, second_moment, n)
          : RelativeMseTheoryRg(m, k, config.rg, second_moment, n);

  summary.mean_estimate.resize(static_cast<std::size_t>(k));
  summary.expected_aggregate.resize(static_cast<std::size_t>(k));
  summary.bias.resize(static_cast<std::size_t>(k));
  summary.bias_se.resize(static_cast<std::size_t>(k));
  std::vector<double> coordinate(static_cast<std::size_t>(trials));
  for (int g = 0; g < k; ++g) {
    for (std::int64_t t = 0; t < trials; ++t) {
      coordinate[static_cast<std::size_t>(t)] =
          estimates[static_cast<std::size_t>(t * k + g)];
    }
    summary.mean_estimate[g] = MeanAndStandardError(coordinate).first;
    for (std::int64_t t = 0; t < trials; ++t) {
      coordinate[static_cast<std::size_t>(t)] =
          deviations[static_cast<std::size_t>(t * k + g)];
    }
    const auto [bias, bias_se] = MeanAndStandardError(coordinate);
    summary.bias[g] = bias;
    summary.bias_se[g] = bias_se;
    summary.expected_aggregate[g] = static_cast<double>(n) *
                                    model.theta()[g] *
                                    model.ConditionalMean(g + 1);
  }
  return summary;
}

CurveTable CompareCurves(const PopulationModel& model, std::int64_t b,
                         std::span<const double> epsilon_grid,
                         std::int64_t trials, std::uint64_t seed,
                         int threads) {
  if (epsilon_grid.size() < 1) {
    throw ValidationError("epsilon grid must be nonempty");
  }
  for (std::size_t i = 0; i < epsilon_grid.size(); ++i) {
    if (!(epsilon_grid[i] > 0.0) ||
        (i > 0 && !(epsilon_grid[i] > epsilon_grid[i - 1]))) {
      throw ValidationError("epsilon grid must be positive and increasing");
    }
  }
  const int m = model.alphabet().m();
  const int k = model.k();
  const auto [n_qa, n_rg] = BudgetUsers(b, m, k);
  const auto [p_max, p_min] = model.ExtremeProbs();
  const double second_moment = model.SecondMoment();
  const double nan = std::numeric_limits<double>::quiet_NaN();

  CurveTable table;
  table.points.reserve(epsilon_grid.size());
  for (double epsilon : epsilon_grid) {
    CurvePoint point;
    point.epsilon = epsilon;
    point.b = b;
    point.n_qa = n_qa;
    point.n_rg = n_rg;
    const QaParams qa = MinLambdaExact(model, epsilon);
    const RgParams rg = OptimalRgParams(p_max, p_min, epsilon, m, k);
    point.lambda_qa = qa.lambda;
    point.lambda_gr = rg.lambda_gr;
    point.lambda_vl = rg.lambda_vl;
    point.e_qa_theory =
        RelativeMseTheoryQa(m, k, qa.lambda, second_moment, n_qa);
    point.e_rg_theory = RelativeMseTheoryRg(m, k, rg, second_moment, n_rg);
    point.e_qa_empirical = nan;
    point.e_qa_se = nan;
    point.e_rg_empirical = nan;
    point.e_rg_se = nan;
    if (trials > 0) {
      ExperimentConfig config{.model = model,
                              .scheme = Scheme::kQa,
                              .qa = qa,
                              .rg = rg,
                              .n = n_qa,
                              .trials = trials,
                              .master_seed = HashCombine(seed, 0x9a),
                              .threads = threads};
      const TrialSummary qa_summary = RunTrials(config);
      point.e_qa_empirical = qa_summary.empirical_relative_mse;
      point.e_qa_se = qa_summary.standard_error;
      config.scheme = Scheme::kRg;
      config.n = n_rg;
      config.master_seed = HashCombine(seed, 0x96);
      const TrialSummary rg_summary = RunTrials(config);
      point.e_rg_empirical = rg_summary.empirical_relative_mse;
      point.e_rg_se = rg_summary.standard_error;
    }
    table.points.push_back(point);
  }
  return table;
}

std::string CurveCsv(const CurveTable& table) {
  std::string out = "# pmga curve csv v1\n";
  out +=
      "epsilon,lambda_qa,lambda_gr,lambda_vl,e_qa_theory,e_rg_theory,"
      "e_qa_empirical,e_qa_se,e_rg_empirical,e_rg_se,n_qa,n_rg,b\n";
  char buf[512];
  for (const CurvePoint& p : table.points) {
    std::snprintf(buf, sizeof(buf),
                  "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,"
                  "%.12g,%lld,%lld,%lld\n",
                  p.epsilon, p.lambda_qa, p.lambda_gr, p.lambda_vl,
                  p.e_qa_theory, p.e_rg_theory, p.e_qa_empirical, p.e_qa_se,
                  p.e_rg_empirical, p.e_rg_se,
                  static_cast<long long>(p.n_qa),
                  static_cast<long long>(p.n_rg), static_cast<long long>(p.b));
    out += buf;
  }
  return out;
}

CrossoverReport FindCrossover(const CurveTable& table) {
  const auto& points = table.points;
  if (points.size() < 3) {
    throw ValidationError("crossover detection needs >= 3 grid points");
  }
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (!(points[i].epsilon > points[i - 1].epsilon)) {
      throw ValidationError("epsilon grid must be increasing");
    }
  }

  CrossoverReport report;
  report.gap_at_max_epsilon =
      points.back().e_qa_theory - points.back().e_rg_theory;

  // Largest prefix where Q&A wins, largest suffix where RG wins; the regime
  // endpoints are the inclusive boundaries of those runs.
  std::size_t prefix = 0;
  while (prefix < points.size() &&
         points[prefix].e_qa_theory < points[prefix].e_rg_theory) {
    ++prefix;
  }
  std::size_t suffix = points.size();
  while (suffix > 0 &&
         points[suffix - 1].e_qa_theory > points[suffix - 1].e_rg_theory) {
    --suffix;
  }
  if (prefix == 0 || suffix == points.size()) {
    report.found = false;
    return report;
  }
  report.found = true;
  report.epsilon_h = points[prefix - 1].epsilon;
  report.epsilon_l = points[suffix].epsilon;
  return report;
}

double LargeEpsilonGap(int m, int k, std::int64_t b) {
  return std::log2(2.0 * m) * (2.0 * m + 1.0) * (m + 1.0) * (k - 1.0) /
         (6.0 * static_cast<double>(b));
}

std::vector<double> DefaultEpsilonGrid() {
  constexpr int kPoints = 40;
  constexpr double kLow = 0.05;
  constexpr double kHigh = 8.0;
  std::vector<double> grid(kPoints);
  for (int i = 0; i < kPoints; ++i) {
    const double t = static_cast<double>(i) / (kPoints - 1);
    grid[i] = std::exp(std::log(kLow) + t * (std::log(kHigh) - std::log(kLow)));
  }
  return grid;
}

}  // namespace pmga
