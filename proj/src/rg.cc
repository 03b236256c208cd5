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

#include "pmga/rg.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "pmga/qa.h"

namespace pmga {

void ValidateRgParams(const RgParams& params, int m) {
  if (!(params.lambda_gr >= kMinLambdaGr) ||
      !(params.lambda_gr <= 1.0 - 1e-12)) {
    throw ValidationError("lambda_gr out of domain (0, 1): " +
                          std::to_string(params.lambda_gr));
  }
  if (!(params.lambda_vl >= 0.0) || params.lambda_vl > QaLambdaMax(m)) {
    throw ValidationError("lambda_vl out of domain [0, (2m-1)/(2m)): " +
                          std::to_string(params.lambda_vl));
  }
}

RgAnswer RgRandomize(int group, int value, const RgParams& params, int k,
                     const Alphabet& alphabet, RngStream& stream) {
  ValidateRgParams(params, alphabet.m());
  if (group < 1 || group > k) {
    throw ValidationError("group out of range: " + std::to_string(group));
  }
  RgAnswer out;
  if (stream.Bernoulli(params.lambda_gr)) {
    // Lying branch: uniform wrong group, uniform value.
    int pick = static_cast<int>(stream.Below(k - 1)) + 1;
    if (pick >= group) ++pick;
    out.group = pick;
    out.value = alphabet.ValueAt(static_cast<int>(stream.Below(alphabet.size())));
  } else {
    out.group = group;
    out.value = RandomizeValue(value, QaParams{.lambda = params.lambda_vl},
                               alphabet, stream);
  }
  return out;
}

double RgScale(int m, const RgParams& params) {
  return (2.0 * m - 1.0) /
         ((1.0 - params.lambda_gr) * (2.0 * m * (1.0 - params.lambda_vl) - 1.0));
}

AggregateVector RgEstimate(std::span<const RgAnswer> answers,
                           const RgParams& params, int k, int m) {
  ValidateRgParams(params, m);
  AggregateVector sums(static_cast<std::size_t>(k), 0.0);
  for (const RgAnswer& a : answers) {
    if (a.group < 1 || a.group > k) {
      throw ValidationError("answer group out of range: " +
                            std::to_string(a.group));
    }
    sums[static_cast<std::size_t>(a.group - 1)] += a.value;
  }
  const double scale = RgScale(m, params);
  for (double& s : sums) s *= scale;
  return sums;
}

double EpsilonRg(double p_max, double p_min, const RgParams& params, int m,
                 int k) {
  ValidateRgParams(params, m);
  if (!(p_max >= p_min) || !(p_min > 0.0) || !(p_max < 1.0)) {
    throw ValidationError("need 0 < p_min <= p_max < 1");
  }
  const double beta1 = 2.0 * m * (k - 1.0) * (1.0 - params.lambda_gr) /
                       ((2.0 * m - 1.0) * params.lambda_gr);
  const double beta2 = 2.0 * m * (1.0 - params.lambda_vl) - 1.0;
  const double truthful = beta1 * (p_max * beta2 + params.lambda_vl);
  const double lying = 1.0 / (beta1 * (p_min * beta2 + params.lambda_vl));
  return std::log(std::max({truthful, lying, 1.0}));
}

RgParams OptimalRgParams(double p_max, double p_min, double epsilon, int m,
                         int k) {
  if (!(epsilon > 0.0)) {
    throw ValidationError("epsilon target must be positive");
  }
  if (!(p_max >= p_min) || !(p_min > 0.0) || !(p_max < 1.0)) {
    throw ValidationError("need 0 < p_min <= p_max < 1");
  }
  const double e = std::exp(epsilon);
  const double e2 = std::exp(2.0 * epsilon);
  const double uniform_prob = 1.0 / (2.0 * m);

  double lambda_vl = 0.0;
  if (e2 < p_max / p_min && p_max > uniform_prob + 1e-15) {
    // High-privacy branch: both sides of the privacy maximum are tight, which
    // pins lambda_vl; ties (e^{2 eps} == ratio) fall through to lambda_vl = 0.
    lambda_vl = (2.0 * m - 1.0) * (p_max - p_min * e2) /
                ((1.0 - 2.0 * m * p_min) * e2 + 2.0 * m * p_max - 1.0);
    lambda_vl = std::clamp(lambda_vl, 0.0, QaLambdaMax(m));
  }
  // lambda_gr solves beta1 (p_max beta2 + lambda_vl) = e^eps exactly.
  const double beta2 = 2.0 * m * (1.0 - lambda_vl) - 1.0;
  const double load = 2.0 * m * (k - 1.0) * (p_max * beta2 + lambda_vl);
  double lambda_gr = load / (load + (2.0 * m - 1.0) * e);
  lambda_gr = std::max(lambda_gr, kMinLambdaGr);
  return RgParams{.lambda_gr = lambda_gr, .lambda_vl = lambda_vl};
}

double RgBeta3(int m, int k, const RgParams& params, double second_moment) {
  ValidateRgParams(params, m);
  const double lgr = params.lambda_gr;
  const double lvl = params.lambda_vl;
  const double beta2 = 2.0 * m * (1.0 - lvl) - 1.0;
  const double scale_minus_one =
      (2.0 * m - 1.0) / ((1.0 - lgr) * beta2) - 1.0;
  const double noise_term =
      (4.0 * m * m - 1.0) * (m + 1.0) *
      (2.0 * m * lvl * (1.0 - lgr) + lgr * (2.0 * m - 1.0)) /
      (6.0 * (1.0 - lgr) * (1.0 - lgr) * beta2 * beta2);
  return second_moment * scale_minus_one + noise_term;
}

double RelativeMseTheoryRg(int m, int k, const RgParams& params,
                           double second_moment, std::int64_t n) {
  if (n < 1) {
    throw ValidationError("n must be >= 1");
  }
  return RgBeta3(m, k, params, second_moment) / static_cast<double>(n);
}

}  // namespace pmga
