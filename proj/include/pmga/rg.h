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

#ifndef PMGA_RG_H_
#define PMGA_RG_H_

#include <cstdint>
#include <span>

#include "pmga/population.h"
#include "pmga/rng.h"

namespace pmga {

// Randomized Group baseline: each user reports a (group, value) pair. The
// group is truthful with probability 1 - lambda_gr, otherwise uniform over
// the other k - 1 groups; a lying user draws the value uniformly from the
// alphabet, a truthful one applies randomized response with lambda_vl.
struct RgParams {
  double lambda_gr = 0.5;  // in (0, 1); values below 1e-9 are rejected
  double lambda_vl = 0.0;  // in [0, (2m-1)/(2m))
};

// Smallest accepted lambda_gr (near-noiseless baselines).
inline constexpr double kMinLambdaGr = 1e-9;

void ValidateRgParams(const RgParams& params, int m);

struct RgAnswer {
  std::int64_t user_index = 0;
  int group = 0;  // reported group, in [1, k]
  int value = 0;  // reported value, alphabet element
};

RgAnswer RgRandomize(int group, int value, const RgParams& params, int k,
                     const Alphabet& alphabet, RngStream& stream);

// Unbiasing scale (2m-1)/((1-lambda_gr)(2m(1-lambda_vl)-1)).
double RgScale(int m, const RgParams& params);

// S-hat(g) = RgScale * sum of reported values among answers claiming g.
AggregateVector RgEstimate(std::span<const RgAnswer> answers,
                           const RgParams& params, int k, int m);

// Privacy level (natural log):
//   e^eps = max{ beta1 (p_max beta2 + lambda_vl),
//                1 / (beta1 (p_min beta2 + lambda_vl)) }
// with beta1 = 2m(k-1)(1-lambda_gr) / ((2m-1) lambda_gr) and
// beta2 = 2m(1-lambda_vl) - 1.
double EpsilonRg(double p_max, double p_min, const RgParams& params, int m,
                 int k);

// Error-minimizing parameters at privacy budget epsilon. High-privacy branch
// (e^{2 eps} < p_max/p_min with p_max != 1/(2m)) makes both branches of the
// privacy maximum tight; otherwise lambda_vl = 0 and only the p_max branch
// binds. The returned parameters satisfy EpsilonRg(...) <= epsilon + 1e-9.
RgParams OptimalRgParams(double p_max, double p_min, double epsilon, int m,
                         int k);

// The relative-MSE coefficient beta3; relative MSE is beta3 / n.
double RgBeta3(int m, int k, const RgParams& params, double second_moment);
double RelativeMseTheoryRg(int m, int k, const RgParams& params,
                           double second_moment, std::int64_t n);

}  // namespace pmga

#endif  // PMGA_RG_H_
