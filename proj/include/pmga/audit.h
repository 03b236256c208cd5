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

#ifndef PMGA_AUDIT_H_
#define PMGA_AUDIT_H_

#include <cstddef>
#include <string>
#include <vector>

#include "pmga/population.h"
#include "pmga/qa.h"
#include "pmga/rg.h"

namespace pmga {

// Exact answer-channel conditional distributions, computed by enumerating
// the mechanism. These are the ground-truth oracle for the closed-form
// privacy expressions.
struct ChannelTable {
  enum class Scheme { kQa, kRg };

  Scheme scheme;
  int groups = 0;   // conditioning cells (one per group)
  int answers = 0;  // answer alphabet size
  std::vector<double> probs;  // row-major groups x answers

  double At(int group, int answer_index) const {
    return probs[static_cast<std::size_t>(group - 1) * answers + answer_index];
  }
};

// Pr(A = a | G = g, Q = query): sum over true values of
// p_g(v) * Pr(randomized value = query(g, a) | v).
ChannelTable QaChannel(const PopulationModel& model, double lambda,
                       const QueryMatrix& query);

// Pr((g-ring, v-ring) | G = g), answers indexed (g-ring - 1) * 2m + value
// index. Truthful cells enumerate the true value; lying cells are
// lambda_gr / (2m(k-1)).
ChannelTable RgChannel(const PopulationModel& model, const RgParams& params);

// Worst-case ln ratio over distinct groups and a common answer, floored at
// 0. Returns +infinity if a ratio divides by a zero probability.
double AuditedEpsilon(const ChannelTable& table);

// All queries in Q (|Q| = ((2m)!)^k). Throws ValidationError if the count
// exceeds `limit`.
std::vector<QueryMatrix> EnumerateQueries(int k, const Alphabet& alphabet,
                                          std::size_t limit = 5000);

// Max of AuditedEpsilon over every query in Q. Feasible for small m, k only.
double AuditQaEpsilonExhaustive(const PopulationModel& model, double lambda,
                                std::size_t limit = 5000);

// Exact audit without query enumeration: Pr(A = a | G = g, Q = q) depends on
// q only through the value q(g, a), and rows of distinct groups align every
// value pair in some query, so the worst ratio over queries equals the worst
// ratio over cross-group value pairs.
double AuditQaEpsilon(const PopulationModel& model, double lambda);

// Intrinsic privacy of the two-group binary-alphabet setting as a function
// of (p_1(+1), p_2(+1)), the Fig.-3 privacy-region map.
double IntrinsicEpsilonBinary(double p1, double p2);

// resolution x resolution grid over (p1, p2) in (0,1)^2 at cell centers;
// cell is true iff the intrinsic privacy level is <= epsilon.
std::vector<std::uint8_t> PrivacyRegion(double epsilon, int resolution);

// CSV with columns p1, p2, epsilon_intrinsic and one in_eps_<e> column per
// requested epsilon.
std::string RegionCsv(const std::vector<double>& epsilons, int resolution);

}  // namespace pmga

#endif  // PMGA_AUDIT_H_
