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

#ifndef PMGA_POPULATION_H_
#define PMGA_POPULATION_H_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "pmga/error.h"

namespace pmga {

// Tolerance for probability-vector normalization checks.
inline constexpr double kRowSumTolerance = 1e-12;

// The signed value alphabet {-m, ..., -1, +1, ..., +m}. Zero is excluded.
// Indexing is dense: index 0..m-1 maps to -m..-1 and index m..2m-1 maps to
// +1..+m.
class Alphabet {
 public:
  explicit Alphabet(int m);

  int m() const { return m_; }
  int size() const { return 2 * m_; }

  // Value at dense index in [0, 2m).
  int ValueAt(int index) const;
  // Dense index of an alphabet value; throws ValidationError otherwise.
  int IndexOf(int value) const;
  bool Contains(int value) const;

 private:
  int m_;
};

// Probabilistic population: k groups with prior theta, and per-group value
// distributions p_g over the alphabet. Immutable after construction.
//
// Validation: every p entry strictly inside (0, 1), rows summing to 1 within
// kRowSumTolerance (then renormalized), theta entries nonnegative (exact
// zeros allowed) summing to 1 within the same tolerance.
class PopulationModel {
 public:
  PopulationModel(int k, int m, std::vector<std::vector<double>> p,
                  std::vector<double> theta);

  int k() const { return k_; }
  const Alphabet& alphabet() const { return alphabet_; }

  // p_g(v); group is 1-based, value is an alphabet element.
  double ValueProb(int group, int value) const;
  // Row of p for a 1-based group, ordered -m..-1,+1..+m.
  const std::vector<double>& ValueRow(int group) const;
  const std::vector<double>& theta() const { return theta_; }

  // E[V^2] = sum_g theta_g sum_v v^2 p_g(v).
  double SecondMoment() const;
  // E[V | G = g], group 1-based.
  double ConditionalMean(int group) const;
  // Global {p_max, p_min} over all k*2m entries.
  std::pair<double, double> ExtremeProbs() const;

 private:
  int k_;
  Alphabet alphabet_;
  std::vector<std::vector<double>> p_;
  std::vector<double> theta_;
};

struct UserRecord {
  std::int64_t index = 0;  // 1-based
  int group = 0;           // 1-based, in [1, k]
  int value = 0;           // alphabet element
};

// Per-group sums (true aggregate S or estimate S-hat), length k.
using AggregateVector = std::vector<double>;

// Draws n i.i.d. users. Each user's group/value come from a stream derived
// from (seed, user_index), so the result does not depend on evaluation order.
std::vector<UserRecord> SamplePopulation(const PopulationModel& model,
                                         std::int64_t n, std::uint64_t seed);

// S(g) = sum of values of users in group g. Throws if a group is out of
// [1, k].
AggregateVector TrueAggregate(std::span<const UserRecord> population, int k);

}  // namespace pmga

#endif  // PMGA_POPULATION_H_
