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

#include "pmga/population.h"

#include <cmath>
#include <string>

#include "pmga/rng.h"

namespace pmga {

Alphabet::Alphabet(int m) : m_(m) {
  if (m < 1) {
    throw ValidationError("alphabet parameter m must be >= 1, got " +
                          std::to_string(m));
  }
}

int Alphabet::ValueAt(int index) const {
  if (index < 0 || index >= 2 * m_) {
    throw ValidationError("alphabet index out of range: " +
                          std::to_string(index));
  }
  return index < m_ ? index - m_ : index - m_ + 1;
}

int Alphabet::IndexOf(int value) const {
  if (!Contains(value)) {
    throw ValidationError("value not in alphabet: " + std::to_string(value));
  }
  return value < 0 ? value + m_ : value + m_ - 1;
}

bool Alphabet::Contains(int value) const {
  return value != 0 && value >= -m_ && value <= m_;
}

PopulationModel::PopulationModel(int k, int m,
                                 std::vector<std::vector<double>> p,
                                 std::vector<double> theta)
    : k_(k), alphabet_(m), p_(std::move(p)), theta_(std::move(theta)) {
  if (k < 2) {
    throw ValidationError("group count k must be >= 2, got " +
                          std::to_string(k));
  }
  if (static_cast<int>(p_.size()) != k) {
    throw ValidationError("p must have k = " + std::to_string(k) + " rows");
  }
  for (int g = 0; g < k; ++g) {
    auto& row = p_[g];
    if (static_cast<int>(row.size()) != 2 * m) {
      throw ValidationError("p row " + std::to_string(g + 1) +
                            " must have 2m = " + std::to_string(2 * m) +
                            " entries");
    }
    double sum = 0.0;
    for (double x : row) {
      if (!(x > 0.0) || !(x < 1.0)) {
        throw ValidationError("p entries must lie strictly in (0,1); row " +
                              std::to_string(g + 1));
      }
      sum += x;
    }
    if (std::abs(sum - 1.0) > kRowSumTolerance) {
      throw ValidationError("p row " + std::to_string(g + 1) +
                            " sums to " + std::to_string(sum) +
                            ", outside tolerance of 1");
    }
    for (double& x : row) x /= sum;
  }
  if (static_cast<int>(theta_.size()) != k) {
    throw ValidationError("theta must have k entries");
  }
  double tsum = 0.0;
  for (double t : theta_) {
    if (t < 0.0 || t > 1.0) {
      throw ValidationError("theta entries must lie in [0,1]");
    }
    tsum += t;
  }
  if (std::abs(tsum - 1.0) > kRowSumTolerance) {
    throw ValidationError("theta sums to " + std::to_string(tsum) +
                          ", outside tolerance of 1");
  }
  for (double& t : theta_) t /= tsum;
}

double PopulationModel::ValueProb(int group, int value) const {
  return ValueRow(group)[alphabet_.IndexOf(value)];
}

const std::vector<double>& PopulationModel::ValueRow(int group) const {
  if (group < 1 || group > k_) {
    throw ValidationError("group out of range: " + std::to_string(group));
  }
  return p_[group - 1];
}

double PopulationModel::SecondMoment() const {
  double total = 0.0;
  for (int g = 1; g <= k_; ++g) {
    const auto& row = p_[g - 1];
    double row_moment = 0.0;
    for (int i = 0; i < alphabet_.size(); ++i) {
      const double v = alphabet_.ValueAt(i);
      row_moment += v * v * row[i];
    }
    total += theta_[g - 1] * row_moment;
  }
  return total;
}

double PopulationModel::ConditionalMean(int group) const {
  const auto& row = ValueRow(group);
  double mean = 0.0;
  for (int i = 0; i < alphabet_.size(); ++i) {
    mean += alphabet_.ValueAt(i) * row[i];
  }
  return mean;
}

std::pair<double, double> PopulationModel::ExtremeProbs() const {
  double p_max = p_[0][0];
  double p_min = p_[0][0];
  for (const auto& row : p_) {
    for (double x : row) {
      if (x > p_max) p_max = x;
      if (x < p_min) p_min = x;
    }
  }
  return {p_max, p_min};
}

std::vector<UserRecord> SamplePopulation(const PopulationModel& model,
                                         std::int64_t n, std::uint64_t seed) {
  if (n < 1) {
    throw ValidationError("population size n must be >= 1");
  }
  std::vector<UserRecord> users(static_cast<std::size_t>(n));
  for (std::int64_t i = 1; i <= n; ++i) {
    RngStream stream = RngStream::Derive(seed, static_cast<std::uint64_t>(i),
                                         kDomainPopulation);
    const int group = stream.SampleDiscrete(model.theta()) + 1;
    const int value_index = stream.SampleDiscrete(model.ValueRow(group));
    users[static_cast<std::size_t>(i - 1)] = UserRecord{
        .index = i,
        .group = group,
        .value = model.alphabet().ValueAt(value_index),
    };
  }
  return users;
}

AggregateVector TrueAggregate(std::span<const UserRecord> population, int k) {
  AggregateVector sums(static_cast<std::size_t>(k), 0.0);
  for (const UserRecord& user : population) {
    if (user.group < 1 || user.group > k) {
      throw ValidationError("user group out of range: " +
                            std::to_string(user.group));
    }
    sums[static_cast<std::size_t>(user.group - 1)] += user.value;
  }
  return sums;
}

}  // namespace pmga
