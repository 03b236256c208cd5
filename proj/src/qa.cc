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

#include "pmga/qa.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace pmga {

namespace {

constexpr double kLambdaGuard = 1e-12;
constexpr double kBisectTolerance = 1e-12;

}  // namespace

double QaLambdaSup(int m) { return (2.0 * m - 1.0) / (2.0 * m); }

double QaLambdaMax(int m) { return QaLambdaSup(m) - kLambdaGuard; }

void ValidateQaParams(const QaParams& params, int m) {
  if (!(params.lambda >= 0.0) || params.lambda > QaLambdaMax(m)) {
    throw ValidationError("lambda out of domain [0, (2m-1)/(2m)): " +
                          std::to_string(params.lambda));
  }
}

QueryMatrix::QueryMatrix(int k, int m, std::vector<int> cells)
    : k_(k), m_(m), cells_(std::move(cells)) {
  const Alphabet alphabet(m);
  if (k < 2) {
    throw ValidationError("query matrix needs k >= 2 rows");
  }
  if (cells_.size() != static_cast<std::size_t>(k) * (2 * m)) {
    throw ValidationError("query matrix must be k x 2m");
  }
  std::vector<bool> seen(static_cast<std::size_t>(2 * m));
  for (int g = 0; g < k_; ++g) {
    std::fill(seen.begin(), seen.end(), false);
    for (int c = 0; c < 2 * m_; ++c) {
      const int idx = alphabet.IndexOf(cells_[g * 2 * m_ + c]);
      if (seen[idx]) {
        throw ValidationError("query row " + std::to_string(g + 1) +
                              " is not a permutation of the alphabet");
      }
      seen[idx] = true;
    }
  }
}

int QueryMatrix::At(int group, int column) const {
  if (group < 1 || group > k_ || column < 1 || column > 2 * m_) {
    throw ValidationError("query index out of range");
  }
  return cells_[(group - 1) * 2 * m_ + (column - 1)];
}

std::vector<int> QueryMatrix::Column(int column) const {
  if (column < 1 || column > 2 * m_) {
    throw ValidationError("query column out of range: " +
                          std::to_string(column));
  }
  std::vector<int> out(static_cast<std::size_t>(k_));
  for (int g = 0; g < k_; ++g) {
    out[g] = cells_[g * 2 * m_ + (column - 1)];
  }
  return out;
}

int QueryMatrix::ColumnOf(int group, int value) const {
  for (int c = 1; c <= 2 * m_; ++c) {
    if (At(group, c) == value) return c;
  }
  throw ValidationError("value not found in query row");
}

QueryMatrix SampleQuery(int k, const Alphabet& alphabet, RngStream& stream) {
  const int width = alphabet.size();
  std::vector<int> cells(static_cast<std::size_t>(k) * width);
  for (int g = 0; g < k; ++g) {
    int* row = cells.data() + static_cast<std::size_t>(g) * width;
    for (int c = 0; c < width; ++c) row[c] = alphabet.ValueAt(c);
    for (int i = width - 1; i > 0; --i) {
      const int j = static_cast<int>(stream.Below(i + 1));
      std::swap(row[i], row[j]);
    }
  }
  return QueryMatrix(k, alphabet.m(), std::move(cells));
}

QueryMatrix DeriveQuery(std::uint64_t master_seed, std::int64_t user_index,
                        int k, const Alphabet& alphabet) {
  RngStream stream = RngStream::Derive(
      master_seed, static_cast<std::uint64_t>(user_index), kDomainQuery);
  return SampleQuery(k, alphabet, stream);
}

int RandomizeValue(int value, const QaParams& params, const Alphabet& alphabet,
                   RngStream& stream) {
  ValidateQaParams(params, alphabet.m());
  if (!alphabet.Contains(value)) {
    throw ValidationError("value not in alphabet: " + std::to_string(value));
  }
  if (!stream.Bernoulli(params.lambda)) return value;
  const int skip = alphabet.IndexOf(value);
  int pick = static_cast<int>(stream.Below(alphabet.size() - 1));
  if (pick >= skip) ++pick;
  return alphabet.ValueAt(pick);
}

QaAnswer Answer(const QueryMatrix& query, int group, int randomized_value,
                std::int64_t user_index) {
  return QaAnswer{.user_index = user_index,
                  .column = query.ColumnOf(group, randomized_value)};
}

std::vector<int> Decode(const QueryMatrix& query, const QaAnswer& answer) {
  return query.Column(answer.column);
}

double QaScale(int m, double lambda) {
  return (2.0 * m - 1.0) / (2.0 * m - 2.0 * m * lambda - 1.0);
}

AggregateVector QaEstimate(
    const std::vector<std::vector<int>>& decoded_columns,
    const QaParams& params, int m, int k) {
  ValidateQaParams(params, m);
  AggregateVector sums(static_cast<std::size_t>(k), 0.0);
  for (const auto& column : decoded_columns) {
    if (column.size() != static_cast<std::size_t>(k)) {
      throw ValidationError("decoded column has wrong length");
    }
    for (int g = 0; g < k; ++g) sums[g] += column[g];
  }
  const double scale = QaScale(m, params.lambda);
  for (double& s : sums) s *= scale;
  return sums;
}

double EpsilonQa(const PopulationModel& model, const QaParams& params) {
  const int m = model.alphabet().m();
  ValidateQaParams(params, m);
  const double coeff = 2.0 * m * (1.0 - params.lambda) - 1.0;
  const int width = model.alphabet().size();
  double max_ratio = 1.0;
  for (int g = 1; g <= model.k(); ++g) {
    for (int h = 1; h <= model.k(); ++h) {
      if (g == h) continue;
      for (int vi = 0; vi < width; ++vi) {
        for (int wi = 0; wi < width; ++wi) {
          const double num = coeff * model.ValueRow(g)[vi] + params.lambda;
          const double den = coeff * model.ValueRow(h)[wi] + params.lambda;
          max_ratio = std::max(max_ratio, num / den);
        }
      }
    }
  }
  return std::log(max_ratio);
}

double IntrinsicEpsilon(const PopulationModel& model) {
  return EpsilonQa(model, QaParams{.lambda = 0.0});
}

QaParams MinLambdaDistributionFree(int m, double epsilon) {
  if (!(epsilon > 0.0)) {
    throw ValidationError("epsilon target must be positive");
  }
  const double lambda =
      (2.0 * m - 1.0) / (2.0 * m + std::exp(epsilon) - 1.0);
  return QaParams{.lambda = std::min(lambda, QaLambdaMax(m))};
}

QaParams MinLambdaSideInfo(int m, double epsilon, double c_min, double c_max) {
  if (!(epsilon > 0.0)) {
    throw ValidationError("epsilon target must be positive");
  }
  if (!(c_min >= 0.0) || !(c_max <= 1.0) || !(c_min < c_max)) {
    throw ValidationError("side-information bounds need 0 <= c_min < c_max <= 1");
  }
  const double e = std::exp(epsilon);
  const double numerator = (2.0 * m - 1.0) * c_max - c_min * e;
  if (numerator <= 0.0) return QaParams{.lambda = 0.0};
  const double denominator = 2.0 * m * (c_max - c_min * e) + e - 1.0;
  const double lambda = numerator / denominator;
  return QaParams{.lambda = std::clamp(lambda, 0.0, QaLambdaMax(m))};
}

QaParams MinLambdaExact(const PopulationModel& model, double epsilon) {
  if (!(epsilon > 0.0)) {
    throw ValidationError("epsilon target must be positive");
  }
  const int m = model.alphabet().m();
  if (EpsilonQa(model, QaParams{.lambda = 0.0}) <= epsilon) {
    return QaParams{.lambda = 0.0};
  }
  // EpsilonQa is monotone nonincreasing in lambda and tends to 0 at the
  // domain supremum, so a feasible point always exists.
  double lo = 0.0;
  double hi = QaLambdaMax(m);
  while (hi - lo > kBisectTolerance) {
    const double mid = 0.5 * (lo + hi);
    if (EpsilonQa(model, QaParams{.lambda = mid}) <= epsilon) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return QaParams{.lambda = hi};
}

double QaAlpha(int m, int k, double lambda, double second_moment) {
  ValidateQaParams(QaParams{.lambda = lambda}, m);
  const double d = 2.0 * m - 2.0 * m * lambda - 1.0;
  const double noise_term = (4.0 * m * m - 1.0) * (m + 1.0) *
                            ((2.0 * m - 1.0) * (k - 1.0) + 2.0 * m * lambda) /
                            (6.0 * d * d);
  return 2.0 * m * lambda * second_moment / d + noise_term;
}

double RelativeMseTheoryQa(int m, int k, double lambda, double second_moment,
                           std::int64_t n) {
  if (n < 1) {
    throw ValidationError("n must be >= 1");
  }
  return QaAlpha(m, k, lambda, second_moment) / static_cast<double>(n);
}

}  // namespace pmga
