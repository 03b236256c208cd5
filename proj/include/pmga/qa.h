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

#ifndef PMGA_QA_H_
#define PMGA_QA_H_

#include <cstdint>
#include <vector>

#include "pmga/population.h"
#include "pmga/rng.h"

namespace pmga {

// Query-and-Aggregate scheme: each user is assigned a k x 2m query matrix
// whose rows are permutations of the alphabet, applies randomized response
// with parameter lambda to his value, and reports the column index of the
// (randomized) value in his group's row. The server decodes the answer into
// the full column and rescales the column sum into an unbiased estimate.

// Value-randomization parameter. Domain [0, (2m-1)/(2m)); the upper end is
// clipped by a 1e-12 guard so the unbiasing scale stays finite.
struct QaParams {
  double lambda = 0.0;
};

// Supremum of the lambda domain, (2m-1)/(2m).
double QaLambdaSup(int m);
// Largest accepted lambda, QaLambdaSup(m) - 1e-12.
double QaLambdaMax(int m);
// Throws ValidationError if lambda is outside [0, QaLambdaMax(m)].
void ValidateQaParams(const QaParams& params, int m);

// k x 2m matrix; every row is a permutation of the alphabet. Groups and
// columns are 1-based.
class QueryMatrix {
 public:
  QueryMatrix(int k, int m, std::vector<int> cells);

  int k() const { return k_; }
  int m() const { return m_; }
  int columns() const { return 2 * m_; }
  int At(int group, int column) const;
  // Column as a length-k vector (the server's decoding of an answer).
  std::vector<int> Column(int column) const;
  // Column index of `value` in the given group's row.
  int ColumnOf(int group, int value) const;

  const std::vector<int>& cells() const { return cells_; }
  bool operator==(const QueryMatrix& other) const = default;

 private:
  int k_;
  int m_;
  std::vector<int> cells_;  // row-major
};

struct QaAnswer {
  std::int64_t user_index = 0;
  int column = 0;  // in [1, 2m]
};

// Uniform draw from the query set Q: independent Fisher-Yates shuffle per
// row. Q is the k-fold product of Sym(V), so this is exactly uniform on Q.
QueryMatrix SampleQuery(int k, const Alphabet& alphabet, RngStream& stream);

// Deterministic query assignment shared by server and user: the query is a
// pure function of (master_seed, user_index), uniform over Q as the seed
// varies. No query bits count toward communication.
QueryMatrix DeriveQuery(std::uint64_t master_seed, std::int64_t user_index,
                        int k, const Alphabet& alphabet);

// Randomized response on a value: keep with probability 1 - lambda, else
// uniform over the other 2m - 1 values.
int RandomizeValue(int value, const QaParams& params, const Alphabet& alphabet,
                   RngStream& stream);

QaAnswer Answer(const QueryMatrix& query, int group, int randomized_value,
                std::int64_t user_index = 0);

std::vector<int> Decode(const QueryMatrix& query, const QaAnswer& answer);

// Unbiasing scale (2m-1)/(2m - 2m*lambda - 1).
double QaScale(int m, double lambda);

// S-hat = QaScale * sum of decoded columns.
AggregateVector QaEstimate(const std::vector<std::vector<int>>& decoded_columns,
                           const QaParams& params, int m, int k);

// Privacy level of the scheme (natural log): maximizes
// ((2m(1-lambda)-1) p_g(v) + lambda) / ((2m(1-lambda)-1) p_g'(v') + lambda)
// over values v, v' and distinct groups g != g'.
double EpsilonQa(const PopulationModel& model, const QaParams& params);

// Privacy at lambda = 0: ln of the maximal cross-group ratio p_g(v)/p_g'(v').
double IntrinsicEpsilon(const PopulationModel& model);

// Smallest lambda guaranteeing privacy epsilon, three modes:
//   distribution-free bound, side-information bound given c_min < p < c_max,
//   and exact bisection against EpsilonQa (monotone nonincreasing in lambda).
QaParams MinLambdaDistributionFree(int m, double epsilon);
QaParams MinLambdaSideInfo(int m, double epsilon, double c_min, double c_max);
QaParams MinLambdaExact(const PopulationModel& model, double epsilon);

// The relative-MSE coefficient alpha; relative MSE is alpha / n.
double QaAlpha(int m, int k, double lambda, double second_moment);
double RelativeMseTheoryQa(int m, int k, double lambda, double second_moment,
                           std::int64_t n);

}  // namespace pmga

#endif  // PMGA_QA_H_
