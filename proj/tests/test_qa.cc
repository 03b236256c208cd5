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

#include <cmath>
#include <map>
#include <vector>

#include "doctest.h"
#include "test_util.h"

using namespace pmga;
using namespace pmga::testing;

namespace {

// The worked three-group m=2 example queries.
const QueryMatrix kExampleQuery(3, 2,
                                {-2, -1, 1, 2,
                                 -2, 1, -1, 2,
                                 2, -1, -2, 1});
const QueryMatrix kExampleQuery2(3, 2,
                                 {-2, -1, 1, 2,
                                  1, -2, 2, -1,
                                  1, -2, 2, -1});

}  // namespace

TEST_CASE("query matrix rows must be alphabet permutations") {
  CHECK_THROWS_AS(QueryMatrix(2, 1, {1, 1, -1, 1}), ValidationError);
  CHECK_THROWS_AS(QueryMatrix(2, 1, {1, 0, -1, 1}), ValidationError);
  CHECK_NOTHROW(QueryMatrix(2, 1, {1, -1, -1, 1}));
}

TEST_CASE("lambda domain is [0, (2m-1)/(2m)) with a guard at the top") {
  CHECK(QaLambdaSup(1) == 0.5);
  CHECK(QaLambdaSup(2) == 0.75);
  CHECK_NOTHROW(ValidateQaParams(QaParams{.lambda = 0.0}, 1));
  CHECK_NOTHROW(ValidateQaParams(QaParams{.lambda = QaLambdaMax(1)}, 1));
  CHECK_THROWS_AS(ValidateQaParams(QaParams{.lambda = 0.5}, 1),
                  ValidationError);
  CHECK_THROWS_AS(ValidateQaParams(QaParams{.lambda = -0.1}, 1),
                  ValidationError);
}

TEST_CASE("sampled queries are uniform over the m=1 row choices") {
  const Alphabet alphabet(1);
  RngStream stream(7);
  const std::int64_t draws = 100000;
  std::int64_t row1_swapped = 0;
  for (std::int64_t i = 0; i < draws; ++i) {
    const QueryMatrix q = SampleQuery(2, alphabet, stream);
    for (int g = 1; g <= 2; ++g) {
      // Permutation property: each row holds both values.
      CHECK(q.At(g, 1) + q.At(g, 2) == 0);
    }
    if (q.At(1, 1) == 1) ++row1_swapped;
  }
  const double fraction = static_cast<double>(row1_swapped) / draws;
  CHECK(std::abs(fraction - 0.5) < 4.0 * std::sqrt(0.25 / draws));
}

TEST_CASE("all four m=1 k=2 queries appear equally often") {
  const Alphabet alphabet(1);
  RngStream stream(11);
  const std::int64_t draws = 100000;
  std::map<std::vector<int>, std::int64_t> counts;
  for (std::int64_t i = 0; i < draws; ++i) {
    counts[SampleQuery(2, alphabet, stream).cells()] += 1;
  }
  REQUIRE(counts.size() == 4);
  for (const auto& [cells, count] : counts) {
    const double fraction = static_cast<double>(count) / draws;
    CHECK(std::abs(fraction - 0.25) < 4.0 * std::sqrt(0.25 * 0.75 / draws));
  }
}

TEST_CASE("derived queries are deterministic and seed-sensitive") {
  const Alphabet alphabet(2);
  const QueryMatrix a = DeriveQuery(3, 17, 3, alphabet);
  const QueryMatrix b = DeriveQuery(3, 17, 3, alphabet);
  CHECK(a == b);
  int collisions = 0;
  for (int i = 0; i < 10000; ++i) {
    if (DeriveQuery(1000 + i, 1, 2, Alphabet(1)) ==
        DeriveQuery(2000000 + i, 1, 2, Alphabet(1))) {
      ++collisions;
    }
  }
  // |Q| = 4 at m=1, k=2, so roughly a quarter of seed pairs collide.
  const double fraction = collisions / 10000.0;
  CHECK(std::abs(fraction - 0.25) < 4.0 * std::sqrt(0.25 * 0.75 / 10000.0));
}

TEST_CASE("derived query rows have unbiased sign frequencies") {
  const Alphabet alphabet(1);
  std::int64_t swapped = 0;
  const std::int64_t draws = 10000;
  for (std::int64_t i = 1; i <= draws; ++i) {
    if (DeriveQuery(99, i, 2, alphabet).At(1, 1) == 1) ++swapped;
  }
  const double fraction = static_cast<double>(swapped) / draws;
  CHECK(std::abs(fraction - 0.5) < 4.0 * std::sqrt(0.25 / draws));
}

TEST_CASE("randomize value keeps the input at lambda 0") {
  const Alphabet alphabet(2);
  RngStream stream(5);
  for (int i = 0; i < 1000; ++i) {
    CHECK(RandomizeValue(-2, QaParams{.lambda = 0.0}, alphabet, stream) == -2);
  }
}

TEST_CASE("randomize value frequencies match the response distribution") {
  RngStream stream(13);
  const std::int64_t draws = 100000;

  SUBCASE("m=1 lambda 0.25") {
    const Alphabet alphabet(1);
    std::int64_t kept = 0;
    for (std::int64_t i = 0; i < draws; ++i) {
      if (RandomizeValue(1, QaParams{.lambda = 0.25}, alphabet, stream) == 1) {
        ++kept;
      }
    }
    const double fraction = static_cast<double>(kept) / draws;
    CHECK(std::abs(fraction - 0.75) < 4.0 * std::sqrt(0.25 * 0.75 / draws));
  }

  SUBCASE("m=2 lambda 0.3") {
    const Alphabet alphabet(2);
    std::vector<std::int64_t> counts(4, 0);
    for (std::int64_t i = 0; i < draws; ++i) {
      const int out =
          RandomizeValue(-2, QaParams{.lambda = 0.3}, alphabet, stream);
      ++counts[alphabet.IndexOf(out)];
    }
    const std::vector<double> probs = {0.7, 0.1, 0.1, 0.1};
    CHECK(ChiSquaredStat(counts, probs, draws) < ChiSquaredCritical(3));
  }
}

TEST_CASE("worked example answers and decodings") {
  const QaAnswer first = Answer(kExampleQuery, 2, -1);
  CHECK(first.column == 3);
  CHECK(Decode(kExampleQuery, first) == std::vector<int>{1, -1, -2});
  const QaAnswer second = Answer(kExampleQuery2, 2, -1);
  CHECK(second.column == 4);
  CHECK(Decode(kExampleQuery2, second) == std::vector<int>{2, -1, -1});
  CHECK(kExampleQuery.At(2, 3) == -1);
  CHECK(kExampleQuery2.At(2, 4) == -1);
}

TEST_CASE("answer and decode round-trip for every cell") {
  for (const QueryMatrix* q : {&kExampleQuery, &kExampleQuery2}) {
    for (int g = 1; g <= q->k(); ++g) {
      for (int c = 1; c <= q->columns(); ++c) {
        const int v = q->At(g, c);
        const QaAnswer a = Answer(*q, g, v);
        CHECK(a.column == c);
        CHECK(Decode(*q, a)[g - 1] == v);
      }
    }
  }
  CHECK_THROWS_AS(Decode(kExampleQuery, QaAnswer{.column = 5}),
                  ValidationError);
}

TEST_CASE("estimator scale and degenerate cases") {
  CHECK(QaScale(1, 0.0) == 1.0);
  CHECK(QaScale(1, 0.25) == doctest::Approx(2.0).epsilon(1e-15));
  // All users in group 1 with value +1 at lambda 0: own-group row is exact.
  const QueryMatrix q(2, 1, {1, -1, -1, 1});
  std::vector<std::vector<int>> decoded;
  const int n = 20;
  for (int i = 0; i < n; ++i) {
    decoded.push_back(Decode(q, Answer(q, 1, 1)));
  }
  const AggregateVector s = QaEstimate(decoded, QaParams{.lambda = 0.0}, 1, 2);
  CHECK(s[0] == static_cast<double>(n));
}

TEST_CASE("privacy level of the scheme") {
  CHECK(EpsilonQa(BinaryModel(0.5, 0.5), QaParams{.lambda = 0.0}) == 0.0);
  // Max cross-group ratio 0.6/0.3 = 0.7/0.35... the binding pair is
  // 0.6 vs 0.3 at lambda 0.
  CHECK(EpsilonQa(BinaryModel(0.6, 0.3), QaParams{.lambda = 0.0}) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
  // Near the domain supremum every answer washes out to uniform.
  CHECK(EpsilonQa(BinaryModel(0.9, 0.05),
                  QaParams{.lambda = QaLambdaMax(1)}) ==
        doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("epsilon is monotone nonincreasing in lambda") {
  for (const PopulationModel& model :
       {BinaryModel(0.6, 0.3), BinaryModel(0.9, 0.01), SkewedModel(3, 2)}) {
    const int m = model.alphabet().m();
    double prev = EpsilonQa(model, QaParams{.lambda = 0.0});
    for (int i = 1; i <= 100; ++i) {
      const double lambda = std::min(QaLambdaMax(m), QaLambdaMax(m) * i / 100.0);
      const double eps = EpsilonQa(model, QaParams{.lambda = lambda});
      CHECK(eps <= prev + 1e-12);
      prev = eps;
    }
  }
}

TEST_CASE("intrinsic privacy equals the lambda-0 level") {
  CHECK(IntrinsicEpsilon(UniformModel(3, 2)) == 0.0);
  // Cross-group pairs only: the binding ratio is p_1(+1)/p_2(+1) = 90, not
  // the same-group 0.99/0.01.
  CHECK(IntrinsicEpsilon(BinaryModel(0.9, 0.01)) ==
        doctest::Approx(std::log(90.0)).epsilon(1e-12));
  const PopulationModel model = SkewedModel(3, 2);
  CHECK(IntrinsicEpsilon(model) ==
        doctest::Approx(EpsilonQa(model, QaParams{.lambda = 0.0}))
            .epsilon(1e-15));
  // Bounded by ln(c_max/c_min) over the model's entries.
  const auto [p_max, p_min] = model.ExtremeProbs();
  CHECK(IntrinsicEpsilon(model) <= std::log(p_max / p_min) + 1e-12);
}

TEST_CASE("minimal lambda: distribution-free, side-info, and exact modes") {
  CHECK(MinLambdaDistributionFree(1, std::log(2.0)).lambda ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  // Intrinsic privacy already sufficient: exact mode returns 0.
  const PopulationModel mild = BinaryModel(0.525, 0.5);
  REQUIRE(IntrinsicEpsilon(mild) < 0.2);
  CHECK(MinLambdaExact(mild, 0.5).lambda == 0.0);

  for (const PopulationModel& model :
       {BinaryModel(0.6, 0.3), BinaryModel(0.9, 0.01), SkewedModel(3, 2)}) {
    const int m = model.alphabet().m();
    const auto [c_max, c_min] = model.ExtremeProbs();
    for (double eps : {0.1, 0.5, 1.0, 2.0}) {
      const double exact = MinLambdaExact(model, eps).lambda;
      CHECK(EpsilonQa(model, QaParams{.lambda = exact}) <= eps + 1e-9);
      // The exact answer is never worse than either bound.
      CHECK(exact <= MinLambdaDistributionFree(m, eps).lambda + 1e-12);
      CHECK(exact <= MinLambdaSideInfo(m, eps, c_min, c_max).lambda + 1e-9);
      // And a hair less lambda breaks the target (when lambda > 0).
      if (exact > 1e-9) {
        CHECK(EpsilonQa(model, QaParams{.lambda = exact - 1e-7}) > eps);
      }
    }
  }
}

TEST_CASE("relative error coefficient alpha") {
  CHECK(QaAlpha(1, 2, 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(RelativeMseTheoryQa(1, 2, 0.0, 1.0, 500) ==
        doctest::Approx(0.002).epsilon(1e-12));
  // Lambda-0 closed form for general (m, k).
  for (int m : {1, 2, 3}) {
    for (int k : {2, 3, 5}) {
      const double second_moment = UniformModel(k, m).SecondMoment();
      CHECK(QaAlpha(m, k, 0.0, second_moment) ==
            doctest::Approx((2.0 * m + 1.0) * (m + 1.0) * (k - 1.0) / 6.0)
                .epsilon(1e-12));
    }
  }
  // Strictly increasing in lambda.
  double prev = QaAlpha(2, 3, 0.0, 2.5);
  for (int i = 1; i <= 50; ++i) {
    const double lambda = std::min(QaLambdaMax(2), QaLambdaMax(2) * i / 50.0);
    const double alpha = QaAlpha(2, 3, lambda, 2.5);
    CHECK(alpha > prev);
    prev = alpha;
  }
}

TEST_CASE("alpha agrees with an independently grouped algebraic route") {
  // Same quantity assembled as D^-2 [ 2m lambda E[V^2] D +
  // (4m^2-1)(m+1)((2m-1)(k-1) + 2m lambda)/6 ].
  for (int m : {1, 2}) {
    for (int k : {2, 3}) {
      for (double lambda : {0.0, 0.1, 0.3}) {
        const double e2 = 1.3 * m * m;
        const double d = 2.0 * m - 2.0 * m * lambda - 1.0;
        const double other =
            (2.0 * m * lambda * e2 * d +
             (4.0 * m * m - 1.0) * (m + 1.0) *
                 ((2.0 * m - 1.0) * (k - 1.0) + 2.0 * m * lambda) / 6.0) /
            (d * d);
        CHECK(QaAlpha(m, k, lambda, e2) ==
              doctest::Approx(other).epsilon(1e-12));
      }
    }
  }
}
