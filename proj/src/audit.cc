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

#include "pmga/audit.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace pmga {

namespace {

// Pr(randomized value = target | true value), randomized response.
double RrProb(int target, int true_value, double lambda, int m) {
  return target == true_value ? 1.0 - lambda : lambda / (2.0 * m - 1.0);
}

}  // namespace

ChannelTable QaChannel(const PopulationModel& model, double lambda,
                       const QueryMatrix& query) {
  const Alphabet& alphabet = model.alphabet();
  const int m = alphabet.m();
  ValidateQaParams(QaParams{.lambda = lambda}, m);
  if (query.k() != model.k() || query.m() != m) {
    throw ValidationError("query shape does not match the model");
  }
  ChannelTable table{.scheme = ChannelTable::Scheme::kQa,
                     .groups = model.k(),
                     .answers = alphabet.size()};
  table.probs.resize(static_cast<std::size_t>(table.groups) * table.answers);
  for (int g = 1; g <= model.k(); ++g) {
    for (int a = 1; a <= alphabet.size(); ++a) {
      const int target = query.At(g, a);
      double prob = 0.0;
      for (int vi = 0; vi < alphabet.size(); ++vi) {
        const int v = alphabet.ValueAt(vi);
        prob += model.ValueRow(g)[vi] * RrProb(target, v, lambda, m);
      }
      table.probs[static_cast<std::size_t>(g - 1) * table.answers + (a - 1)] =
          prob;
    }
  }
  return table;
}

ChannelTable RgChannel(const PopulationModel& model, const RgParams& params) {
  const Alphabet& alphabet = model.alphabet();
  const int m = alphabet.m();
  const int k = model.k();
  ValidateRgParams(params, m);
  ChannelTable table{.scheme = ChannelTable::Scheme::kRg,
                     .groups = k,
                     .answers = k * alphabet.size()};
  table.probs.resize(static_cast<std::size_t>(k) * table.answers);
  const double lying_cell = params.lambda_gr / (2.0 * m * (k - 1.0));
  for (int g = 1; g <= k; ++g) {
    for (int rg = 1; rg <= k; ++rg) {
      for (int vi = 0; vi < alphabet.size(); ++vi) {
        double prob;
        if (rg == g) {
          const int reported = alphabet.ValueAt(vi);
          prob = 0.0;
          for (int ti = 0; ti < alphabet.size(); ++ti) {
            const int true_value = alphabet.ValueAt(ti);
            prob += model.ValueRow(g)[ti] *
                    RrProb(reported, true_value, params.lambda_vl, m);
          }
          prob *= 1.0 - params.lambda_gr;
        } else {
          prob = lying_cell;
        }
        const std::size_t answer =
            static_cast<std::size_t>(rg - 1) * alphabet.size() + vi;
        table.probs[static_cast<std::size_t>(g - 1) * table.answers + answer] =
            prob;
      }
    }
  }
  return table;
}

double AuditedEpsilon(const ChannelTable& table) {
  double max_ratio = 1.0;
  for (int a = 0; a < table.answers; ++a) {
    for (int g = 1; g <= table.groups; ++g) {
      for (int h = 1; h <= table.groups; ++h) {
        if (g == h) continue;
        const double num = table.At(g, a);
        const double den = table.At(h, a);
        if (den <= 0.0) {
          if (num > 0.0) return std::numeric_limits<double>::infinity();
          continue;
        }
        max_ratio = std::max(max_ratio, num / den);
      }
    }
  }
  return std::log(max_ratio);
}

std::vector<QueryMatrix> EnumerateQueries(int k, const Alphabet& alphabet,
                                          std::size_t limit) {
  const int width = alphabet.size();
  std::vector<int> base(static_cast<std::size_t>(width));
  for (int i = 0; i < width; ++i) base[i] = alphabet.ValueAt(i);

  std::vector<std::vector<int>> perms;
  std::vector<int> perm = base;
  do {
    perms.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));

  double count = 1.0;
  for (int g = 0; g < k; ++g) count *= static_cast<double>(perms.size());
  if (count > static_cast<double>(limit)) {
    throw ValidationError("query set too large to enumerate");
  }

  std::vector<QueryMatrix> queries;
  queries.reserve(static_cast<std::size_t>(count));
  std::vector<std::size_t> odometer(static_cast<std::size_t>(k), 0);
  for (;;) {
    std::vector<int> cells;
    cells.reserve(static_cast<std::size_t>(k) * width);
    for (int g = 0; g < k; ++g) {
      const auto& row = perms[odometer[g]];
      cells.insert(cells.end(), row.begin(), row.end());
    }
    queries.emplace_back(k, alphabet.m(), std::move(cells));
    int pos = k - 1;
    while (pos >= 0 && ++odometer[pos] == perms.size()) {
      odometer[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return queries;
}

double AuditQaEpsilonExhaustive(const PopulationModel& model, double lambda,
                                std::size_t limit) {
  double worst = 0.0;
  for (const QueryMatrix& query :
       EnumerateQueries(model.k(), model.alphabet(), limit)) {
    worst = std::max(worst, AuditedEpsilon(QaChannel(model, lambda, query)));
  }
  return worst;
}

double AuditQaEpsilon(const PopulationModel& model, double lambda) {
  const Alphabet& alphabet = model.alphabet();
  const int m = alphabet.m();
  ValidateQaParams(QaParams{.lambda = lambda}, m);
  double max_ratio = 1.0;
  for (int g = 1; g <= model.k(); ++g) {
    for (int h = 1; h <= model.k(); ++h) {
      if (g == h) continue;
      for (int vi = 0; vi < alphabet.size(); ++vi) {
        for (int wi = 0; wi < alphabet.size(); ++wi) {
          // Channel probability of an answer cell whose row-g value is v,
          // enumerated over the true value.
          double num = 0.0;
          double den = 0.0;
          for (int ti = 0; ti < alphabet.size(); ++ti) {
            const int t = alphabet.ValueAt(ti);
            num += model.ValueRow(g)[ti] *
                   RrProb(alphabet.ValueAt(vi), t, lambda, m);
            den += model.ValueRow(h)[ti] *
                   RrProb(alphabet.ValueAt(wi), t, lambda, m);
          }
          max_ratio = std::max(max_ratio, num / den);
        }
      }
    }
  }
  return std::log(max_ratio);
}

double IntrinsicEpsilonBinary(double p1, double p2) {
  if (!(p1 > 0.0) || !(p1 < 1.0) || !(p2 > 0.0) || !(p2 < 1.0)) {
    throw ValidationError("p1 and p2 must lie in (0,1)");
  }
  const double hi1 = std::max(p1, 1.0 - p1);
  const double lo1 = std::min(p1, 1.0 - p1);
  const double hi2 = std::max(p2, 1.0 - p2);
  const double lo2 = std::min(p2, 1.0 - p2);
  return std::log(std::max(hi1 / lo2, hi2 / lo1));
}

std::vector<std::uint8_t> PrivacyRegion(double epsilon, int resolution) {
  if (resolution < 1) {
    throw ValidationError("resolution must be >= 1");
  }
  std::vector<std::uint8_t> cells(
      static_cast<std::size_t>(resolution) * resolution);
  for (int i = 0; i < resolution; ++i) {
    const double p1 = (i + 0.5) / resolution;
    for (int j = 0; j < resolution; ++j) {
      const double p2 = (j + 0.5) / resolution;
      cells[static_cast<std::size_t>(i) * resolution + j] =
          IntrinsicEpsilonBinary(p1, p2) <= epsilon + 1e-12 ? 1 : 0;
    }
  }
  return cells;
}

std::string RegionCsv(const std::vector<double>& epsilons, int resolution) {
  std::string out = "# pmga region csv v1\n";
  out += "p1,p2,epsilon_intrinsic";
  char buf[64];
  for (double eps : epsilons) {
    std::snprintf(buf, sizeof(buf), ",in_eps_%.12g", eps);
    out += buf;
  }
  out += "\n";
  for (int i = 0; i < resolution; ++i) {
    const double p1 = (i + 0.5) / resolution;
    for (int j = 0; j < resolution; ++j) {
      const double p2 = (j + 0.5) / resolution;
      const double intrinsic = IntrinsicEpsilonBinary(p1, p2);
      std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g", p1, p2, intrinsic);
      out += buf;
      for (double eps : epsilons) {
        out += intrinsic <= eps + 1e-12 ? ",1" : ",0";
      }
      out += "\n";
    }
  }
  return out;
}

}  // namespace pmga
