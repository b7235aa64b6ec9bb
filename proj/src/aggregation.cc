// Copyright 2026 The hyperloc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hyperloc/aggregation.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "hyperloc/error.h"
#include "hyperloc/pricing.h"

namespace hyperloc {
namespace {

double SquaredDistance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t l = 0; l < a.size(); ++l) s += (a[l] - b[l]) * (a[l] - b[l]);
  return s;
}

// Nearest centroid, ties to the lowest index.
int Nearest(std::span<const double> x, const std::vector<Point>& centroids) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (size_t c = 0; c < centroids.size(); ++c) {
    const double dist = SquaredDistance(x, centroids[c]);
    if (dist < best_d) {
      best_d = dist;
      best = static_cast<int>(c);
    }
  }
  return best;
}

std::vector<Point> PlusPlusSeeds(const Instance& instance, int k,
                                 std::mt19937_64& rng) {
  const int n = instance.size();
  std::vector<Point> seeds;
  std::vector<char> taken(n, 0);
  const int first = std::uniform_int_distribution<int>(0, n - 1)(rng);
  taken[first] = 1;
  seeds.emplace_back(instance.point(first).begin(),
                     instance.point(first).end());
  std::vector<double> d2(n);
  for (int i = 0; i < n; ++i)
    d2[i] = SquaredDistance(instance.point(i), seeds[0]);
  while (static_cast<int>(seeds.size()) < k) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) total += taken[i] ? 0.0 : d2[i];
    int next = -1;
    if (total > 0.0) {
      std::vector<double> w(n);
      for (int i = 0; i < n; ++i) w[i] = taken[i] ? 0.0 : d2[i];
      next = std::discrete_distribution<int>(w.begin(), w.end())(rng);
    } else {
      // Only duplicates of chosen seeds remain.
      for (int i = 0; i < n && next < 0; ++i) {
        if (!taken[i]) next = i;
      }
    }
    taken[next] = 1;
    seeds.emplace_back(instance.point(next).begin(),
                       instance.point(next).end());
    for (int i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], SquaredDistance(instance.point(i), seeds.back()));
    }
  }
  return seeds;
}

}  // namespace

Instance AggregationMap::Aggregated() const {
  std::vector<Point> pts;
  pts.reserve(assignment.size());
  for (int c : assignment) pts.push_back(centroids[c]);
  return Instance(pts);
}

double Displacement(std::span<const double> x, std::span<const double> y,
                    ResidualKind kind, double slope_bound) {
  RequireSolvableKind(kind);
  if (x.size() != y.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "points of different dimension");
  }
  const size_t d = x.size();
  double s = 0.0;
  if (kind == ResidualKind::kL1) {
    for (size_t l = 0; l < d; ++l) s += std::abs(x[l] - y[l]);
    return s;
  }
  for (size_t l = 0; l + 1 < d; ++l) s += std::abs(x[l] - y[l]);
  return std::abs(x[d - 1] - y[d - 1]) + slope_bound * s;
}

AggregationMap KMeansAggregate(const Instance& instance, int k, uint32_t seed,
                               ResidualKind kind, double coef_bound,
                               int iterations) {
  RequireSolvableKind(kind);
  const int n = instance.size();
  const int d = instance.dim();
  if (k < 1 || k > n) throw Error(ErrorCode::kBadParam, "k must be in [1, n]");
  if (iterations < 1) throw Error(ErrorCode::kBadParam, "iterations < 1");
  AggregationMap map;
  map.original = instance;
  map.kind = kind;
  map.slope_bound = kind == ResidualKind::kVertical
                        ? MakeCoefficientBox(instance, kind, coef_bound).slope
                        : 1.0;
  std::mt19937_64 rng(seed);
  map.centroids = PlusPlusSeeds(instance, k, rng);
  map.assignment.assign(n, -1);
  for (int round = 0; round < iterations; ++round) {
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      const int c = Nearest(instance.point(i), map.centroids);
      changed = changed || c != map.assignment[i];
      map.assignment[i] = c;
    }
    if (!changed) break;
    std::vector<Point> sum(k, Point(d, 0.0));
    std::vector<int> count(k, 0);
    for (int i = 0; i < n; ++i) {
      const int c = map.assignment[i];
      ++count[c];
      for (int l = 0; l < d; ++l) sum[c][l] += instance.coord(i, l);
    }
    // An empty cluster keeps its centroid.
    for (int c = 0; c < k; ++c) {
      if (count[c] == 0) continue;
      for (int l = 0; l < d; ++l) map.centroids[c][l] = sum[c][l] / count[c];
    }
  }
  for (int i = 0; i < n; ++i) {
    map.t = std::max(
        map.t, Displacement(instance.point(i), map.centroids[map.assignment[i]],
                            kind, map.slope_bound));
  }
  return map;
}

AggregationReport BoundAndError(const AggregationMap& map,
                                const OrderedWeights& lambda,
                                const InstanceSolver& solve,
                                std::optional<double> best_known) {
  AggregationReport report;
  report.t = map.t;
  report.bound = 2.0 * map.t * lambda.Sum();
  const MipResult reduced = solve(map.Aggregated(), lambda);
  if (!reduced.has_solution) {
    throw Error(ErrorCode::kNotSolved, "aggregated problem has no solution");
  }
  report.aggregated_objective = reduced.solution.objective;
  report.solution = EvaluateArrangement(
      map.original, reduced.solution.hyperplanes, lambda, map.kind);
  report.realized_objective = report.solution.objective;
  if (!best_known) {
    const MipResult full = solve(map.original, lambda);
    if (!full.has_solution) {
      throw Error(ErrorCode::kNotSolved, "original problem has no solution");
    }
    best_known = full.solution.objective;
  }
  report.best_known = *best_known;
  report.realized_error = report.realized_objective - report.best_known;
  report.percent = report.best_known > 0.0
                       ? 100.0 * report.realized_error / report.best_known
                       : 0.0;
  return report;
}

}  // namespace hyperloc
