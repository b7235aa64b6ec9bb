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

// k-means aggregation of the points and the error bound of solving the
// aggregated problem instead of the original one.

#ifndef HYPERLOC_AGGREGATION_H_
#define HYPERLOC_AGGREGATION_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "hyperloc/geometry.h"
#include "hyperloc/objectives.h"
#include "hyperloc/solution.h"

namespace hyperloc {

struct AggregationMap {
  Instance original;
  std::vector<Point> centroids;
  // Centroid of every original point.
  std::vector<int> assignment;
  ResidualKind kind = ResidualKind::kVertical;
  // Slope bound used by the vertical displacement.
  double slope_bound = 0.0;
  // max_i D(x_i, x'_i).
  double t = 0.0;

  // One entry per original point, x'_i = centroids[assignment[i]].
  Instance Aggregated() const;
};

// Displacement D(x, y) under which residuals are 1-Lipschitz: the L1
// distance for L1 residuals and |x_d - y_d| + B sum_{l<d} |x_l - y_l| for
// vertical residuals of slopes bounded by B. Throws kUnsupportedResidual for
// L2 and LInf.
double Displacement(std::span<const double> x, std::span<const double> y,
                    ResidualKind kind, double slope_bound);

// Lloyd iterations from a k-means++ start, at most `iterations` rounds.
// `coef_bound` is the B of MakeCoefficientBox (0 for its default). Throws
// kBadParam unless 1 <= k <= n.
AggregationMap KMeansAggregate(const Instance& instance, int k, uint32_t seed,
                               ResidualKind kind, double coef_bound = 0.0,
                               int iterations = 100);

struct AggregationReport {
  double t = 0.0;
  // 2 OM(T, ..., T) = 2 T sum(lambda).
  double bound = 0.0;
  // Optimum of the aggregated problem.
  double aggregated_objective = 0.0;
  // Aggregated optimum's hyperplanes evaluated on the original points.
  double realized_objective = 0.0;
  double best_known = 0.0;
  double realized_error = 0.0;
  // 100 * realized_error / best_known, 0 when best_known is 0.
  double percent = 0.0;
  Solution solution;
};

using InstanceSolver =
    std::function<MipResult(const Instance&, const OrderedWeights&)>;

// Solves the aggregated problem and evaluates it on the original points.
// Without `best_known` the original problem is solved too.
AggregationReport BoundAndError(const AggregationMap& map,
                                const OrderedWeights& lambda,
                                const InstanceSolver& solve,
                                std::optional<double> best_known = {});

}  // namespace hyperloc

#endif  // HYPERLOC_AGGREGATION_H_
