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

// Initial columns, a 1-interchange incumbent, the exact single-hyperplane
// fit and geometric checks on single-hyperplane optima.

#ifndef HYPERLOC_HEURISTICS_H_
#define HYPERLOC_HEURISTICS_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hyperloc/column.h"
#include "hyperloc/geometry.h"
#include "hyperloc/objectives.h"
#include "hyperloc/solution.h"

namespace hyperloc {

struct FitResult {
  Hyperplane hyperplane;
  double cost = 0.0;
};

// OM-optimal hyperplane for the points `subset` with weights of length
// |subset|. In the plane the minimum is taken over the vertices of the
// zero-residual and equal-residual arrangement (zero-residual only for
// Weber); otherwise an LP per gauge face is solved.
FitResult FitSingleHyperplane(const Instance& instance,
                              std::span<const int> subset,
                              const OrderedWeights& lambda, ResidualKind kind);

// Pair hyperplanes (completed with the lowest-index further points when
// d > 2) over all points, the best single hyperplane, and one artificial
// singleton per point.
ColumnPool InitialPool(const Instance& instance, ResidualKind kind,
                       const OrderedWeights& lambda);

// Adds the clusters of a solution as columns.
void AddSolutionColumns(const Instance& instance, const Solution& solution,
                        ResidualKind kind, ColumnPool* pool);

// Local search over p hyperplanes: a hyperplane is replaced by one through
// d points of its cluster, the cluster's best Weber fit or a random d-subset
// whenever the ordered median improves. Deterministic for a given seed.
Solution InterchangeHeuristic(const Instance& instance, int p,
                              const OrderedWeights& lambda, ResidualKind kind,
                              uint32_t seed, int restarts = 1);

struct GeometryCheck {
  std::string name;
  bool applicable = false;
  bool passed = false;
  std::string witness;
};

// Pseudo-halving for Weber and blockedness / parallel-facet witnesses for
// Center on single-hyperplane solutions; other inputs are NotApplicable.
std::vector<GeometryCheck> Diagnostics(const Solution& solution,
                                       const Instance& instance,
                                       const OrderedWeights& lambda,
                                       ResidualKind kind);

}  // namespace hyperloc

#endif  // HYPERLOC_HEURISTICS_H_
