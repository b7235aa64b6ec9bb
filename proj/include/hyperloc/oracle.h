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

// Reference implementations used to certify the solvers on small inputs.
// Nothing here shares code with the optimization paths.

#ifndef HYPERLOC_ORACLE_H_
#define HYPERLOC_ORACLE_H_

#include <vector>

#include "hyperloc/geometry.h"
#include "hyperloc/objectives.h"

namespace hyperloc {

struct DualPrices;

namespace oracle {

// Dense textbook LP: min c^T x s.t. a_i^T x (<=|=|>=) b_i, x >= 0.
struct TableauLp {
  std::vector<double> c;
  std::vector<std::vector<double>> a;
  std::vector<char> sense;  // '<', '=' or '>'
  std::vector<double> b;
};

enum class TableauStatus { kOptimal, kInfeasible, kUnbounded };

struct TableauResult {
  TableauStatus status = TableauStatus::kInfeasible;
  double objective = 0.0;
  std::vector<double> x;
};

// Two-phase full-tableau simplex with Bland's rule.
TableauResult SolveTableau(const TableauLp& lp);

// Optimal value for a fixed partition of the points into clusters, each
// cluster fitted with its own hyperplane, evaluated with the ordered median
// of all residuals. Empty clusters are ignored.
double FixedPartitionValue(const Instance& instance,
                           const std::vector<std::vector<int>>& clusters,
                           const OrderedWeights& lambda, ResidualKind kind);

enum class OracleMode {
  kJoint,
  // Sum of single-cluster optima; only valid for Weber weights.
  kPerCluster,
};

// Exhaustive minimum over all partitions into at most p clusters.
// Requires n <= 10, d == 2, p <= 3 (kSizeLimit otherwise).
double BruteForceOptimum(const Instance& instance, int p,
                         const OrderedWeights& lambda, ResidualKind kind,
                         OracleMode mode = OracleMode::kJoint);

// Minimum over all hyperplanes through the vertices of the arrangement of
// equal-residual and zero-residual lines of one cluster (d == 2, p == 1).
double VertexEnumerationSingle(const Instance& instance,
                               const OrderedWeights& lambda, ResidualKind kind);

// Box searched by the grid pricing oracle, in gauge coordinates: the free
// slope(s) and the intercept.
struct GridBox {
  double slope_bound = 1.0;
  double intercept_bound = 1.0;
};

// Minimum over a uniform grid of hyperplanes of
//   gamma + sum_i min(0, cstar_i * residual_i - phi_i).
// Vertical: slope in [-s, s], intercept in [-a, a]. L1: each face beta_m = 1
// with the other coefficient in [-1, 1] and intercept in [-a, a].
double GridPricingOracle(const Instance& instance, const DualPrices& duals,
                         ResidualKind kind, int resolution, GridBox box);

}  // namespace oracle
}  // namespace hyperloc

#endif  // HYPERLOC_ORACLE_H_
