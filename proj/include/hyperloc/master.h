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

// Restricted master problem of the set-partitioning formulation:
//   min sum_k u_k + sum_i v_i
//   s.t. u_k + v_i >= lambda_k sum_{S contains i} e^i_S y_S   for all i, k
//        sum_S y_S = p
//        sum_{S contains i} y_S = 1                             for all i
//        y >= 0
// with artificial columns keeping every node feasible. Positions k with
// equal lambda_k share one u variable (cost: the group size), which leaves
// the optimal value unchanged; the reported delta spreads each group dual
// evenly over its positions and stays doubly stochastic.
//
// When only lambda_1 is positive the objective is lambda_1 times the largest
// residual, which equals lambda_1 times the largest column maximum. The
// master then uses max_{j in S} e^j_S in place of e^i_S: integer solutions
// keep their value and the relaxation gets tighter.

#ifndef HYPERLOC_MASTER_H_
#define HYPERLOC_MASTER_H_

#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "hyperloc/column.h"
#include "hyperloc/lp_solver.h"
#include "hyperloc/objectives.h"

namespace hyperloc {

class Rmp {
 public:
  // Every point must be covered by some pool column (kUncoveredPoint).
  Rmp(int n, int p, const OrderedWeights& lambda, const ColumnPool* pool,
      double artificial_cost);

  int n() const { return n_; }
  int p() const { return p_; }
  double artificial_cost() const { return artificial_cost_; }
  bool bottleneck() const { return bottleneck_; }
  // Re-prices artificial columns and p-row slacks.
  void SetArtificialCost(double cost);

  // Adds pool columns that are not yet LP variables.
  void SyncColumns();
  // Deactivates inadmissible columns and fixes FixColumn targets to one.
  void ApplyConstraints(const std::vector<BranchConstraint>& constraints);

  const LpResult& Solve();
  bool solved() const { return solved_; }
  double objective() const;
  // Throws kNotSolved unless the last solve was optimal.
  DualPrices ExtractDuals() const;

  // Value of y for a pool column (0 when not in the LP).
  double ColumnValue(int column_id) const;
  // Pool columns with y > tol, as (id, y), artificial columns excluded.
  std::vector<std::pair<int, double>> PositiveColumns(double tol) const;
  // Total value on artificial columns and p-row slacks.
  double ArtificialMass() const;

  std::string DumpLp() const { return ToLpFormat(solver_.model()); }
  int64_t lp_iterations() const { return solver_.total_iterations(); }

 private:
  std::vector<LpEntry> ColumnEntries(const Column& column) const;

  int n_;
  int p_;
  OrderedWeights lambda_;
  bool bottleneck_;
  std::vector<int> group_of_;
  std::vector<double> group_weight_;
  std::vector<int> group_size_;
  const ColumnPool* pool_;
  double artificial_cost_;
  LpSolver solver_;
  int p_row_ = 0;
  int first_partition_row_ = 0;
  std::vector<int> var_of_column_;
  std::vector<int> column_of_var_;
  std::vector<int> slack_vars_;
  bool solved_ = false;
};

struct CgOptions {
  double tolerance = 1e-6;
  // Track the Lagrangian bound sum phi - p gamma + p min_rc at every exact
  // pricing call. Valid only without FixColumn constraints.
  bool lagrangian = false;
  // With lagrangian set, price at smoothing * center + (1 - smoothing) *
  // master duals, where the center holds the best bound so far.
  double smoothing = 0.0;
  // Stop once the Lagrangian bound reaches this value.
  double cutoff = std::numeric_limits<double>::infinity();
  int64_t iteration_limit = 100000;
  std::chrono::steady_clock::time_point deadline =
      std::chrono::steady_clock::time_point::max();
};

struct CgResult {
  double value = 0.0;
  // The last pricing call certified that no negative column exists.
  bool certified = false;
  bool hit_limit = false;
  int64_t iterations = 0;
  int64_t columns_added = 0;
  double min_reduced_cost = 0.0;
  // Best Lagrangian bound seen (-inf unless tracked).
  double lower_bound = -std::numeric_limits<double>::infinity();
  // Stopped because lower_bound reached the cutoff.
  bool cutoff = false;
};

// w * a + (1 - w) * b, entry by entry.
DualPrices MixDuals(const DualPrices& a, const DualPrices& b, double w);

// Lower bound on the master over all admissible columns without
// artificials, given duals feasible for the u, v columns and the exact
// minimum reduced cost at those duals.
double LagrangianBound(const DualPrices& duals, int p, double min_rc);

using PricingFunction = std::function<PricingOutcome(const DualPrices&)>;

// Alternates master solves and pricing until the pricer certifies that no
// column has reduced cost below -tolerance. Priced columns are added to the
// pool and to the master. Without Lagrangian tracking, certification means
// the last exact pricing call found nothing below -tolerance. With it, the
// loop also ends certified once the bound meets the master value.
CgResult RunColumnGeneration(Rmp* rmp, ColumnPool* pool,
                             const PricingFunction& price,
                             const CgOptions& options);

}  // namespace hyperloc

#endif  // HYPERLOC_MASTER_H_
