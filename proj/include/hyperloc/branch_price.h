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

// Branch-and-price over the set-partitioning master: Ryan-Foster branching,
// merging of fractional columns that share a member set, face branching for
// L1 families that cannot be merged, and best-bound search.

#ifndef HYPERLOC_BRANCH_PRICE_H_
#define HYPERLOC_BRANCH_PRICE_H_

#include <optional>
#include <utility>
#include <vector>

#include "hyperloc/column.h"
#include "hyperloc/geometry.h"
#include "hyperloc/objectives.h"
#include "hyperloc/pricing.h"
#include "hyperloc/solution.h"

namespace hyperloc {

// A hyperplane whose residual at every point is at most the sigma-weighted
// residual sum of the sources.
struct MergeCertificate {
  std::vector<int> sources;
  std::vector<double> sigma;
  Hyperplane merged;
};

// Vertical: convex combination in vertical gauge. L1: needs a coordinate l
// with |beta_l| = 1 in every source (after sign alignment the combination
// keeps ||beta||_inf = 1); nullopt otherwise. Inputs must be in the gauge
// of `kind` (kGaugeError otherwise); sigma must be positive.
std::optional<Hyperplane> MergeHyperplanes(const std::vector<Hyperplane>& hs,
                                           const std::vector<double>& sigma,
                                           ResidualKind kind);

// Merges columns on identical member sets, weights proportional to y.
std::optional<MergeCertificate> TryMerge(
    const std::vector<const Column*>& columns, const std::vector<double>& y,
    ResidualKind kind);

enum class BranchKind { kRyanFoster, kThreeWay, kFace };

struct BranchDecision {
  BranchKind kind = BranchKind::kRyanFoster;
  int i = -1;  // RF pair, or the Face point in i
  int j = -1;
  double cooccurrence = 0.0;
  int column_a = -1;  // 3-way columns
  int column_b = -1;
  // Constraints added by each child.
  std::vector<std::vector<BranchConstraint>> children;
};

// Chooses a branch for the positive columns (id, y) of a converged master.
// A pair with fractional co-occurrence closest to 0.5 (ties lexicographic)
// gives Ryan-Foster. Otherwise an unmergeable family gives a Face branch on
// its lowest point without a face constraint, or ThreeWay when
// `three_way` is set. Throws kNoFractionality when neither exists.
BranchDecision SelectBranch(const ColumnPool& pool,
                            const std::vector<std::pair<int, double>>& positive,
                            int n, int d, ResidualKind kind,
                            const std::vector<BranchConstraint>& node,
                            bool three_way = false);

// Together groups, Apart pairs, points of fixed columns, forbidden columns
// and face constraints. Throws kInfeasibleConstraints on a contradiction.
PricerRestriction ApplyToPricer(int n,
                                const std::vector<BranchConstraint>& node);

struct BnpOptions {
  double time_limit_secs = 600.0;
  // 0 means unlimited.
  int64_t node_limit = 0;
  uint32_t seed = 0;
  int heuristic_restarts = 3;
  // Use the Fix | Fix | Forbid branch for unmergeable L1 families instead
  // of the face branch.
  bool three_way = false;
  PricerOptions pricer;
  double cg_tolerance = 1e-6;
  // Dual smoothing weight of column generation, in [0, 1).
  double smoothing = 0.5;
  // Optional starting incumbent.
  std::optional<Solution> initial;
};

MipResult SolveBnp(const Instance& instance, int p,
                   const OrderedWeights& lambda, ResidualKind kind,
                   const BnpOptions& options = {});

}  // namespace hyperloc

#endif  // HYPERLOC_BRANCH_PRICE_H_
