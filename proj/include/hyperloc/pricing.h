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

// Column pricing for the set-partitioning master.
//
// For fixed duals and a fixed subset S the pricing objective
//   gamma + sum_{i in S} (cstar_i * residual_i(h) - phi_i)
// is convex and piecewise linear in the gauge coordinates of h (cstar >= 0),
// so its minimum over h is attained at a vertex of the arrangement of
// zero-residual conditions, completed by coordinate pins. The exact pricer
// evaluates the best admissible subset at each such vertex.
//
// Under bottleneck costs the objective is
//   gamma + max_{i in S} residual_i(h) * sum_{i in S} cstar_i - sum phi_i
// and for fixed S it is minimized at a minimax fit of S. The pricer then
// scans every threshold residual at each candidate.

#ifndef HYPERLOC_PRICING_H_
#define HYPERLOC_PRICING_H_

#include <cstdint>
#include <vector>

#include "hyperloc/column.h"
#include "hyperloc/geometry.h"

namespace hyperloc {

// Box of gauge coordinates: |slope_l| <= slope, |alpha| <= intercept.
struct CoefficientBox {
  double slope = 1.0;
  double intercept = 1.0;
};

// Slope bound B (default 10 * max(1, max_l range(x_d) / range(x_l)); 1 for
// L1, whose gauge bounds slopes by one) and intercept bound
// B * (1 + max_i ||x_i||_1) with B the requested or default bound.
CoefficientBox MakeCoefficientBox(const Instance& instance, ResidualKind kind,
                                  double coef_bound = 0.0);

// Default B of MakeCoefficientBox.
double DefaultCoefficientBound(const Instance& instance);

enum CandidateFamily : unsigned {
  kIncidenceFamily = 1,     // residual_i = 0
  kEquidistanceFamily = 2,  // residual_i = +-residual_j
  kThresholdFamily = 4,     // cstar_i * residual_i = phi_i
  kFaceFamily = 8,          // L1 face boundaries |beta_l| = 1
  kAllFamilies = 15,
};

struct CandidateSet {
  std::vector<Hyperplane> hyperplanes;
  int64_t condition_lines = 0;
  int64_t pairs_tested = 0;
  int64_t parallel_pairs = 0;
};

// Vertices of the arrangement of the selected condition lines in the plane
// of gauge coordinates (d == 2 only, kDimensionUnsupported otherwise).
CandidateSet EnumerateCandidates(const Instance& instance,
                                 const DualPrices& duals, ResidualKind kind,
                                 const PricerRestriction& restriction,
                                 unsigned families = kAllFamilies);

// Hyperplanes fixed by d independent conditions among point incidences and
// coordinate pins (beta_l = 0 for vertical, |beta_l| = 1 on L1 faces), in any
// dimension. Returns false when more than `cap` would be generated.
bool IncidenceCandidates(const Instance& instance, ResidualKind kind,
                         int64_t cap, std::vector<Hyperplane>* out);

// Vertices of the minimax fit: hyperplanes where d+1 independent conditions
// hold among signed residuals residual_i = +-tau (tau free) and coordinate
// pins, in any dimension. Every minimax fit of a subset, restricted to any
// L1 face, is among them. Returns false when more than `cap` linear systems
// would be solved.
bool BottleneckCandidates(const Instance& instance, ResidualKind kind,
                          int64_t cap, std::vector<Hyperplane>* out);

// Best admissible member set for per-point contributions `t` (value without
// gamma): strictly negative groups of Together points, with Apart pairs
// resolved by an exact maximum-weight independent set.
struct Selection {
  std::vector<int> members;
  double value = 0.0;
};
Selection SelectMembers(const std::vector<double>& t,
                        const PricerRestriction& restriction);

struct PricerOptions {
  // Grid points per coordinate of the heuristic pricer.
  int grid = 21;
  // Run the grid first and the exact pricer only if it finds nothing.
  bool heuristic_first = true;
  // Columns returned per call.
  int max_columns = 10;
  int64_t candidate_cap = 2000000;
  double coef_bound = 0.0;
  double tolerance = 1e-6;
  // Price for a master with bottleneck costs (DualPrices::bottleneck). Adds
  // the minimax-fit vertices to the exact candidates.
  bool bottleneck = false;
};

class Pricer {
 public:
  Pricer(const Instance& instance, ResidualKind kind,
         PricerOptions options = {});

  bool exact_available() const { return exact_available_; }
  const std::vector<Hyperplane>& candidates() const { return candidates_; }
  const PricerOptions& options() const { return options_; }

  PricingOutcome PriceExact(const DualPrices& duals,
                            const PricerRestriction& restriction) const;
  PricingOutcome PriceHeuristic(const DualPrices& duals,
                                const PricerRestriction& restriction) const;
  // Heuristic first when configured, then exact when available.
  PricingOutcome Price(const DualPrices& duals,
                       const PricerRestriction& restriction) const;

 private:
  PricingOutcome PriceOver(const std::vector<Hyperplane>& hyperplanes,
                           const std::vector<double>& residuals,
                           const DualPrices& duals,
                           const PricerRestriction& restriction,
                           Certificate certificate) const;

  const Instance& instance_;
  ResidualKind kind_;
  PricerOptions options_;
  bool exact_available_ = false;
  std::vector<Hyperplane> candidates_;
  std::vector<double> candidate_residuals_;  // [c * n + i]
  std::vector<Hyperplane> grid_;
  std::vector<double> grid_residuals_;
};

PricingOutcome PriceExact(const Instance& instance, const DualPrices& duals,
                          ResidualKind kind,
                          const PricerRestriction& restriction);

PricingOutcome PriceHeuristic(const Instance& instance, const DualPrices& duals,
                              ResidualKind kind, int grid,
                              const PricerRestriction& restriction);

}  // namespace hyperloc

#endif  // HYPERLOC_PRICING_H_
