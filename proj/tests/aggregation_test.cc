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

#include <gtest/gtest.h>

#include <cmath>

#include "hyperloc/compact.h"
#include "hyperloc/error.h"
#include "hyperloc/oracle.h"
#include "test_util.h"

namespace hyperloc {
namespace {

using ::hyperloc::testing::RandomInstance;

InstanceSolver CompactSolver(int p, ResidualKind kind) {
  return [p, kind](const Instance& inst, const OrderedWeights& lambda) {
    return SolveCompact(BuildCompact(inst, p, lambda, kind));
  };
}

TEST(DisplacementTest, Values) {
  const Point a = {1.0, 2.0, 3.0};
  const Point b = {0.0, 4.0, 2.5};
  EXPECT_DOUBLE_EQ(Displacement(a, b, ResidualKind::kL1, 7.0), 3.5);
  EXPECT_DOUBLE_EQ(Displacement(a, b, ResidualKind::kVertical, 2.0),
                   0.5 + 2.0 * 3.0);
  EXPECT_THROW(Displacement(a, b, ResidualKind::kL2, 1.0), Error);
}

TEST(KMeansAggregateTest, IdentityWhenKIsN) {
  const Instance inst = RandomInstance(9, 2, 1);
  for (ResidualKind kind : {ResidualKind::kVertical, ResidualKind::kL1}) {
    const AggregationMap map = KMeansAggregate(inst, 9, 3, kind);
    EXPECT_EQ(map.t, 0.0);
    const Instance agg = map.Aggregated();
    for (int i = 0; i < 9; ++i) {
      for (int l = 0; l < 2; ++l) EXPECT_EQ(agg.coord(i, l), inst.coord(i, l));
    }
  }
}

TEST(KMeansAggregateTest, SingleClusterIsTheMean) {
  const Instance inst = RandomInstance(12, 3, 2);
  const AggregationMap map = KMeansAggregate(inst, 1, 0, ResidualKind::kL1);
  Point mean(3, 0.0);
  for (int i = 0; i < 12; ++i) {
    for (int l = 0; l < 3; ++l) mean[l] += inst.coord(i, l) / 12;
  }
  double t = 0.0;
  for (int i = 0; i < 12; ++i) {
    double s = 0.0;
    for (int l = 0; l < 3; ++l) s += std::abs(inst.coord(i, l) - mean[l]);
    t = std::max(t, s);
  }
  ASSERT_EQ(map.centroids.size(), 1u);
  for (int l = 0; l < 3; ++l) EXPECT_NEAR(map.centroids[0][l], mean[l], 1e-12);
  EXPECT_NEAR(map.t, t, 1e-12);
}

TEST(KMeansAggregateTest, TMatchesAssignment) {
  const Instance inst = RandomInstance(50, 2, 3);
  for (ResidualKind kind : {ResidualKind::kVertical, ResidualKind::kL1}) {
    const AggregationMap map = KMeansAggregate(inst, 20, 0, kind);
    EXPECT_EQ(map.centroids.size(), 20u);
    double t = 0.0;
    for (int i = 0; i < 50; ++i) {
      const Point& c = map.centroids[map.assignment[i]];
      const double dy = std::abs(inst.coord(i, 1) - c[1]);
      const double dx = std::abs(inst.coord(i, 0) - c[0]);
      t = std::max(
          t, kind == ResidualKind::kL1 ? dx + dy : dy + map.slope_bound * dx);
      // Lloyd's fixed point: every point sits with its nearest centroid.
      const double own =
          std::hypot(inst.coord(i, 0) - c[0], inst.coord(i, 1) - c[1]);
      for (const Point& o : map.centroids) {
        EXPECT_LE(own,
                  std::hypot(inst.coord(i, 0) - o[0], inst.coord(i, 1) - o[1]) +
                      1e-12);
      }
    }
    EXPECT_NEAR(map.t, t, 1e-12);
    const AggregationMap again = KMeansAggregate(inst, 20, 0, kind);
    EXPECT_EQ(again.assignment, map.assignment);
  }
}

TEST(KMeansAggregateTest, RejectsBadK) {
  const Instance inst = RandomInstance(5, 2, 4);
  EXPECT_THROW(KMeansAggregate(inst, 0, 0, ResidualKind::kL1), Error);
  EXPECT_THROW(KMeansAggregate(inst, 6, 0, ResidualKind::kL1), Error);
  EXPECT_THROW(KMeansAggregate(inst, 2, 0, ResidualKind::kL2), Error);
}

// Both optima computed by exhaustive search.
TEST(AggregationBoundTest, HoldsAtExactOptima) {
  for (uint32_t seed = 0; seed < 10; ++seed) {
    const int n = 7 + seed % 2;
    const Instance inst = RandomInstance(n, 2, 40 + seed);
    for (ResidualKind kind : {ResidualKind::kVertical, ResidualKind::kL1}) {
      const OrderedWeights lambda =
          seed % 2 ? OrderedWeights::KCentrum(n, 3) : OrderedWeights::Weber(n);
      const AggregationMap map = KMeansAggregate(inst, n / 2, seed, kind);
      const double original = oracle::BruteForceOptimum(inst, 2, lambda, kind);
      const double aggregated =
          oracle::BruteForceOptimum(map.Aggregated(), 2, lambda, kind);
      EXPECT_LE(std::abs(aggregated - original),
                2.0 * map.t * lambda.Sum() + 1e-9)
          << "seed " << seed;
    }
  }
}

TEST(BoundAndErrorTest, IdentityHasNoError) {
  const Instance inst = RandomInstance(6, 2, 5);
  const AggregationMap map =
      KMeansAggregate(inst, 6, 0, ResidualKind::kVertical);
  const AggregationReport r = BoundAndError(
      map, OrderedWeights::Weber(6), CompactSolver(2, ResidualKind::kVertical));
  EXPECT_EQ(r.bound, 0.0);
  EXPECT_NEAR(r.realized_error, 0.0, 1e-6);
  EXPECT_NEAR(r.percent, 0.0, 1e-4);
}

TEST(BoundAndErrorTest, ReportsRealizedError) {
  const Instance inst = RandomInstance(8, 2, 6);
  const OrderedWeights lambda = OrderedWeights::Centdian(8, 0.9);
  const AggregationMap map = KMeansAggregate(inst, 4, 1, ResidualKind::kL1);
  const AggregationReport r =
      BoundAndError(map, lambda, CompactSolver(2, ResidualKind::kL1));
  const double opt =
      oracle::BruteForceOptimum(inst, 2, lambda, ResidualKind::kL1);
  EXPECT_NEAR(r.best_known, opt, 1e-6);
  EXPECT_NEAR(
      r.aggregated_objective,
      oracle::BruteForceOptimum(map.Aggregated(), 2, lambda, ResidualKind::kL1),
      1e-6);
  EXPECT_GE(r.realized_error, -1e-6);
  EXPECT_LE(r.realized_error, r.bound + 1e-9);
  EXPECT_NEAR(r.percent, 100.0 * r.realized_error / opt, 1e-9);
  EXPECT_NEAR(r.realized_objective, OmEval(lambda, r.solution.residuals), 1e-9);
  // A supplied best-known value is used as is.
  const AggregationReport s = BoundAndError(
      map, lambda, CompactSolver(2, ResidualKind::kL1), opt + 1.0);
  EXPECT_NEAR(s.realized_error, r.realized_error - 1.0, 1e-6);
}

}  // namespace
}  // namespace hyperloc
