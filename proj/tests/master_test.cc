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

#include "hyperloc/master.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "hyperloc/error.h"
#include "hyperloc/oracle.h"
#include "hyperloc/pricing.h"
#include "test_util.h"

namespace hyperloc {
namespace {

using ::hyperloc::testing::RandomInstance;

constexpr double kBigCost = 1e4;

std::vector<int> AllPoints(int n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

void AddArtificials(ColumnPool* pool, int n) {
  for (int i = 0; i < n; ++i) pool->Add(MakeArtificialColumn(i));
}

// Pair lines through every pair, restricted to random subsets.
void AddRandomColumns(const Instance& inst, ResidualKind kind, uint32_t seed,
                      int count, ColumnPool* pool) {
  std::mt19937 rng(seed);
  const int n = inst.size();
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (int c = 0; c < count; ++c) {
    const int a = pick(rng);
    int b = pick(rng);
    if (a == b) b = (a + 1) % n;
    const auto h = HyperplaneThrough({inst.point(a), inst.point(b)});
    if (!h) continue;
    std::vector<int> members;
    for (int i = 0; i < n; ++i) {
      if (rng() % 2 || i == a || i == b) members.push_back(i);
    }
    try {
      pool->Add(MakeColumn(inst, members, *h, kind));
    } catch (const Error&) {
      // Vertical gauge undefined for this pair.
    }
  }
}

TEST(ReducedCostTest, Formula) {
  Column c;
  c.members = {0};
  c.residuals = {0.2};
  DualPrices d;
  d.gamma = 1.0;
  d.phi = {0.5, 0.5};
  d.cstar = {1.0, 1.0};
  EXPECT_NEAR(ReducedCost(c, d), 0.7, 1e-15);
}

TEST(RmpTest, SingleColumnEqualsOrderedMedian) {
  const Instance inst = RandomInstance(7, 2, 1);
  const auto lambda = OrderedWeights::KCentrum(7, 3);
  ColumnPool pool;
  const Hyperplane h = Hyperplane::Vertical(std::vector<double>{0.3}, 1.0);
  pool.Add(MakeColumn(inst, AllPoints(7), h, ResidualKind::kVertical));
  Rmp rmp(7, 1, lambda, &pool, kBigCost);
  ASSERT_EQ(rmp.Solve().status, LpStatus::kOptimal);
  EXPECT_NEAR(rmp.objective(), OmEval(lambda, pool[0].residuals), 1e-9);
}

TEST(RmpTest, TwoDisjointColumns) {
  const Instance inst = RandomInstance(6, 2, 2);
  const auto lambda = OrderedWeights::Centdian(6, 0.9);
  ColumnPool pool;
  const Hyperplane h1 = Hyperplane::Vertical(std::vector<double>{0.5}, 1.0);
  const Hyperplane h2 = Hyperplane::Vertical(std::vector<double>{-0.2}, 4.0);
  pool.Add(MakeColumn(inst, {0, 2, 4}, h1, ResidualKind::kVertical));
  pool.Add(MakeColumn(inst, {1, 3, 5}, h2, ResidualKind::kVertical));
  Rmp rmp(6, 2, lambda, &pool, kBigCost);
  ASSERT_EQ(rmp.Solve().status, LpStatus::kOptimal);
  EXPECT_NEAR(rmp.ColumnValue(0), 1.0, 1e-9);
  EXPECT_NEAR(rmp.ColumnValue(1), 1.0, 1e-9);
  std::vector<double> e = pool[0].residuals;
  e.insert(e.end(), pool[1].residuals.begin(), pool[1].residuals.end());
  EXPECT_NEAR(rmp.objective(), OmEval(lambda, e), 1e-9);
}

TEST(RmpTest, UncoveredPointThrows) {
  const Instance inst = RandomInstance(3, 2, 3);
  ColumnPool pool;
  pool.Add(MakeColumn(inst, {0, 1},
                      Hyperplane::Vertical(std::vector<double>{0.0}, 0.0),
                      ResidualKind::kVertical));
  EXPECT_THROW(Rmp(3, 1, OrderedWeights::Weber(3), &pool, kBigCost), Error);
}

TEST(RmpTest, DualProperties) {
  const int n = 7;
  for (uint32_t seed = 0; seed < 6; ++seed) {
    const Instance inst = RandomInstance(n, 2, 10 + seed);
    const std::vector<OrderedWeights> presets = {
        OrderedWeights::Weber(n), OrderedWeights::Center(n),
        OrderedWeights::KCentrum(n, 3), OrderedWeights::Centdian(n, 0.9)};
    for (const auto& lambda : presets) {
      ColumnPool pool;
      AddArtificials(&pool, n);
      AddRandomColumns(inst, ResidualKind::kVertical, seed, 25, &pool);
      Rmp rmp(n, 2, lambda, &pool, kBigCost);
      ASSERT_EQ(rmp.Solve().status, LpStatus::kOptimal);
      const DualPrices d = rmp.ExtractDuals();
      double total = 0.0;
      for (int i = 0; i < n; ++i) {
        double row = 0.0, col = 0.0;
        for (int k = 0; k < n; ++k) {
          EXPECT_GE(d.delta[i][k], -1e-9);
          row += d.delta[i][k];
          col += d.delta[k][i];
        }
        EXPECT_NEAR(row, 1.0, 1e-6);
        EXPECT_NEAR(col, 1.0, 1e-6);
        total += d.cstar[i];
        if (lambda.preset() == OmPreset::kWeber) {
          EXPECT_NEAR(d.cstar[i], 1.0, 1e-6);
        }
      }
      if (lambda.preset() == OmPreset::kCenter) EXPECT_NEAR(total, 1.0, 1e-6);
      for (const Column& c : pool.columns()) {
        if (c.artificial) continue;
        EXPECT_GE(ReducedCost(c, d), -1e-6) << lambda.Label();
      }
    }
  }
}

TEST(ColumnGenerationTest, EmptyPricerReturnsAtOnce) {
  const Instance inst = RandomInstance(5, 2, 4);
  ColumnPool pool;
  AddArtificials(&pool, 5);
  pool.Add(MakeColumn(inst, AllPoints(5),
                      Hyperplane::Vertical(std::vector<double>{0.0}, 5.0),
                      ResidualKind::kVertical));
  Rmp rmp(5, 1, OrderedWeights::Weber(5), &pool, kBigCost);
  int calls = 0;
  const CgResult r = RunColumnGeneration(&rmp, &pool,
                                         [&](const DualPrices&) {
                                           ++calls;
                                           PricingOutcome o;
                                           o.certificate =
                                               Certificate::kExactMinimum;
                                           return o;
                                         },
                                         {});
  EXPECT_EQ(calls, 1);
  EXPECT_TRUE(r.certified);
  EXPECT_NEAR(r.value, OmEval(OrderedWeights::Weber(5), pool[5].residuals),
              1e-9);
}

TEST(ColumnGenerationTest, BoundsIntegerOptimumAndDecreases) {
  const int n = 6;
  for (uint32_t seed = 0; seed < 4; ++seed) {
    const Instance inst = RandomInstance(n, 2, 70 + seed);
    for (ResidualKind kind : {ResidualKind::kVertical, ResidualKind::kL1}) {
      const std::vector<OrderedWeights> presets = {
          OrderedWeights::Weber(n), OrderedWeights::Center(n),
          OrderedWeights::KCentrum(n, 3), OrderedWeights::Centdian(n, 0.9)};
      for (const auto& lambda : presets) {
        ColumnPool pool;
        AddArtificials(&pool, n);
        Rmp rmp(n, 2, lambda, &pool, kBigCost);
        PricerOptions po;
        po.bottleneck = lambda.MaxOnly();
        const Pricer pricer(inst, kind, po);
        std::vector<double> values;
        const CgResult r = RunColumnGeneration(
            &rmp, &pool,
            [&](const DualPrices& d) {
              values.push_back(rmp.objective());
              return pricer.Price(d, PricerRestriction::None(n));
            },
            {});
        EXPECT_TRUE(r.certified);
        EXPECT_LT(rmp.ArtificialMass(), 1e-9);
        for (size_t t = 1; t < values.size(); ++t) {
          EXPECT_LE(values[t], values[t - 1] + 1e-7);
        }
        const double opt = oracle::BruteForceOptimum(inst, 2, lambda, kind);
        EXPECT_LE(r.value, opt + 1e-7) << lambda.Label();
        for (const Column& c : pool.columns()) {
          if (c.artificial) continue;
          const Column again = MakeColumn(inst, c.members, c.hyperplane, kind);
          for (size_t t = 0; t < c.residuals.size(); ++t) {
            EXPECT_NEAR(again.residuals[t], c.residuals[t], 1e-9);
          }
        }
      }
    }
  }
}

TEST(RmpTest, ConstraintsDeactivateColumns) {
  const Instance inst = RandomInstance(4, 2, 5);
  ColumnPool pool;
  AddArtificials(&pool, 4);
  const Hyperplane h = Hyperplane::Vertical(std::vector<double>{0.0}, 0.0);
  const int a =
      pool.Add(MakeColumn(inst, {0, 1}, h, ResidualKind::kVertical)).first;
  const int b =
      pool.Add(MakeColumn(inst, {2, 3}, h, ResidualKind::kVertical)).first;
  Rmp rmp(4, 2, OrderedWeights::Weber(4), &pool, kBigCost);
  rmp.ApplyConstraints({BranchConstraint::Apart(0, 1)});
  rmp.Solve();
  EXPECT_EQ(rmp.ColumnValue(a), 0.0);
  EXPECT_GT(rmp.ArtificialMass(), 0.5);
  rmp.ApplyConstraints({BranchConstraint::Fix(pool[b])});
  rmp.Solve();
  EXPECT_NEAR(rmp.ColumnValue(b), 1.0, 1e-12);
  EXPECT_NEAR(rmp.ColumnValue(a), 1.0, 1e-9);
}

}  // namespace
}  // namespace hyperloc
