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

#include "hyperloc/branch_price.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hyperloc/error.h"
#include "hyperloc/oracle.h"
#include "test_util.h"

namespace hyperloc {
namespace {

using ::hyperloc::testing::RandomInstance;

std::vector<OrderedWeights> Presets(int n) {
  return {OrderedWeights::Weber(n), OrderedWeights::Center(n),
          OrderedWeights::KCentrum(n, 3), OrderedWeights::Centdian(n, 0.9)};
}

TEST(MergeTest, VerticalMidline) {
  const Hyperplane h1 = Hyperplane::Vertical(std::vector<double>{0.0}, 0.0);
  const Hyperplane h2 = Hyperplane::Vertical(std::vector<double>{0.0}, 2.0);
  const auto m =
      MergeHyperplanes({h1, h2}, {0.5, 0.5}, ResidualKind::kVertical);
  ASSERT_TRUE(m.has_value());
  EXPECT_NEAR(m->alpha(), 1.0, 1e-15);
  EXPECT_NEAR(m->beta()[0], 0.0, 1e-15);
  const Point x{0.0, 1.0};
  EXPECT_LE(ResidualVertical(x, *m),
            0.5 * ResidualVertical(x, h1) + 0.5 * ResidualVertical(x, h2));
  EXPECT_EQ(ResidualVertical(x, *m), 0.0);
}

TEST(MergeTest, L1SharedCoordinate) {
  const Hyperplane h1 = Hyperplane({1.0, 0.3}, 0.5).ToGauge(Gauge::kLInf);
  const Hyperplane h2 = Hyperplane({1.0, -0.2}, -1.0).ToGauge(Gauge::kLInf);
  const auto m = MergeHyperplanes({h1, h2}, {0.4, 0.6}, ResidualKind::kL1);
  ASSERT_TRUE(m.has_value());
  EXPECT_NEAR(std::max(std::abs(m->beta()[0]), std::abs(m->beta()[1])), 1.0,
              1e-15);
}

TEST(MergeTest, L1WithoutSharedCoordinate) {
  const Hyperplane h1 = Hyperplane({1.0, 0.3}, 0.5).ToGauge(Gauge::kLInf);
  const Hyperplane h2 = Hyperplane({0.3, 1.0}, -1.0).ToGauge(Gauge::kLInf);
  EXPECT_FALSE(
      MergeHyperplanes({h1, h2}, {0.5, 0.5}, ResidualKind::kL1).has_value());
}

TEST(MergeTest, RejectsRawGauge) {
  const Hyperplane raw({2.0, -2.0}, 1.0);
  EXPECT_THROW(MergeHyperplanes({raw, raw}, {0.5, 0.5}, ResidualKind::kL1),
               Error);
}

TEST(MergeTest, RandomInequalities) {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> s(0.01, 0.99);
  int violations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const double sigma = s(rng);
    const Point x{10 * u(rng), 10 * u(rng), 10 * u(rng)};
    {
      const auto h1 = Hyperplane::Vertical(
          std::vector<double>{3 * u(rng), 3 * u(rng)}, 5 * u(rng));
      const auto h2 = Hyperplane::Vertical(
          std::vector<double>{3 * u(rng), 3 * u(rng)}, 5 * u(rng));
      const auto m = MergeHyperplanes({h1, h2}, {sigma, 1 - sigma},
                                      ResidualKind::kVertical);
      violations += ResidualVertical(x, *m) >
                    sigma * ResidualVertical(x, h1) +
                        (1 - sigma) * ResidualVertical(x, h2) + 1e-9;
    }
    {
      const int shared = trial % 3;
      std::vector<double> b1{u(rng), u(rng), u(rng)};
      std::vector<double> b2{u(rng), u(rng), u(rng)};
      b1[shared] = u(rng) < 0 ? -1.0 : 1.0;
      b2[shared] = u(rng) < 0 ? -1.0 : 1.0;
      const Hyperplane h1 = Hyperplane(b1, 5 * u(rng)).ToGauge(Gauge::kLInf);
      const Hyperplane h2 = Hyperplane(b2, 5 * u(rng)).ToGauge(Gauge::kLInf);
      const auto m =
          MergeHyperplanes({h1, h2}, {sigma, 1 - sigma}, ResidualKind::kL1);
      ASSERT_TRUE(m.has_value());
      const auto r = [&](const Hyperplane& h) {
        return ResidualNorm(x, h, ResidualKind::kL1);
      };
      violations += r(*m) > sigma * r(h1) + (1 - sigma) * r(h2) + 1e-9;
    }
  }
  EXPECT_EQ(violations, 0);
}

Column Col(std::vector<int> members, const Hyperplane& h, int id) {
  Column c;
  c.members = std::move(members);
  c.hyperplane = h;
  c.residuals.assign(c.members.size(), 0.5);
  c.id = id;
  return c;
}

TEST(SelectBranchTest, RyanFosterPair) {
  ColumnPool pool;
  const auto h = Hyperplane::Vertical(std::vector<double>{0.0}, 0.0);
  pool.Add(Col({0, 1}, h, 0));
  pool.Add(Col({0, 2}, h, 1));
  const BranchDecision dec = SelectBranch(pool, {{0, 0.5}, {1, 0.5}}, 3, 2,
                                          ResidualKind::kVertical, {});
  EXPECT_EQ(dec.kind, BranchKind::kRyanFoster);
  EXPECT_EQ(dec.i, 0);
  EXPECT_EQ(dec.j, 1);
  EXPECT_NEAR(dec.cooccurrence, 0.5, 1e-15);
  ASSERT_EQ(dec.children.size(), 2u);
}

TEST(SelectBranchTest, UnmergeableL1Family) {
  ColumnPool pool;
  Column a = Col({0, 1, 2}, Hyperplane({1.0, 0.3}, 0.5), 0);
  Column b = Col({0, 1, 2}, Hyperplane({0.3, 1.0}, -1.0), 1);
  a.hyperplane = a.hyperplane.ToGauge(Gauge::kLInf);
  b.hyperplane = b.hyperplane.ToGauge(Gauge::kLInf);
  a.residuals = {1.0, 0.0, 1.0};
  b.residuals = {0.0, 1.0, 0.0};
  pool.Add(a);
  pool.Add(b);
  const std::vector<std::pair<int, double>> y = {{0, 0.5}, {1, 0.5}};
  const BranchDecision three =
      SelectBranch(pool, y, 3, 2, ResidualKind::kL1, {}, true);
  EXPECT_EQ(three.kind, BranchKind::kThreeWay);
  ASSERT_EQ(three.children.size(), 3u);
  EXPECT_EQ(three.children[2].size(), 2u);
  const BranchDecision face =
      SelectBranch(pool, y, 3, 2, ResidualKind::kL1, {});
  EXPECT_EQ(face.kind, BranchKind::kFace);
  EXPECT_EQ(face.i, 0);
  EXPECT_EQ(face.children.size(), 2u);
}

TEST(SelectBranchTest, IntegralThrows) {
  ColumnPool pool;
  const auto h = Hyperplane::Vertical(std::vector<double>{0.0}, 0.0);
  pool.Add(Col({0, 1}, h, 0));
  pool.Add(Col({2}, h, 1));
  EXPECT_THROW(SelectBranch(pool, {{0, 1.0}, {1, 1.0}}, 3, 2,
                            ResidualKind::kVertical, {}),
               Error);
}

TEST(ApplyToPricerTest, Semantics) {
  const auto h = Hyperplane::Vertical(std::vector<double>{0.0}, 0.0);
  const Column fixed = Col({3, 4}, h, 7);
  const PricerRestriction r = ApplyToPricer(
      6, {BranchConstraint::Together(0, 1), BranchConstraint::Apart(1, 2),
          BranchConstraint::Fix(fixed), BranchConstraint::Face(5, 1)});
  EXPECT_EQ(r.group[0], r.group[1]);
  EXPECT_NE(r.group[1], r.group[2]);
  EXPECT_TRUE(r.excluded[3] && r.excluded[4]);
  EXPECT_FALSE(r.excluded[0]);
  EXPECT_EQ(r.face[5], 1);
  ASSERT_EQ(r.apart.size(), 1u);
  EXPECT_THROW(ApplyToPricer(3, {BranchConstraint::Together(0, 1),
                                 BranchConstraint::Apart(0, 1)}),
               Error);
}

TEST(SolveBnpTest, MatchesOracleVertical) {
  for (uint32_t seed = 0; seed < 4; ++seed) {
    const int n = 6 + seed % 3;
    const Instance inst = RandomInstance(n, 2, 300 + seed);
    for (const auto& lambda : Presets(n)) {
      const MipResult r = SolveBnp(inst, 2, lambda, ResidualKind::kVertical);
      const double opt =
          oracle::BruteForceOptimum(inst, 2, lambda, ResidualKind::kVertical);
      EXPECT_EQ(r.status, SolveStatus::kOptimal);
      EXPECT_NEAR(r.solution.objective, opt, 1e-6)
          << "seed " << seed << " " << lambda.Label();
      EXPECT_NEAR(OmEval(lambda, r.solution.residuals), r.solution.objective,
                  1e-9);
    }
  }
}

TEST(SolveBnpTest, MatchesOracleL1) {
  for (uint32_t seed = 0; seed < 4; ++seed) {
    const int n = 6 + seed % 3;
    const Instance inst = RandomInstance(n, 2, 400 + seed);
    for (const auto& lambda : Presets(n)) {
      const MipResult r = SolveBnp(inst, 2, lambda, ResidualKind::kL1);
      const double want =
          oracle::BruteForceOptimum(inst, 2, lambda, ResidualKind::kL1);
      EXPECT_EQ(r.status, SolveStatus::kOptimal);
      EXPECT_NEAR(r.solution.objective, want, 1e-6)
          << "seed " << seed << " " << lambda.Label();
    }
  }
}

// With Weber weights every cluster optimum is an arrangement vertex, so the
// column-fixing branch stays exact.
TEST(SolveBnpTest, ThreeWayBranchWeber) {
  for (uint32_t seed = 0; seed < 4; ++seed) {
    const int n = 6 + seed % 3;
    const Instance inst = RandomInstance(n, 2, 400 + seed);
    BnpOptions opt;
    opt.three_way = true;
    const MipResult r =
        SolveBnp(inst, 2, OrderedWeights::Weber(n), ResidualKind::kL1, opt);
    EXPECT_NEAR(r.solution.objective,
                oracle::BruteForceOptimum(inst, 2, OrderedWeights::Weber(n),
                                          ResidualKind::kL1),
                1e-6)
        << "seed " << seed;
  }
}

TEST(SolveBnpTest, EnoughPlanesGiveZero) {
  const Instance inst = RandomInstance(4, 2, 5);
  const MipResult r =
      SolveBnp(inst, 4, OrderedWeights::Weber(4), ResidualKind::kVertical);
  EXPECT_EQ(r.status, SolveStatus::kOptimal);
  EXPECT_NEAR(r.solution.objective, 0.0, 1e-12);
}

}  // namespace
}  // namespace hyperloc
