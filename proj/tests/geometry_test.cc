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

#include "hyperloc/geometry.h"

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "hyperloc/error.h"
#include "hyperloc/lp_solver.h"

namespace hyperloc {
namespace {

TEST(ResidualVerticalTest, DirectFormula) {
  const Point x = {1.0, 2.0};
  const Hyperplane h({0.7, -1.0}, 2.5);
  EXPECT_NEAR(ResidualVertical(x, h), 1.2, 1e-12);
}

TEST(ResidualVerticalTest, PointOnHyperplaneIsExactlyZero) {
  const Point x = {1.0, 2.0, 3.0};
  const Hyperplane h({1.0, 1.0, -1.0}, 0.0);
  EXPECT_EQ(ResidualVertical(x, h), 0.0);
}

TEST(ResidualVerticalTest, MatchesLineEvaluation) {
  const Point x = {3.1, 0.4};
  const Hyperplane h({-0.25, -1.0}, 1.7);
  // The point of the line above x_1: solve beta_1 x_1 + beta_2 y + alpha = 0.
  const double y = -(h.alpha() + h.beta()[0] * x[0]) / h.beta()[1];
  EXPECT_NEAR(ResidualVertical(x, h), std::abs(x[1] - y), 1e-12);
}

TEST(ResidualVerticalTest, RawCoefficientsAreConverted) {
  const Point x = {1.0, 2.0};
  const Hyperplane h({-1.4, 2.0}, -5.0);  // -2 times (0.7, -1), 2.5
  EXPECT_NEAR(ResidualVertical(x, h), 1.2, 1e-12);
}

TEST(ResidualVerticalTest, VerticalHyperplaneIsAGaugeError) {
  const Hyperplane h({1.0, 0.0}, 1.0);
  try {
    ResidualVertical(Point{0.0, 0.0}, h);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kGaugeError);
  }
}

TEST(HyperplaneTest, ZeroBetaRejected) {
  EXPECT_THROW(Hyperplane({0.0, 0.0}, 1.0), Error);
}

TEST(HyperplaneTest, GaugeConversion) {
  const Hyperplane h({3.0, -6.0}, 1.5);
  const Hyperplane v = h.ToGauge(Gauge::kVertical);
  EXPECT_EQ(v.beta()[1], -1.0);
  EXPECT_NEAR(v.beta()[0], 0.5, 1e-15);
  EXPECT_NEAR(v.alpha(), 0.25, 1e-15);
  const Hyperplane l = h.ToGauge(Gauge::kLInf);
  EXPECT_EQ(l.beta()[1], -1.0);
  EXPECT_NEAR(l.beta()[0], 0.5, 1e-15);
}

TEST(ResidualNormTest, L1UsesMaxNorm) {
  const Hyperplane h({1.0, -1.0}, 0.0);
  EXPECT_NEAR(ResidualNorm(Point{2.0, 0.0}, h, ResidualKind::kL1), 2.0, 1e-15);
}

TEST(ResidualNormTest, PointOnHyperplaneAllKinds) {
  const Hyperplane h({2.0, 1.0}, -5.0);
  const Point x = {1.0, 3.0};
  for (auto kind : {ResidualKind::kL1, ResidualKind::kL2, ResidualKind::kLInf,
                    ResidualKind::kVertical}) {
    EXPECT_EQ(Residual(x, h, kind), 0.0);
  }
}

// min sum t_l s.t. t_l >= |y_l - x_l|, beta^T y + alpha = 0.
double LpProjectionL1(const Point& x, const Hyperplane& h) {
  const int d = static_cast<int>(x.size());
  LpModel model;
  std::vector<int> y(d), t(d);
  for (int l = 0; l < d; ++l) y[l] = model.AddVariable(0.0, -kLpInf, kLpInf);
  for (int l = 0; l < d; ++l) t[l] = model.AddVariable(1.0, 0.0, kLpInf);
  for (int l = 0; l < d; ++l) {
    model.AddRow(RowSense::kGreaterEqual, -x[l], {{t[l], 1.0}, {y[l], -1.0}});
    model.AddRow(RowSense::kGreaterEqual, x[l], {{t[l], 1.0}, {y[l], 1.0}});
  }
  std::vector<LpEntry> on_plane;
  for (int l = 0; l < d; ++l) on_plane.emplace_back(y[l], h.beta()[l]);
  model.AddRow(RowSense::kEqual, -h.alpha(), on_plane);
  const LpResult r = SolveLp(model);
  EXPECT_EQ(r.status, LpStatus::kOptimal);
  return r.objective;
}

TEST(ResidualNormTest, L1MatchesLpProjection) {
  const Point x = {1.0, 1.0};
  const Hyperplane h({2.0, 1.0}, -5.0);
  EXPECT_NEAR(ResidualNorm(x, h, ResidualKind::kL1), LpProjectionL1(x, h),
              1e-7);
}

TEST(ResidualNormTest, L1MatchesLpProjectionRandom) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 2 + trial % 3;
    Point x(d);
    std::vector<double> beta(d);
    for (int l = 0; l < d; ++l) {
      x[l] = u(rng);
      beta[l] = u(rng);
    }
    const Hyperplane h(beta, u(rng));
    EXPECT_NEAR(ResidualNorm(x, h, ResidualKind::kL1), LpProjectionL1(x, h),
                1e-7);
  }
}

TEST(ResidualNormTest, DefinitionalIdentity) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Point x = {u(rng), u(rng), u(rng)};
    const Hyperplane h({u(rng), u(rng), u(rng)}, u(rng));
    const double num = std::abs(h.Evaluate(x));
    const auto& b = h.beta();
    EXPECT_EQ(ResidualNorm(x, h, ResidualKind::kL1),
              num / std::max({std::abs(b[0]), std::abs(b[1]), std::abs(b[2])}));
    EXPECT_EQ(ResidualNorm(x, h, ResidualKind::kL2),
              num / std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2]));
    EXPECT_EQ(ResidualNorm(x, h, ResidualKind::kLInf),
              num / (std::abs(b[0]) + std::abs(b[1]) + std::abs(b[2])));
  }
}

TEST(ResidualTest, GaugeInvariance) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::uniform_real_distribution<double> scale(1e-3, 1e3);
  for (int trial = 0; trial < 1000; ++trial) {
    const Point x = {u(rng), u(rng)};
    std::vector<double> beta = {u(rng), u(rng)};
    const double alpha = u(rng);
    const double s = scale(rng);
    const Hyperplane h(beta, alpha);
    const Hyperplane hs({s * beta[0], s * beta[1]}, s * alpha);
    for (auto kind : {ResidualKind::kVertical, ResidualKind::kL1,
                      ResidualKind::kL2, ResidualKind::kLInf}) {
      const double a = Residual(x, h, kind);
      const double b = Residual(x, hs, kind);
      EXPECT_NEAR(a, b, 1e-9 * (1.0 + a));
    }
  }
}

TEST(ProjectTest, L1MovesAlongLargestCoefficient) {
  const Hyperplane h({0.5, 1.0}, -1.0);
  const Point y = Project(Point{0.0, 0.0}, h, ResidualKind::kL1);
  EXPECT_NEAR(y[0], 0.0, 1e-15);
  EXPECT_NEAR(y[1], 1.0, 1e-15);
}

TEST(ProjectTest, L1TieUsesSmallestIndex) {
  const Hyperplane h({1.0, -1.0}, 1.0);
  const Point y = Project(Point{0.0, 0.0}, h, ResidualKind::kL1);
  EXPECT_NEAR(y[0], -1.0, 1e-15);
  EXPECT_NEAR(y[1], 0.0, 1e-15);
}

TEST(ProjectTest, IdentityOnHyperplane) {
  const Hyperplane h({2.0, 1.0}, -5.0);
  const Point x = {1.0, 3.0};
  for (auto kind :
       {ResidualKind::kL1, ResidualKind::kL2, ResidualKind::kLInf}) {
    const Point y = Project(x, h, kind);
    EXPECT_EQ(y, x);
  }
}

TEST(ProjectTest, LandsOnHyperplaneAtResidualDistance) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int trial = 0; trial < 500; ++trial) {
    const int d = 2 + trial % 3;
    Point x(d);
    std::vector<double> beta(d);
    for (int l = 0; l < d; ++l) {
      x[l] = u(rng);
      beta[l] = u(rng);
    }
    const Hyperplane h(beta, u(rng));
    double bn = 0.0;
    for (double b : beta) bn += b * b;
    bn = std::sqrt(bn);
    for (auto kind :
         {ResidualKind::kL1, ResidualKind::kL2, ResidualKind::kLInf}) {
      const Point y = Project(x, h, kind);
      EXPECT_LE(std::abs(h.Evaluate(y)), 1e-9 * (1.0 + bn));
      EXPECT_NEAR(Distance(x, y, kind), ResidualNorm(x, h, kind), 1e-9);
    }
  }
}

// Euclidean projection from the KKT system [I b; b^T 0][y; mu] = [x; -a].
TEST(ProjectTest, L2MatchesKktSolve) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 2 + trial % 3;
    Point x(d);
    std::vector<double> beta(d);
    for (int l = 0; l < d; ++l) {
      x[l] = u(rng);
      beta[l] = u(rng);
    }
    const Hyperplane h(beta, u(rng));
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(d + 1, d + 1);
    Eigen::VectorXd rhs(d + 1);
    for (int l = 0; l < d; ++l) {
      kkt(l, l) = 1.0;
      kkt(l, d) = beta[l];
      kkt(d, l) = beta[l];
      rhs[l] = x[l];
    }
    rhs[d] = -h.alpha();
    const Eigen::VectorXd sol = kkt.fullPivLu().solve(rhs);
    const Point y = Project(x, h, ResidualKind::kL2);
    for (int l = 0; l < d; ++l) EXPECT_NEAR(y[l], sol[l], 1e-7);
  }
}

TEST(ResidualTest, SampledMinimumSmoke) {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Point x = {u(rng), u(rng)};
    const Hyperplane h({u(rng), u(rng)}, u(rng));
    const auto& b = h.beta();
    // Parametrize the line as p0 + t * dir.
    const double nn = b[0] * b[0] + b[1] * b[1];
    const Point p0 = {-h.alpha() * b[0] / nn, -h.alpha() * b[1] / nn};
    const Point dir = {-b[1] / std::sqrt(nn), b[0] / std::sqrt(nn)};
    const double center = (x[0] - p0[0]) * dir[0] + (x[1] - p0[1]) * dir[1];
    const double radius =
        4.0 * (std::abs(x[0] - p0[0]) + std::abs(x[1] - p0[1])) + 1.0;
    for (auto kind :
         {ResidualKind::kL1, ResidualKind::kL2, ResidualKind::kLInf}) {
      double best = 1e300;
      for (int s = 0; s <= 10000; ++s) {
        const double t = center - radius + 2.0 * radius * s / 10000.0;
        const Point y = {p0[0] + t * dir[0], p0[1] + t * dir[1]};
        best = std::min(best, Distance(x, y, kind));
      }
      EXPECT_NEAR(best, ResidualNorm(x, h, kind), 1e-2);
      EXPECT_GE(best, ResidualNorm(x, h, kind) - 1e-12);
    }
  }
}

TEST(InstanceTest, ValidatesShape) {
  EXPECT_THROW(Instance(std::vector<Point>{{1.0}}), Error);
  EXPECT_THROW(Instance(std::vector<Point>{{1.0, 2.0}, {1.0}}), Error);
  EXPECT_THROW(Instance(std::vector<Point>{}), Error);
  const Instance inst({{1.0, 2.0}, {3.0, 4.0}});
  EXPECT_EQ(inst.size(), 2);
  EXPECT_EQ(inst.dim(), 2);
  EXPECT_EQ(inst.coord(1, 0), 3.0);
}

TEST(ResidualKindTest, SolversRejectEvaluationOnlyKinds) {
  EXPECT_NO_THROW(RequireSolvableKind(ResidualKind::kL1));
  try {
    RequireSolvableKind(ResidualKind::kL2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnsupportedResidual);
  }
  EXPECT_EQ(ParseResidualKind("linf"), ResidualKind::kLInf);
  EXPECT_THROW(ParseResidualKind("l3"), Error);
}

}  // namespace
}  // namespace hyperloc
