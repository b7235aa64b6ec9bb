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

#include "hyperloc/lp_solver.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hyperloc/error.h"
#include "hyperloc/oracle.h"

namespace hyperloc {
namespace {

TEST(LpSolverTest, SingleBound) {
  LpModel model;
  const int x = model.AddVariable(1.0, -kLpInf, kLpInf);
  model.AddRow(RowSense::kGreaterEqual, 3.0, {{x, 1.0}});
  const LpResult r = SolveLp(model);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.x[0], 3.0, 1e-12);
  EXPECT_NEAR(r.duals[0], 1.0, 1e-12);
}

TEST(LpSolverTest, Infeasible) {
  LpModel model;
  const int x = model.AddVariable(-1.0, -kLpInf, kLpInf);
  model.AddRow(RowSense::kLessEqual, 0.0, {{x, 1.0}});
  model.AddRow(RowSense::kGreaterEqual, 1.0, {{x, 1.0}});
  EXPECT_EQ(SolveLp(model).status, LpStatus::kInfeasible);
}

TEST(LpSolverTest, Unbounded) {
  LpModel model;
  const int x = model.AddVariable(-1.0, 0.0, kLpInf);
  const int y = model.AddVariable(0.0, 0.0, kLpInf);
  model.AddRow(RowSense::kGreaterEqual, 1.0, {{x, 1.0}, {y, 1.0}});
  EXPECT_EQ(SolveLp(model).status, LpStatus::kUnbounded);
}

TEST(LpSolverTest, BadIndex) {
  LpModel model;
  model.AddVariable(1.0, 0.0, 1.0);
  try {
    model.AddColumn(1.0, 0.0, 1.0, {{3, 1.0}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBadIndex);
  }
  EXPECT_THROW(model.AddRow(0.0, 1.0, {{5, 1.0}}), Error);
}

struct RandomLp {
  LpModel model;
  oracle::TableauLp tableau;
};

// Feasible by construction; bounded through the box 0 <= x <= 10.
RandomLp MakeRandomLp(std::mt19937_64& rng, int m, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> pos(0.0, 1.0);
  RandomLp out;
  std::vector<double> x0(n);
  for (double& v : x0) v = 5.0 * pos(rng);
  for (int j = 0; j < n; ++j) out.model.AddVariable(u(rng), 0.0, 10.0);
  out.tableau.c.resize(n);
  for (int j = 0; j < n; ++j) out.tableau.c[j] = out.model.cost(j);
  for (int i = 0; i < m; ++i) {
    std::vector<double> row(n);
    std::vector<LpEntry> entries;
    double act = 0.0;
    for (int j = 0; j < n; ++j) {
      row[j] = u(rng);
      entries.emplace_back(j, row[j]);
      act += row[j] * x0[j];
    }
    const int kind = static_cast<int>(rng() % 3);
    char sense = '<';
    double rhs = act + pos(rng);
    if (kind == 0) {
      out.model.AddRow(RowSense::kLessEqual, rhs, entries);
    } else if (kind == 1) {
      rhs = act - pos(rng);
      sense = '>';
      out.model.AddRow(RowSense::kGreaterEqual, rhs, entries);
    } else {
      rhs = act;
      sense = '=';
      out.model.AddRow(RowSense::kEqual, rhs, entries);
    }
    out.tableau.a.push_back(row);
    out.tableau.sense.push_back(sense);
    out.tableau.b.push_back(rhs);
  }
  for (int j = 0; j < n; ++j) {
    std::vector<double> row(n, 0.0);
    row[j] = 1.0;
    out.tableau.a.push_back(row);
    out.tableau.sense.push_back('<');
    out.tableau.b.push_back(10.0);
  }
  return out;
}

double DualObjective(const LpModel& model, const LpResult& r) {
  double obj = 0.0;
  for (int i = 0; i < model.num_rows(); ++i) {
    const double y = r.duals[i];
    if (y > 0) obj += y * model.row_lower(i);
    if (y < 0) obj += y * model.row_upper(i);
  }
  for (int j = 0; j < model.num_variables(); ++j) {
    const double d = r.reduced_costs[j];
    if (d > 0) obj += d * model.lower(j);
    if (d < 0) obj += d * model.upper(j);
  }
  return obj;
}

TEST(LpSolverTest, RandomDenseMatchesTableauOracle) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 30; ++trial) {
    RandomLp lp = MakeRandomLp(rng, 20, 30);
    const LpResult r = SolveLp(lp.model);
    const oracle::TableauResult t = oracle::SolveTableau(lp.tableau);
    ASSERT_EQ(r.status, LpStatus::kOptimal);
    ASSERT_EQ(t.status, oracle::TableauStatus::kOptimal);
    EXPECT_NEAR(r.objective, t.objective, 1e-6);
    // Strong duality and primal feasibility.
    EXPECT_NEAR(DualObjective(lp.model, r), r.objective, 1e-6);
    for (int i = 0; i < lp.model.num_rows(); ++i) {
      double act = 0.0;
      for (int j = 0; j < lp.model.num_variables(); ++j) {
        for (const auto& [row, a] : lp.model.column(j)) {
          if (row == i) act += a * r.x[j];
        }
      }
      EXPECT_GE(act, lp.model.row_lower(i) - 1e-7);
      EXPECT_LE(act, lp.model.row_upper(i) + 1e-7);
    }
  }
}

TEST(LpSolverTest, Deterministic) {
  std::mt19937_64 rng(7);
  RandomLp lp = MakeRandomLp(rng, 15, 25);
  LpSolver a(lp.model), b(lp.model);
  const LpResult ra = a.Solve();
  const LpResult rb = b.Solve();
  EXPECT_EQ(ra.x, rb.x);
  EXPECT_EQ(ra.iterations, rb.iterations);
  const Basis ba = a.GetBasis();
  const Basis bb = b.GetBasis();
  EXPECT_EQ(ba.columns, bb.columns);
  EXPECT_EQ(ba.rows, bb.rows);
}

TEST(LpSolverTest, AddColumnEqualsMonolithicSolve) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    RandomLp lp = MakeRandomLp(rng, 12, 20);
    // Split off the last five columns and add them incrementally.
    LpModel head;
    const int keep = 15;
    for (int j = 0; j < keep; ++j) {
      head.AddVariable(lp.model.cost(j), lp.model.lower(j), lp.model.upper(j));
    }
    for (int i = 0; i < lp.model.num_rows(); ++i) {
      std::vector<LpEntry> entries;
      for (int j = 0; j < keep; ++j) {
        for (const auto& [row, a] : lp.model.column(j)) {
          if (row == i) entries.emplace_back(j, a);
        }
      }
      head.AddRow(lp.model.row_lower(i), lp.model.row_upper(i), entries);
    }
    LpSolver solver(head);
    solver.Solve();
    for (int j = keep; j < lp.model.num_variables(); ++j) {
      solver.AddColumn(lp.model.cost(j), lp.model.lower(j), lp.model.upper(j),
                       lp.model.column(j));
      solver.Solve();
    }
    const LpResult full = SolveLp(lp.model);
    if (full.status != LpStatus::kOptimal) continue;
    ASSERT_EQ(solver.result().status, LpStatus::kOptimal);
    EXPECT_NEAR(solver.result().objective, full.objective, 1e-7);
  }
}

TEST(LpSolverTest, ColumnsByReducedCostSign) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    RandomLp lp = MakeRandomLp(rng, 10, 15);
    LpSolver solver(lp.model);
    const LpResult base = solver.Solve();
    ASSERT_EQ(base.status, LpStatus::kOptimal);
    std::vector<LpEntry> entries;
    double dot = 0.0;
    for (int i = 0; i < lp.model.num_rows(); ++i) {
      const double a = u(rng);
      entries.emplace_back(i, a);
      dot += a * base.duals[i];
    }
    // Positive reduced cost: optimum unchanged.
    LpSolver pos_solver = solver;
    pos_solver.AddColumn(dot + 0.5, 0.0, 10.0, entries);
    EXPECT_NEAR(pos_solver.Solve().objective, base.objective, 1e-9);
    // Negative reduced cost: objective decreases or stays (degeneracy).
    LpSolver neg_solver = solver;
    neg_solver.AddColumn(dot - 0.5, 0.0, 10.0, entries);
    const LpResult neg = neg_solver.Solve();
    EXPECT_LE(neg.objective, base.objective + 1e-9);
    LpModel scratch = lp.model;
    scratch.AddColumn(dot - 0.5, 0.0, 10.0, entries);
    EXPECT_NEAR(SolveLp(scratch).objective, neg.objective, 1e-7);
  }
}

TEST(LpSolverTest, WarmStartAfterBoundChanges) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    RandomLp lp = MakeRandomLp(rng, 15, 20);
    LpSolver solver(lp.model);
    ASSERT_EQ(solver.Solve().status, LpStatus::kOptimal);
    const int j = static_cast<int>(rng() % 20);
    const double v = solver.result().x[j];
    const double lo = std::floor(v) == v ? v + 0.5 : std::ceil(v);
    solver.SetVariableBounds(j, std::min(lo, 10.0), 10.0);
    const LpResult warm = solver.Solve();
    LpModel cold = lp.model;
    cold.SetVariableBounds(j, std::min(lo, 10.0), 10.0);
    const LpResult ref = SolveLp(cold);
    ASSERT_EQ(warm.status, ref.status);
    if (ref.status == LpStatus::kOptimal) {
      EXPECT_NEAR(warm.objective, ref.objective, 1e-7);
    }
  }
}

TEST(LpSolverTest, SetBasisReproducesOptimum) {
  std::mt19937_64 rng(31);
  RandomLp lp = MakeRandomLp(rng, 12, 18);
  LpSolver first(lp.model);
  const LpResult r = first.Solve();
  LpSolver second(lp.model);
  second.SetBasis(first.GetBasis());
  const LpResult s = second.Solve();
  EXPECT_EQ(s.iterations, 0);
  EXPECT_NEAR(s.objective, r.objective, 1e-9);
}

TEST(LpSolverTest, EqualityRowDualsAreFree) {
  // min x + y s.t. x - y = 1, 0 <= x, y <= 5.
  LpModel model;
  const int x = model.AddVariable(1.0, 0.0, 5.0);
  const int y = model.AddVariable(1.0, 0.0, 5.0);
  model.AddRow(RowSense::kEqual, 1.0, {{x, 1.0}, {y, -1.0}});
  const LpResult r = SolveLp(model);
  EXPECT_NEAR(r.objective, 1.0, 1e-12);
  EXPECT_NEAR(r.duals[0], 1.0, 1e-12);
  model.SetRowBounds(0, -1.0, -1.0);
  const LpResult s = SolveLp(model);
  EXPECT_NEAR(s.objective, 1.0, 1e-12);
  EXPECT_NEAR(s.duals[0], -1.0, 1e-12);
}

TEST(LpSolverTest, DegenerateCycleProneProblem) {
  // Beale's example, which cycles under naive Dantzig pricing.
  LpModel model;
  const int x4 = model.AddVariable(-0.75, 0.0, kLpInf);
  const int x5 = model.AddVariable(150.0, 0.0, kLpInf);
  const int x6 = model.AddVariable(-1.0 / 50.0, 0.0, kLpInf);
  const int x7 = model.AddVariable(6.0, 0.0, kLpInf);
  model.AddRow(RowSense::kLessEqual, 0.0,
               {{x4, 0.25}, {x5, -60.0}, {x6, -1.0 / 25.0}, {x7, 9.0}});
  model.AddRow(RowSense::kLessEqual, 0.0,
               {{x4, 0.5}, {x5, -90.0}, {x6, -1.0 / 50.0}, {x7, 3.0}});
  model.AddRow(RowSense::kLessEqual, 1.0, {{x6, 1.0}});
  const LpResult r = SolveLp(model);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.objective, -0.05, 1e-9);
}

TEST(LpFormatTest, WritesSections) {
  LpModel model;
  const int x = model.AddVariable(1.0, 0.0, kLpInf, "x");
  const int y = model.AddVariable(-2.0, -kLpInf, kLpInf, "y");
  model.AddRow(RowSense::kGreaterEqual, 3.0, {{x, 1.0}, {y, 1.0}}, "c1");
  model.AddRow(-1.0, 4.0, {{y, 1.0}}, "c2");
  const std::string text = ToLpFormat(model);
  EXPECT_NE(text.find("Minimize"), std::string::npos);
  EXPECT_NE(text.find("c1: 1 x + 1 y >= 3"), std::string::npos);
  EXPECT_NE(text.find("c2_lo:"), std::string::npos);
  EXPECT_NE(text.find("y free"), std::string::npos);
  EXPECT_NE(text.find("End"), std::string::npos);
}

TEST(TableauOracleTest, SmallKnownProblems) {
  // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18 -> 36.
  oracle::TableauLp lp;
  lp.c = {-3, -5};
  lp.a = {{1, 0}, {0, 2}, {3, 2}};
  lp.sense = {'<', '<', '<'};
  lp.b = {4, 12, 18};
  const auto r = oracle::SolveTableau(lp);
  ASSERT_EQ(r.status, oracle::TableauStatus::kOptimal);
  EXPECT_NEAR(r.objective, -36, 1e-9);
  lp.a.push_back({1, 1});
  lp.sense.push_back('>');
  lp.b.push_back(100);
  EXPECT_EQ(oracle::SolveTableau(lp).status,
            oracle::TableauStatus::kInfeasible);
}

}  // namespace
}  // namespace hyperloc
