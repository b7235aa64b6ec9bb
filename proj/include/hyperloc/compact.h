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

// The compact mixed-integer formulation with big-M residual rows and an
// LP-based branch-and-bound over its binaries.

#ifndef HYPERLOC_COMPACT_H_
#define HYPERLOC_COMPACT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hyperloc/geometry.h"
#include "hyperloc/lp_solver.h"
#include "hyperloc/objectives.h"
#include "hyperloc/pricing.h"
#include "hyperloc/solution.h"

namespace hyperloc {

enum class CompactEncoding {
  // Sum of e for Weber, t >= e_i for Center, k t + sum r for k-centrum;
  // other weights are written as a nonnegative combination of k-centra.
  kAuto,
  // u_k + v_i >= lambda_k e_i for every (i, k).
  kOrderedLp,
};

struct CompactOptions {
  // Slope bound B; 0 selects DefaultCoefficientBound.
  double coef_bound = 0.0;
  CompactEncoding encoding = CompactEncoding::kAuto;
  // alpha_1 <= ... <= alpha_p.
  bool symmetry_breaking = true;
};

struct CompactModel {
  LpModel lp;
  Instance instance;
  OrderedWeights lambda;
  ResidualKind kind = ResidualKind::kVertical;
  int p = 0;
  CoefficientBox box;
  // Variable indices. Vertical slopes have d - 1 entries per hyperplane,
  // L1 coefficients d.
  std::vector<std::vector<int>> beta;
  std::vector<int> alpha;
  std::vector<int> e;
  std::vector<std::vector<int>> z;         // [i][j]
  std::vector<std::vector<int>> xi;        // L1 sign of beta_jl, [j][l]
  std::vector<std::vector<int>> mu;        // L1 face with |beta_jl| = 1
  std::vector<std::vector<double>> big_m;  // [i][j]
  // Binaries in branching priority: z, then xi, then mu.
  std::vector<int> binaries;
  int lambda_rows = 0;
  int big_m_rows = 0;
  int assignment_rows = 0;
  int gauge_rows = 0;
  int symmetry_rows = 0;
};

// Throws kUnsupportedResidual unless kind is Vertical or L1, kBadParam for
// p outside [1, n], kLengthMismatch if lambda does not have n entries.
CompactModel BuildCompact(const Instance& instance, int p,
                          const OrderedWeights& lambda, ResidualKind kind,
                          const CompactOptions& options = {});

// kAuto builds for the Center and k-centrum presets; kWrongPreset for
// other weights.
CompactModel BuildCenterVariant(const Instance& instance, int p,
                                const OrderedWeights& lambda, ResidualKind kind,
                                const CompactOptions& options = {});
CompactModel BuildKCentrumVariant(const Instance& instance, int p,
                                  const OrderedWeights& lambda,
                                  ResidualKind kind,
                                  const CompactOptions& options = {});

// Hyperplanes of the continuous part of an LP or MIP solution, in the
// gauge of the model's residual kind. nullopt when an L1 coefficient
// vector vanishes.
std::optional<std::vector<Hyperplane>> CompactHyperplanes(
    const CompactModel& model, const std::vector<double>& x);

struct CompactSolveOptions {
  double time_limit_secs = 600.0;
  // 0 means unlimited.
  int64_t node_limit = 0;
  uint32_t seed = 0;
  // Restarts of the interchange heuristic for the first incumbent; 0
  // leaves the incumbent to rounding.
  int heuristic_restarts = 3;
  // Nodes between two rounding attempts (the root always rounds).
  int rounding_interval = 10;
  std::optional<Solution> initial;
};

MipResult SolveCompact(const CompactModel& model,
                       const CompactSolveOptions& options = {});

}  // namespace hyperloc

#endif  // HYPERLOC_COMPACT_H_
