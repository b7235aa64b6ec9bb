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

// Solutions of the location problem and their evaluation.

#ifndef HYPERLOC_SOLUTION_H_
#define HYPERLOC_SOLUTION_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "hyperloc/geometry.h"
#include "hyperloc/objectives.h"

namespace hyperloc {

enum class SolveStatus { kOptimal, kTimeLimit, kInfeasible, kHeuristicOnly };

std::string_view SolveStatusName(SolveStatus status);

struct Solution {
  std::vector<Hyperplane> hyperplanes;
  // Index of the serving hyperplane of every point.
  std::vector<int> assignment;
  std::vector<double> residuals;
  double objective = 0.0;
};

// Assigns every point to its closest hyperplane (ties to the lowest index)
// and evaluates the ordered median of the residuals. Hyperplanes are stored
// in the gauge of `kind`.
Solution EvaluateArrangement(const Instance& instance,
                             std::vector<Hyperplane> hyperplanes,
                             const OrderedWeights& lambda, ResidualKind kind);

// Ordered median of residuals under a given (not necessarily closest)
// assignment.
double EvaluateAssignment(const Instance& instance,
                          const std::vector<Hyperplane>& hyperplanes,
                          const std::vector<int>& assignment,
                          const OrderedWeights& lambda, ResidualKind kind);

// Point indices of every cluster of an assignment with p slots.
std::vector<std::vector<int>> ClustersOf(const std::vector<int>& assignment,
                                         int p);

// Common counters reported by both solvers.
struct SolveStats {
  int64_t nodes = 0;
  int64_t cg_iterations = 0;
  int64_t columns = 0;
  int64_t lp_iterations = 0;
  double time_secs = 0.0;
};

// Outcome of an exact solver.
struct MipResult {
  SolveStatus status = SolveStatus::kInfeasible;
  bool has_solution = false;
  Solution solution;
  double lower_bound = 0.0;
  // (upper - lower) / max(|upper|, 1e-9).
  double gap = 0.0;
  SolveStats stats;
  std::vector<std::string> warnings;
};

// Gap as reported in MipResult.
double RelativeGap(double upper, double lower);

}  // namespace hyperloc

#endif  // HYPERLOC_SOLUTION_H_
