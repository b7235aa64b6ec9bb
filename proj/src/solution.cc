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

#include "hyperloc/solution.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "hyperloc/error.h"

namespace hyperloc {

std::string_view SolveStatusName(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "Optimal";
    case SolveStatus::kTimeLimit:
      return "TimeLimit";
    case SolveStatus::kInfeasible:
      return "Infeasible";
    case SolveStatus::kHeuristicOnly:
      return "HeuristicOnly";
  }
  return "Unknown";
}

Solution EvaluateArrangement(const Instance& instance,
                             std::vector<Hyperplane> hyperplanes,
                             const OrderedWeights& lambda, ResidualKind kind) {
  if (hyperplanes.empty()) {
    throw Error(ErrorCode::kBadParam, "no hyperplanes to evaluate");
  }
  Solution sol;
  const Gauge gauge = GaugeFor(kind);
  for (Hyperplane& h : hyperplanes) h = h.ToGauge(gauge);
  sol.hyperplanes = std::move(hyperplanes);
  const int n = instance.size();
  sol.assignment.assign(n, 0);
  sol.residuals.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double best = Residual(instance.point(i), sol.hyperplanes[0], kind);
    int arg = 0;
    for (int j = 1; j < static_cast<int>(sol.hyperplanes.size()); ++j) {
      const double r = Residual(instance.point(i), sol.hyperplanes[j], kind);
      if (r < best) {
        best = r;
        arg = j;
      }
    }
    sol.assignment[i] = arg;
    sol.residuals[i] = best;
  }
  sol.objective = OmEval(lambda, sol.residuals);
  return sol;
}

double EvaluateAssignment(const Instance& instance,
                          const std::vector<Hyperplane>& hyperplanes,
                          const std::vector<int>& assignment,
                          const OrderedWeights& lambda, ResidualKind kind) {
  std::vector<double> e(instance.size());
  for (int i = 0; i < instance.size(); ++i) {
    e[i] = Residual(instance.point(i), hyperplanes.at(assignment.at(i)), kind);
  }
  return OmEval(lambda, e);
}

std::vector<std::vector<int>> ClustersOf(const std::vector<int>& assignment,
                                         int p) {
  std::vector<std::vector<int>> clusters(p);
  for (int i = 0; i < static_cast<int>(assignment.size()); ++i) {
    clusters.at(assignment[i]).push_back(i);
  }
  return clusters;
}

double RelativeGap(double upper, double lower) {
  return std::max(0.0, upper - lower) / std::max(std::abs(upper), 1e-9);
}

}  // namespace hyperloc
