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

// Columns of the set-partitioning master and the data exchanged between
// the master, the pricers and the search tree.

#ifndef HYPERLOC_COLUMN_H_
#define HYPERLOC_COLUMN_H_

#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hyperloc/geometry.h"

namespace hyperloc {

// A cluster S with its hyperplane and the residuals of its members.
struct Column {
  std::vector<int> members;  // sorted, non-empty
  Hyperplane hyperplane;
  std::vector<double> residuals;  // aligned with members
  int id = -1;
  // Feasibility slack covering one point at a prohibitive cost.
  bool artificial = false;

  bool Contains(int i) const;
  // Largest member residual (0 for artificial columns).
  double MaxResidual() const;
  // Residual of member i; throws kBadIndex for non-members.
  double ResidualOf(int i) const;
};

// Computes the residuals of `members` (sorted on return).
Column MakeColumn(const Instance& instance, std::vector<int> members,
                  const Hyperplane& hyperplane, ResidualKind kind);

Column MakeArtificialColumn(int point);

// Columns keyed by id. A column whose members and residuals match an
// existing one within 1e-8 is not added twice.
class ColumnPool {
 public:
  // Returns (id, true) for a new column, or the id of its duplicate.
  std::pair<int, bool> Add(Column column);
  const Column& operator[](int id) const { return columns_[id]; }
  int size() const { return static_cast<int>(columns_.size()); }
  const std::vector<Column>& columns() const { return columns_; }

 private:
  std::vector<Column> columns_;
  std::unordered_multimap<uint64_t, int> by_members_;
};

// Duals of the master: gamma for sum y = p (with the sign that makes the
// reduced cost gamma - sum phi + sum cstar e), phi for the partition rows,
// delta[i][k] for the ordered-median rows and cstar_i = sum_k lambda_k
// delta_ik.
//
// With bottleneck set, the master charges every member of a column the
// column's largest residual, and the reduced cost becomes
// gamma - sum phi + max_S e * sum cstar.
struct DualPrices {
  double gamma = 0.0;
  bool bottleneck = false;
  std::vector<double> phi;
  std::vector<std::vector<double>> delta;
  std::vector<double> cstar;
};

double ReducedCost(const Column& column, const DualPrices& duals);

enum class ConstraintType {
  kTogether,
  kApart,
  kFixColumn,
  kForbidColumn,
  // Every column containing point i has |beta_m| = 1 in the L1 gauge.
  kFace,
};

struct BranchConstraint {
  ConstraintType type = ConstraintType::kTogether;
  int i = -1;  // Together / Apart pair, Face point
  int j = -1;  // Face coordinate
  // FixColumn / ForbidColumn target.
  int column = -1;
  std::vector<int> members;
  Hyperplane hyperplane;
  std::vector<double> residuals;

  static BranchConstraint Together(int a, int b);
  static BranchConstraint Apart(int a, int b);
  static BranchConstraint Fix(const Column& column);
  static BranchConstraint Forbid(const Column& column);
  static BranchConstraint Face(int point, int coordinate);
};

// Whether `h` lies on L1 face m, i.e. |beta_m| is maximal.
bool OnFace(const Hyperplane& h, int m);

// True when the members agree and either the hyperplanes (after gauge
// normalization) or the member residuals coincide within 1e-8. Such columns
// are interchangeable in the master.
bool EquivalentColumns(const std::vector<int>& members_a, const Hyperplane& a,
                       const std::vector<double>& residuals_a,
                       const std::vector<int>& members_b, const Hyperplane& b,
                       const std::vector<double>& residuals_b);

// Whether a column may take a positive value under the constraints.
// Artificial columns are always admissible.
bool IsAdmissible(const Column& column,
                  const std::vector<BranchConstraint>& constraints);

// Node constraints in the form the pricers consume.
struct PricerRestriction {
  // Points of fixed columns; they never enter a priced column.
  std::vector<bool> excluded;
  // Together groups: group[i] is the representative of i's group.
  std::vector<int> group;
  // Apart pairs of points.
  std::vector<std::pair<int, int>> apart;
  // Columns that must not be proposed again (nor equivalents).
  std::vector<Column> forbidden;
  // face[i] >= 0 restricts columns containing i to that L1 face.
  std::vector<int> face;

  static PricerRestriction None(int n);
};

enum class Certificate { kExactMinimum, kHeuristicOnly };

struct PricingOutcome {
  // Negative reduced-cost columns, best first. May be empty.
  std::vector<Column> columns;
  // Reduced cost of each column as computed by the pricer.
  std::vector<double> reduced_costs;
  // Smallest reduced cost found, the empty set (gamma) included.
  double best_reduced_cost = 0.0;
  Certificate certificate = Certificate::kHeuristicOnly;
  int64_t candidates = 0;
};

}  // namespace hyperloc

#endif  // HYPERLOC_COLUMN_H_
