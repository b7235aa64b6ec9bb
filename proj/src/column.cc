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

#include "hyperloc/column.h"

#include <algorithm>
#include <cmath>
#include <functional>

#include "hyperloc/error.h"

namespace hyperloc {
namespace {

uint64_t HashMembers(const std::vector<int>& members) {
  uint64_t h = 1469598103934665603ULL;
  for (int i : members) {
    h ^= static_cast<uint64_t>(i) + 0x9e3779b97f4a7c15ULL;
    h *= 1099511628211ULL;
  }
  return h;
}

bool HasBoth(const std::vector<int>& members, int a, int b) {
  return std::binary_search(members.begin(), members.end(), a) &&
         std::binary_search(members.begin(), members.end(), b);
}

}  // namespace

bool Column::Contains(int i) const {
  return std::binary_search(members.begin(), members.end(), i);
}

double Column::MaxResidual() const {
  double m = 0.0;
  for (double e : residuals) m = std::max(m, e);
  return m;
}

double Column::ResidualOf(int i) const {
  const auto it = std::lower_bound(members.begin(), members.end(), i);
  if (it == members.end() || *it != i) {
    throw Error(ErrorCode::kBadIndex, "point is not a column member");
  }
  return residuals[it - members.begin()];
}

Column MakeColumn(const Instance& instance, std::vector<int> members,
                  const Hyperplane& hyperplane, ResidualKind kind) {
  if (members.empty()) throw Error(ErrorCode::kBadParam, "empty column");
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  Column c;
  c.hyperplane = hyperplane.ToGauge(GaugeFor(kind));
  c.residuals.reserve(members.size());
  for (int i : members) {
    if (i < 0 || i >= instance.size()) {
      throw Error(ErrorCode::kBadIndex, "column member out of range");
    }
    c.residuals.push_back(Residual(instance.point(i), c.hyperplane, kind));
  }
  c.members = std::move(members);
  return c;
}

Column MakeArtificialColumn(int point) {
  Column c;
  c.members = {point};
  c.residuals = {0.0};
  c.artificial = true;
  return c;
}

std::pair<int, bool> ColumnPool::Add(Column column) {
  const uint64_t key =
      HashMembers(column.members) ^ (column.artificial ? 0xabcdefULL : 0);
  auto [lo, hi] = by_members_.equal_range(key);
  for (auto it = lo; it != hi; ++it) {
    const Column& other = columns_[it->second];
    if (other.artificial != column.artificial ||
        other.members != column.members) {
      continue;
    }
    bool same = true;
    for (size_t t = 0; t < other.residuals.size() && same; ++t) {
      same = std::abs(other.residuals[t] - column.residuals[t]) <= 1e-8;
    }
    if (same) return {other.id, false};
  }
  column.id = size();
  by_members_.emplace(key, column.id);
  columns_.push_back(std::move(column));
  return {columns_.back().id, true};
}

double ReducedCost(const Column& column, const DualPrices& duals) {
  double rc = duals.gamma;
  const double top = duals.bottleneck ? column.MaxResidual() : 0.0;
  for (size_t t = 0; t < column.members.size(); ++t) {
    const int i = column.members[t];
    const double e = duals.bottleneck ? top : column.residuals[t];
    rc += duals.cstar[i] * e - duals.phi[i];
  }
  return rc;
}

BranchConstraint BranchConstraint::Together(int a, int b) {
  BranchConstraint c;
  c.type = ConstraintType::kTogether;
  c.i = std::min(a, b);
  c.j = std::max(a, b);
  return c;
}

BranchConstraint BranchConstraint::Apart(int a, int b) {
  BranchConstraint c = Together(a, b);
  c.type = ConstraintType::kApart;
  return c;
}

BranchConstraint BranchConstraint::Fix(const Column& column) {
  BranchConstraint c;
  c.type = ConstraintType::kFixColumn;
  c.column = column.id;
  c.members = column.members;
  c.hyperplane = column.hyperplane;
  c.residuals = column.residuals;
  return c;
}

BranchConstraint BranchConstraint::Forbid(const Column& column) {
  BranchConstraint c = Fix(column);
  c.type = ConstraintType::kForbidColumn;
  return c;
}

BranchConstraint BranchConstraint::Face(int point, int coordinate) {
  BranchConstraint c;
  c.type = ConstraintType::kFace;
  c.i = point;
  c.j = coordinate;
  return c;
}

bool OnFace(const Hyperplane& h, int m) {
  double top = 0.0;
  for (double b : h.beta()) top = std::max(top, std::abs(b));
  return std::abs(h.beta()[m]) >= top * (1.0 - 1e-9);
}

bool EquivalentColumns(const std::vector<int>& members_a, const Hyperplane& a,
                       const std::vector<double>& residuals_a,
                       const std::vector<int>& members_b, const Hyperplane& b,
                       const std::vector<double>& residuals_b) {
  if (members_a != members_b) return false;
  if (residuals_a.size() == residuals_b.size()) {
    bool same = true;
    for (size_t t = 0; t < residuals_a.size() && same; ++t) {
      same = std::abs(residuals_a[t] - residuals_b[t]) <= 1e-8;
    }
    if (same) return true;
  }
  if (a.dim() == 0 || a.dim() != b.dim()) return false;
  const Hyperplane na = a.gauge() == Gauge::kRaw ? a.ToGauge(Gauge::kLInf) : a;
  const Hyperplane nb = b.ToGauge(na.gauge());
  for (int l = 0; l < na.dim(); ++l) {
    if (std::abs(na.beta()[l] - nb.beta()[l]) > 1e-8) return false;
  }
  return std::abs(na.alpha() - nb.alpha()) <= 1e-8;
}

bool IsAdmissible(const Column& column,
                  const std::vector<BranchConstraint>& constraints) {
  if (column.artificial) return true;
  for (const BranchConstraint& c : constraints) {
    switch (c.type) {
      case ConstraintType::kTogether:
        if (column.Contains(c.i) != column.Contains(c.j)) return false;
        break;
      case ConstraintType::kApart:
        if (HasBoth(column.members, c.i, c.j)) return false;
        break;
      case ConstraintType::kFixColumn: {
        if (column.id == c.column) break;
        for (int i : c.members) {
          if (column.Contains(i)) return false;
        }
        break;
      }
      case ConstraintType::kForbidColumn:
        if (column.id == c.column ||
            EquivalentColumns(column.members, column.hyperplane,
                              column.residuals, c.members, c.hyperplane,
                              c.residuals)) {
          return false;
        }
        break;
      case ConstraintType::kFace:
        if (column.Contains(c.i) && !OnFace(column.hyperplane, c.j)) {
          return false;
        }
        break;
    }
  }
  return true;
}

PricerRestriction PricerRestriction::None(int n) {
  PricerRestriction r;
  r.excluded.assign(n, false);
  r.group.resize(n);
  r.face.assign(n, -1);
  for (int i = 0; i < n; ++i) r.group[i] = i;
  return r;
}

}  // namespace hyperloc
