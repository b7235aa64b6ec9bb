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

#include <algorithm>
#include <limits>
#include <optional>

#include "hyperloc/error.h"
#include "hyperloc/logging.h"

namespace hyperloc {

Rmp::Rmp(int n, int p, const OrderedWeights& lambda, const ColumnPool* pool,
         double artificial_cost)
    : n_(n),
      p_(p),
      lambda_(lambda),
      bottleneck_(lambda.MaxOnly()),
      pool_(pool),
      artificial_cost_(artificial_cost),
      solver_(LpModel()) {
  if (lambda.size() != n) {
    throw Error(ErrorCode::kLengthMismatch, "weights and points");
  }
  if (p < 1) throw Error(ErrorCode::kBadParam, "p must be >= 1");
  // Positions with equal weight share one u variable: at an optimum the
  // u_k of such a group may be taken equal, since each row only sees the
  // group minimum.
  group_of_.assign(n, 0);
  for (int k = 1; k < n; ++k) {
    group_of_[k] = group_of_[k - 1] + (lambda[k] != lambda[k - 1] ? 1 : 0);
  }
  const int groups = group_of_[n - 1] + 1;
  group_weight_.assign(groups, 0.0);
  group_size_.assign(groups, 0);
  for (int k = 0; k < n; ++k) {
    group_weight_[group_of_[k]] = lambda[k];
    ++group_size_[group_of_[k]];
  }
  LpModel model;
  std::vector<int> u(groups), v(n);
  for (int g = 0; g < groups; ++g) {
    u[g] = model.AddVariable(group_size_[g], -kLpInf, kLpInf,
                             "u" + std::to_string(g));
  }
  for (int i = 0; i < n; ++i) {
    v[i] = model.AddVariable(1.0, -kLpInf, kLpInf, "v" + std::to_string(i));
  }
  for (int i = 0; i < n; ++i) {
    for (int g = 0; g < groups; ++g) {
      model.AddRow(0.0, kLpInf, {{u[g], 1.0}, {v[i], 1.0}},
                   "om_" + std::to_string(i) + "_" + std::to_string(g));
    }
  }
  p_row_ = model.AddRow(p, p, {}, "cardinality");
  first_partition_row_ = model.num_rows();
  for (int i = 0; i < n; ++i) {
    model.AddRow(1.0, 1.0, {}, "cover_" + std::to_string(i));
  }
  slack_vars_.push_back(model.AddColumn(artificial_cost, 0.0, kLpInf,
                                        {{p_row_, 1.0}}, "card_plus"));
  slack_vars_.push_back(model.AddColumn(artificial_cost, 0.0, kLpInf,
                                        {{p_row_, -1.0}}, "card_minus"));
  column_of_var_.assign(model.num_variables(), -1);
  solver_ = LpSolver(std::move(model));
  SyncColumns();
  std::vector<bool> covered(n, false);
  for (const Column& c : pool_->columns()) {
    for (int i : c.members) covered[i] = true;
  }
  for (int i = 0; i < n; ++i) {
    if (!covered[i]) {
      throw Error(ErrorCode::kUncoveredPoint,
                  "point " + std::to_string(i) + " is in no column");
    }
  }
}

std::vector<LpEntry> Rmp::ColumnEntries(const Column& column) const {
  std::vector<LpEntry> entries;
  if (!column.artificial) {
    const double top = bottleneck_ ? column.MaxResidual() : 0.0;
    for (size_t t = 0; t < column.members.size(); ++t) {
      const int i = column.members[t];
      const double e = bottleneck_ ? top : column.residuals[t];
      if (e == 0.0) continue;
      const int groups = static_cast<int>(group_weight_.size());
      for (int g = 0; g < groups; ++g) {
        if (group_weight_[g] == 0.0) continue;
        entries.emplace_back(i * groups + g, -group_weight_[g] * e);
      }
    }
    entries.emplace_back(p_row_, 1.0);
  }
  for (int i : column.members) {
    entries.emplace_back(first_partition_row_ + i, 1.0);
  }
  return entries;
}

void Rmp::SyncColumns() {
  for (int id = static_cast<int>(var_of_column_.size()); id < pool_->size();
       ++id) {
    const Column& c = (*pool_)[id];
    const double cost = c.artificial ? artificial_cost_ : 0.0;
    const int var = solver_.AddColumn(cost, 0.0, kLpInf, ColumnEntries(c),
                                      "y" + std::to_string(id));
    var_of_column_.push_back(var);
    column_of_var_.push_back(id);
  }
}

void Rmp::SetArtificialCost(double cost) {
  artificial_cost_ = cost;
  for (int var : slack_vars_) solver_.SetCost(var, cost);
  for (int id = 0; id < static_cast<int>(var_of_column_.size()); ++id) {
    if ((*pool_)[id].artificial) solver_.SetCost(var_of_column_[id], cost);
  }
  solved_ = false;
}

void Rmp::ApplyConstraints(const std::vector<BranchConstraint>& constraints) {
  SyncColumns();
  for (int id = 0; id < pool_->size(); ++id) {
    const bool ok = IsAdmissible((*pool_)[id], constraints);
    solver_.SetVariableBounds(var_of_column_[id], 0.0, ok ? kLpInf : 0.0);
  }
  for (const BranchConstraint& c : constraints) {
    if (c.type != ConstraintType::kFixColumn) continue;
    if (c.column < 0 || c.column >= pool_->size()) {
      throw Error(ErrorCode::kBadIndex, "fixed column not in pool");
    }
    solver_.SetVariableBounds(var_of_column_[c.column], 1.0, 1.0);
  }
  solved_ = false;
}

const LpResult& Rmp::Solve() {
  SyncColumns();
  const LpResult& r = solver_.Solve();
  solved_ = r.status == LpStatus::kOptimal;
  return r;
}

double Rmp::objective() const {
  if (!solved_) throw Error(ErrorCode::kNotSolved, "master not solved");
  return solver_.result().objective;
}

DualPrices Rmp::ExtractDuals() const {
  if (!solved_) throw Error(ErrorCode::kNotSolved, "master not solved");
  const std::vector<double>& y = solver_.result().duals;
  DualPrices d;
  d.gamma = -y[p_row_];
  d.bottleneck = bottleneck_;
  d.phi.resize(n_);
  d.cstar.assign(n_, 0.0);
  d.delta.assign(n_, std::vector<double>(n_, 0.0));
  const int groups = static_cast<int>(group_weight_.size());
  for (int i = 0; i < n_; ++i) {
    d.phi[i] = y[first_partition_row_ + i];
    for (int k = 0; k < n_; ++k) {
      const int g = group_of_[k];
      const double delta = y[i * groups + g] / group_size_[g];
      d.delta[i][k] = delta;
      d.cstar[i] += lambda_[k] * delta;
    }
  }
  return d;
}

double Rmp::ColumnValue(int column_id) const {
  if (!solved_) throw Error(ErrorCode::kNotSolved, "master not solved");
  if (column_id < 0 || column_id >= static_cast<int>(var_of_column_.size())) {
    return 0.0;
  }
  return solver_.result().x[var_of_column_[column_id]];
}

std::vector<std::pair<int, double>> Rmp::PositiveColumns(double tol) const {
  if (!solved_) throw Error(ErrorCode::kNotSolved, "master not solved");
  std::vector<std::pair<int, double>> out;
  const auto& x = solver_.result().x;
  for (int id = 0; id < static_cast<int>(var_of_column_.size()); ++id) {
    if ((*pool_)[id].artificial) continue;
    const double v = x[var_of_column_[id]];
    if (v > tol) out.emplace_back(id, v);
  }
  return out;
}

double Rmp::ArtificialMass() const {
  if (!solved_) throw Error(ErrorCode::kNotSolved, "master not solved");
  const auto& x = solver_.result().x;
  double mass = 0.0;
  for (int var : slack_vars_) mass += x[var];
  for (int id = 0; id < static_cast<int>(var_of_column_.size()); ++id) {
    if ((*pool_)[id].artificial) mass += x[var_of_column_[id]];
  }
  return mass;
}

DualPrices MixDuals(const DualPrices& a, const DualPrices& b, double w) {
  if (a.phi.size() != b.phi.size() || a.cstar.size() != b.cstar.size() ||
      a.delta.size() != b.delta.size()) {
    throw Error(ErrorCode::kLengthMismatch, "dual vectors differ in size");
  }
  auto mix = [w](double x, double y) { return w * x + (1.0 - w) * y; };
  DualPrices d = b;
  d.gamma = mix(a.gamma, b.gamma);
  for (size_t i = 0; i < d.phi.size(); ++i) {
    d.phi[i] = mix(a.phi[i], b.phi[i]);
    d.cstar[i] = mix(a.cstar[i], b.cstar[i]);
  }
  for (size_t i = 0; i < d.delta.size(); ++i) {
    for (size_t k = 0; k < d.delta[i].size(); ++k) {
      d.delta[i][k] = mix(a.delta[i][k], b.delta[i][k]);
    }
  }
  return d;
}

double LagrangianBound(const DualPrices& duals, int p, double min_rc) {
  double sum_phi = 0.0;
  for (double f : duals.phi) sum_phi += f;
  return sum_phi - p * duals.gamma + p * min_rc;
}

CgResult RunColumnGeneration(Rmp* rmp, ColumnPool* pool,
                             const PricingFunction& price,
                             const CgOptions& options) {
  if (options.smoothing < 0.0 || options.smoothing >= 1.0) {
    throw Error(ErrorCode::kBadParam, "smoothing must lie in [0, 1)");
  }
  CgResult result;
  double previous = std::numeric_limits<double>::infinity();
  std::optional<DualPrices> center;
  bool misprice = false;
  while (true) {
    const LpResult& lp = rmp->Solve();
    if (lp.status != LpStatus::kOptimal) {
      throw Error(ErrorCode::kNumerical,
                  std::string("master LP ended with status ") +
                      LpStatusName(lp.status));
    }
    result.value = lp.objective;
    if (result.value > previous + 1e-7 * std::max(1.0, std::abs(previous))) {
      LogLine(LogLevel::kDebug, "cg_warning")
          .Kv("issue", "objective_increase")
          .Kv("previous", previous)
          .Kv("value", result.value);
    }
    previous = result.value;
    if (options.lagrangian &&
        result.lower_bound >=
            result.value - options.tolerance * std::max(1.0, result.value)) {
      result.certified = true;
      return result;
    }
    if (result.iterations >= options.iteration_limit ||
        std::chrono::steady_clock::now() >= options.deadline) {
      result.hit_limit = true;
      return result;
    }
    const DualPrices duals = rmp->ExtractDuals();
    const bool smoothed =
        options.lagrangian && options.smoothing > 0.0 && center && !misprice;
    const DualPrices at =
        smoothed ? MixDuals(*center, duals, options.smoothing) : duals;
    const PricingOutcome outcome = price(at);
    ++result.iterations;
    if (options.lagrangian &&
        outcome.certificate == Certificate::kExactMinimum) {
      const double bound =
          LagrangianBound(at, rmp->p(), outcome.best_reduced_cost);
      if (bound > result.lower_bound) {
        result.lower_bound = bound;
        center = at;
      }
      if (result.lower_bound >= options.cutoff) {
        result.cutoff = true;
        return result;
      }
    }
    int added = 0;
    for (const Column& c : outcome.columns) {
      if (ReducedCost(c, duals) >= -options.tolerance) continue;
      if (pool->Add(c).second) ++added;
    }
    result.columns_added += added;
    LogLine(LogLevel::kDebug, "cg")
        .Kv("iter", result.iterations)
        .Kv("rmp", result.value)
        .Kv("added", added)
        .Kv("min_rc", outcome.best_reduced_cost)
        .Kv("smoothed", smoothed)
        .Kv("lagrangian", result.lower_bound);
    if (added == 0 && smoothed) {
      // The smoothed point found nothing for the master duals.
      misprice = true;
      continue;
    }
    misprice = false;
    if (!smoothed) result.min_reduced_cost = outcome.best_reduced_cost;
    if (added == 0) {
      result.certified = outcome.certificate == Certificate::kExactMinimum &&
                         (outcome.best_reduced_cost >= -options.tolerance ||
                          outcome.columns.empty());
      if (!result.certified && !outcome.columns.empty()) {
        // Only duplicates came back: the pool already holds them, so the
        // master value cannot improve with these columns.
        result.certified = outcome.certificate == Certificate::kExactMinimum;
        LogLine(LogLevel::kDebug, "cg_warning")
            .Kv("issue", "duplicate_columns")
            .Kv("min_rc", outcome.best_reduced_cost);
      }
      return result;
    }
  }
}

}  // namespace hyperloc
