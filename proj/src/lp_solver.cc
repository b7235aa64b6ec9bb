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

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hyperloc/error.h"

namespace hyperloc {
namespace {

void CheckFinite(double v, const char* what) {
  if (std::isnan(v)) throw Error(ErrorCode::kBadParam, what);
}

void CheckBounds(double lower, double upper) {
  if (std::isnan(lower) || std::isnan(upper) || lower > upper ||
      lower == kLpInf || upper == -kLpInf) {
    throw Error(ErrorCode::kBadParam, "invalid bounds");
  }
}

}  // namespace

int LpModel::AddVariable(double cost, double lower, double upper,
                         std::string name) {
  return AddColumn(cost, lower, upper, {}, std::move(name));
}

int LpModel::AddColumn(double cost, double lower, double upper,
                       const std::vector<LpEntry>& entries, std::string name) {
  if (!std::isfinite(cost)) throw Error(ErrorCode::kBadParam, "cost");
  CheckBounds(lower, upper);
  for (const auto& [row, value] : entries) {
    if (row < 0 || row >= num_rows()) {
      throw Error(ErrorCode::kBadIndex, "column entry row out of range");
    }
    if (!std::isfinite(value)) throw Error(ErrorCode::kBadParam, "coef");
  }
  const int j = num_variables();
  cost_.push_back(cost);
  lower_.push_back(lower);
  upper_.push_back(upper);
  columns_.push_back(entries);
  var_names_.push_back(name.empty() ? "x" + std::to_string(j)
                                    : std::move(name));
  return j;
}

int LpModel::AddRow(double lower, double upper,
                    const std::vector<LpEntry>& entries, std::string name) {
  CheckBounds(lower, upper);
  const int i = num_rows();
  for (const auto& [var, value] : entries) {
    if (var < 0 || var >= num_variables()) {
      throw Error(ErrorCode::kBadIndex, "row entry variable out of range");
    }
    if (!std::isfinite(value)) throw Error(ErrorCode::kBadParam, "coef");
  }
  for (const auto& [var, value] : entries) {
    if (value != 0.0) columns_[var].emplace_back(i, value);
  }
  row_lower_.push_back(lower);
  row_upper_.push_back(upper);
  row_names_.push_back(name.empty() ? "r" + std::to_string(i)
                                    : std::move(name));
  return i;
}

int LpModel::AddRow(RowSense sense, double rhs,
                    const std::vector<LpEntry>& entries, std::string name) {
  CheckFinite(rhs, "rhs");
  switch (sense) {
    case RowSense::kLessEqual:
      return AddRow(-kLpInf, rhs, entries, std::move(name));
    case RowSense::kGreaterEqual:
      return AddRow(rhs, kLpInf, entries, std::move(name));
    case RowSense::kEqual:
      break;
  }
  return AddRow(rhs, rhs, entries, std::move(name));
}

void LpModel::SetVariableBounds(int j, double lower, double upper) {
  if (j < 0 || j >= num_variables()) throw Error(ErrorCode::kBadIndex, "var");
  CheckBounds(lower, upper);
  lower_[j] = lower;
  upper_[j] = upper;
}

void LpModel::SetCost(int j, double cost) {
  if (j < 0 || j >= num_variables()) throw Error(ErrorCode::kBadIndex, "var");
  cost_[j] = cost;
}

void LpModel::SetRowBounds(int i, double lower, double upper) {
  if (i < 0 || i >= num_rows()) throw Error(ErrorCode::kBadIndex, "row");
  CheckBounds(lower, upper);
  row_lower_[i] = lower;
  row_upper_[i] = upper;
}

std::string ToLpFormat(const LpModel& model, const std::vector<int>& binaries) {
  std::ostringstream os;
  os.precision(17);
  auto term = [&os](double coef, const std::string& name, bool first) {
    if (coef < 0) {
      os << " - " << -coef << ' ' << name;
    } else {
      os << (first ? " " : " + ") << coef << ' ' << name;
    }
  };
  os << "Minimize\n obj:";
  bool first = true;
  for (int j = 0; j < model.num_variables(); ++j) {
    if (model.cost(j) == 0.0) continue;
    term(model.cost(j), model.variable_name(j), first);
    first = false;
  }
  if (first)
    os << " 0 "
       << (model.num_variables() ? model.variable_name(0) : std::string("x0"));
  os << "\nSubject To\n";
  std::vector<std::vector<LpEntry>> rows(model.num_rows());
  for (int j = 0; j < model.num_variables(); ++j) {
    for (const auto& [i, a] : model.column(j)) rows[i].emplace_back(j, a);
  }
  auto print_row = [&](int i, const char* suffix, const char* sense,
                       double rhs) {
    os << ' ' << model.row_name(i) << suffix << ':';
    bool f = true;
    for (const auto& [j, a] : rows[i]) {
      term(a, model.variable_name(j), f);
      f = false;
    }
    if (f) os << " 0 " << model.variable_name(0);
    os << ' ' << sense << ' ' << rhs << '\n';
  };
  for (int i = 0; i < model.num_rows(); ++i) {
    const double lo = model.row_lower(i);
    const double hi = model.row_upper(i);
    if (lo == hi) {
      print_row(i, "", "=", lo);
    } else {
      if (lo > -kLpInf) print_row(i, hi < kLpInf ? "_lo" : "", ">=", lo);
      if (hi < kLpInf) print_row(i, lo > -kLpInf ? "_hi" : "", "<=", hi);
    }
  }
  os << "Bounds\n";
  for (int j = 0; j < model.num_variables(); ++j) {
    const double lo = model.lower(j);
    const double hi = model.upper(j);
    const std::string& name = model.variable_name(j);
    if (lo == -kLpInf && hi == kLpInf) {
      os << ' ' << name << " free\n";
    } else if (lo == hi) {
      os << ' ' << name << " = " << lo << '\n';
    } else {
      os << ' '
         << (lo == -kLpInf ? std::string("-inf")
                           : (std::ostringstream() << lo).str())
         << " <= " << name << " <= "
         << (hi == kLpInf ? std::string("+inf")
                          : (std::ostringstream() << hi).str())
         << '\n';
    }
  }
  if (!binaries.empty()) {
    os << "Binaries\n";
    for (int j : binaries) os << ' ' << model.variable_name(j) << '\n';
  }
  os << "End\n";
  return os.str();
}

const char* LpStatusName(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "Optimal";
    case LpStatus::kInfeasible:
      return "Infeasible";
    case LpStatus::kUnbounded:
      return "Unbounded";
    case LpStatus::kIterLimit:
      return "IterLimit";
  }
  return "Unknown";
}

LpSolver::LpSolver(LpModel model, LpOptions options)
    : model_(std::move(model)), options_(options) {
  m_ = model_.num_rows();
  SyncFromModel();
  head_.resize(m_);
  for (int i = 0; i < m_; ++i) {
    head_[i] = n_ + i;
    status_[n_ + i] = VarStatus::kBasic;
    position_[n_ + i] = i;
  }
  binv_ = -Eigen::MatrixXd::Identity(m_, m_);
  factored_ = true;
}

void LpSolver::SyncFromModel() {
  const int old_n = n_;
  n_ = model_.num_variables();
  const int nt = n_ + m_;
  std::vector<double> lower(nt), upper(nt), cost(nt, 0.0);
  for (int j = 0; j < n_; ++j) {
    lower[j] = model_.lower(j);
    upper[j] = model_.upper(j);
    cost[j] = model_.cost(j);
  }
  for (int i = 0; i < m_; ++i) {
    lower[n_ + i] = model_.row_lower(i);
    upper[n_ + i] = model_.row_upper(i);
  }
  std::vector<VarStatus> status(nt, VarStatus::kAtLower);
  std::vector<int> position(nt, -1);
  for (int j = 0; j < old_n; ++j) {
    status[j] = status_[j];
    position[j] = position_[j];
  }
  for (int i = 0; i < static_cast<int>(status_.size()) - old_n; ++i) {
    status[n_ + i] = status_[old_n + i];
    position[n_ + i] = position_[old_n + i];
  }
  for (int& h : head_) {
    if (h >= old_n) h += n_ - old_n;
  }
  lower_ = std::move(lower);
  upper_ = std::move(upper);
  cost_ = std::move(cost);
  status_ = std::move(status);
  position_ = std::move(position);
  for (int j = old_n; j < n_; ++j) DefaultStatus(j);
  x_.assign(nt, 0.0);
}

void LpSolver::DefaultStatus(int j) {
  if (lower_[j] > -kLpInf) {
    status_[j] = VarStatus::kAtLower;
  } else if (upper_[j] < kLpInf) {
    status_[j] = VarStatus::kAtUpper;
  } else {
    status_[j] = VarStatus::kFreeZero;
  }
}

void LpSolver::FixNonbasicStatus(int j) {
  switch (status_[j]) {
    case VarStatus::kBasic:
      return;
    case VarStatus::kAtLower:
      if (lower_[j] == -kLpInf) DefaultStatus(j);
      return;
    case VarStatus::kAtUpper:
      if (upper_[j] == kLpInf) DefaultStatus(j);
      return;
    case VarStatus::kFreeZero:
      if (lower_[j] > -kLpInf || upper_[j] < kLpInf) DefaultStatus(j);
      return;
  }
}

double LpSolver::NonbasicValue(int j) const {
  switch (status_[j]) {
    case VarStatus::kAtLower:
      return lower_[j];
    case VarStatus::kAtUpper:
      return upper_[j];
    default:
      return 0.0;
  }
}

int LpSolver::AddColumn(double cost, double lower, double upper,
                        const std::vector<LpEntry>& entries, std::string name) {
  const int j = model_.AddColumn(cost, lower, upper, entries, std::move(name));
  SyncFromModel();
  return j;
}

void LpSolver::SetVariableBounds(int j, double lower, double upper) {
  model_.SetVariableBounds(j, lower, upper);
  lower_[j] = lower;
  upper_[j] = upper;
  FixNonbasicStatus(j);
}

void LpSolver::SetCost(int j, double cost) {
  model_.SetCost(j, cost);
  cost_[j] = cost;
}

Basis LpSolver::GetBasis() const {
  Basis b;
  b.columns.assign(status_.begin(), status_.begin() + n_);
  b.rows.assign(status_.begin() + n_, status_.end());
  return b;
}

void LpSolver::SetBasis(const Basis& basis) {
  if (static_cast<int>(basis.columns.size()) != n_ ||
      static_cast<int>(basis.rows.size()) != m_) {
    throw Error(ErrorCode::kBadParam, "basis size does not match the model");
  }
  std::vector<int> heads;
  heads.reserve(m_);
  for (int j = 0; j < num_total(); ++j) {
    const VarStatus s = j < n_ ? basis.columns[j] : basis.rows[j - n_];
    if (s == VarStatus::kBasic && static_cast<int>(heads.size()) < m_) {
      heads.push_back(j);
    }
  }
  for (int i = 0; i < m_ && static_cast<int>(heads.size()) < m_; ++i) {
    const VarStatus s = basis.rows[i];
    if (s != VarStatus::kBasic) heads.push_back(n_ + i);
  }
  std::vector<int> sorted_old = head_;
  std::sort(sorted_old.begin(), sorted_old.end());
  std::vector<int> sorted_new = heads;
  std::sort(sorted_new.begin(), sorted_new.end());
  const bool same = sorted_old == sorted_new;
  for (int j = 0; j < num_total(); ++j) {
    status_[j] = j < n_ ? basis.columns[j] : basis.rows[j - n_];
    if (status_[j] == VarStatus::kBasic) status_[j] = VarStatus::kAtLower;
    position_[j] = -1;
  }
  if (!same) head_ = heads;
  for (int pos = 0; pos < m_; ++pos) {
    status_[head_[pos]] = VarStatus::kBasic;
    position_[head_[pos]] = pos;
  }
  for (int j = 0; j < num_total(); ++j) FixNonbasicStatus(j);
  if (!same) factored_ = false;
}

void LpSolver::ColumnInto(int j, Eigen::VectorXd* out) const {
  out->setZero(m_);
  if (j < n_) {
    for (const auto& [r, a] : model_.column(j)) (*out)[r] += a;
  } else {
    (*out)[j - n_] = -1.0;
  }
}

double LpSolver::ColumnDot(int j, const Eigen::VectorXd& y) const {
  if (j >= n_) return -y[j - n_];
  double s = 0.0;
  for (const auto& [r, a] : model_.column(j)) s += a * y[r];
  return s;
}

void LpSolver::Refactor() {
  Eigen::MatrixXd b(m_, m_);
  Eigen::VectorXd col;
  for (int pos = 0; pos < m_; ++pos) {
    ColumnInto(head_[pos], &col);
    b.col(pos) = col;
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(b);
  double dmax = 0.0;
  double dmin = kLpInf;
  for (int k = 0; k < m_; ++k) {
    const double v = std::abs(lu.matrixLU()(k, k));
    dmax = std::max(dmax, v);
    dmin = std::min(dmin, v);
  }
  if (m_ > 0 && !(dmin > 1e-11 * std::max(1.0, dmax))) {
    // Find dependent basis columns by elimination and swap in logicals.
    Eigen::MatrixXd w = b;
    std::vector<bool> row_used(m_, false);
    std::vector<int> dependent;
    for (int k = 0; k < m_; ++k) {
      int r = -1;
      double best = 0.0;
      for (int i = 0; i < m_; ++i) {
        if (!row_used[i] && std::abs(w(i, k)) > best) {
          best = std::abs(w(i, k));
          r = i;
        }
      }
      if (r < 0 || best <= 1e-9) {
        dependent.push_back(k);
        continue;
      }
      row_used[r] = true;
      for (int k2 = k + 1; k2 < m_; ++k2) {
        const double f = w(r, k2) / w(r, k);
        if (f != 0.0) w.col(k2) -= f * w.col(k);
      }
    }
    int next_row = 0;
    for (int k : dependent) {
      while (row_used[next_row]) ++next_row;
      row_used[next_row] = true;
      const int old = head_[k];
      const int logical = n_ + next_row;
      if (position_[logical] >= 0) {
        throw Error(ErrorCode::kNumerical, "basis repair failed");
      }
      status_[old] = VarStatus::kAtLower;
      position_[old] = -1;
      FixNonbasicStatus(old);
      if (lower_[old] == -kLpInf && upper_[old] == kLpInf) {
        status_[old] = VarStatus::kFreeZero;
      }
      head_[k] = logical;
      status_[logical] = VarStatus::kBasic;
      position_[logical] = k;
      ColumnInto(logical, &col);
      b.col(k) = col;
    }
    lu.compute(b);
  }
  binv_ = lu.inverse();
  factored_ = true;
  updates_ = 0;
}

void LpSolver::ComputePrimal() {
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m_);
  for (int j = 0; j < num_total(); ++j) {
    if (status_[j] == VarStatus::kBasic) continue;
    const double v = NonbasicValue(j);
    x_[j] = v;
    if (v == 0.0) continue;
    if (j < n_) {
      for (const auto& [r, a] : model_.column(j)) rhs[r] -= a * v;
    } else {
      rhs[j - n_] += v;
    }
  }
  const Eigen::VectorXd xb = binv_ * rhs;
  for (int pos = 0; pos < m_; ++pos) x_[head_[pos]] = xb[pos];
}

void LpSolver::ComputeDuals(const std::vector<double>& basic_costs) {
  const Eigen::Map<const Eigen::VectorXd> cb(basic_costs.data(), m_);
  y_ = binv_.transpose() * cb;
}

double LpSolver::PrimalInfeasibility(int pos) const {
  const int j = head_[pos];
  const double v = x_[j];
  const double tol_lo = options_.primal_tol * (1.0 + std::abs(lower_[j]));
  const double tol_hi = options_.primal_tol * (1.0 + std::abs(upper_[j]));
  if (v < lower_[j] - tol_lo) return lower_[j] - v;
  if (v > upper_[j] + tol_hi) return v - upper_[j];
  return 0.0;
}

bool LpSolver::MakeDualFeasible() {
  std::vector<double> cb(m_);
  for (int pos = 0; pos < m_; ++pos) cb[pos] = cost_[head_[pos]];
  ComputeDuals(cb);
  for (int j = 0; j < num_total(); ++j) {
    if (status_[j] == VarStatus::kBasic || IsFixed(j)) continue;
    const double d = cost_[j] - ColumnDot(j, y_);
    const double tol = options_.dual_tol;
    switch (status_[j]) {
      case VarStatus::kAtLower:
        if (d < -tol) {
          if (upper_[j] == kLpInf) return false;
          status_[j] = VarStatus::kAtUpper;
        }
        break;
      case VarStatus::kAtUpper:
        if (d > tol) {
          if (lower_[j] == -kLpInf) return false;
          status_[j] = VarStatus::kAtLower;
        }
        break;
      case VarStatus::kFreeZero:
        if (std::abs(d) > tol) return false;
        break;
      default:
        break;
    }
  }
  return true;
}

void LpSolver::Pivot(int pos, int entering, const Eigen::VectorXd& alpha) {
  const int leaving = head_[pos];
  position_[leaving] = -1;
  head_[pos] = entering;
  position_[entering] = pos;
  status_[entering] = VarStatus::kBasic;
  const double piv = alpha[pos];
  binv_.row(pos) /= piv;
  for (int i = 0; i < m_; ++i) {
    if (i == pos || alpha[i] == 0.0) continue;
    binv_.row(i) -= alpha[i] * binv_.row(pos);
  }
  (void)leaving;
  ++updates_;
}

void LpSolver::Perturb() {
  std::uniform_real_distribution<double> u(1.0, 2.0);
  constexpr double kScale = 1e-7;
  for (int pos = 0; pos < m_; ++pos) {
    const int j = head_[pos];
    if (IsFixed(j)) continue;
    if (lower_[j] > -kLpInf)
      lower_[j] -= kScale * u(rng_) * (1.0 + std::abs(lower_[j]));
    if (upper_[j] < kLpInf)
      upper_[j] += kScale * u(rng_) * (1.0 + std::abs(upper_[j]));
  }
  perturbed_ = true;
  perturb_used_ = true;
}

void LpSolver::ShiftSmallViolations() {
  constexpr double kShift = 1e-6;
  double worst = 0.0;
  for (int pos = 0; pos < m_; ++pos) {
    const int j = head_[pos];
    const double v = x_[j];
    if (v < lower_[j]) {
      worst = std::max(worst, (lower_[j] - v) / (1.0 + std::abs(lower_[j])));
    } else if (v > upper_[j]) {
      worst = std::max(worst, (v - upper_[j]) / (1.0 + std::abs(upper_[j])));
    }
  }
  if (worst <= options_.primal_tol || worst > kShift) return;
  for (int pos = 0; pos < m_; ++pos) {
    const int j = head_[pos];
    if (x_[j] < lower_[j]) lower_[j] = x_[j];
    if (x_[j] > upper_[j]) upper_[j] = x_[j];
  }
  perturbed_ = true;
}

void LpSolver::RestoreBounds() {
  for (int j = 0; j < n_; ++j) {
    lower_[j] = model_.lower(j);
    upper_[j] = model_.upper(j);
  }
  for (int i = 0; i < m_; ++i) {
    lower_[n_ + i] = model_.row_lower(i);
    upper_[n_ + i] = model_.row_upper(i);
  }
  for (int j = 0; j < num_total(); ++j) FixNonbasicStatus(j);
  perturbed_ = false;
}

LpSolver::Outcome LpSolver::RunPrimal() {
  const double ptol = options_.primal_tol;
  const double dtol = options_.dual_tol;
  const int64_t degenerate_cap = 5LL * (m_ + n_);
  int64_t degenerate = 0;
  bool bland = false;
  std::vector<double> cb(m_);
  Eigen::VectorXd alpha;
  while (true) {
    if (iterations_ >= iteration_limit_) return Outcome::kIterLimit;
    if (updates_ >= options_.refactor_interval || !factored_) Refactor();
    ComputePrimal();
    if (shift_allowed_) ShiftSmallViolations();
    bool phase1 = false;
    for (int pos = 0; pos < m_; ++pos) {
      const int j = head_[pos];
      const double v = x_[j];
      if (v < lower_[j] - ptol * (1.0 + std::abs(lower_[j]))) {
        cb[pos] = -1.0;
        phase1 = true;
      } else if (v > upper_[j] + ptol * (1.0 + std::abs(upper_[j]))) {
        cb[pos] = 1.0;
        phase1 = true;
      } else {
        cb[pos] = 0.0;
      }
    }
    if (!phase1) {
      for (int pos = 0; pos < m_; ++pos) cb[pos] = cost_[head_[pos]];
    }
    ComputeDuals(cb);
    int entering = -1;
    int dir = 0;
    double best = 0.0;
    for (int j = 0; j < num_total(); ++j) {
      const VarStatus s = status_[j];
      if (s == VarStatus::kBasic || IsFixed(j)) continue;
      const double d = (phase1 ? 0.0 : cost_[j]) - ColumnDot(j, y_);
      int cand_dir = 0;
      if ((s == VarStatus::kAtLower || s == VarStatus::kFreeZero) &&
          d < -dtol) {
        cand_dir = 1;
      } else if ((s == VarStatus::kAtUpper || s == VarStatus::kFreeZero) &&
                 d > dtol) {
        cand_dir = -1;
      }
      if (cand_dir == 0) continue;
      if (bland) {
        entering = j;
        dir = cand_dir;
        best = std::abs(d);
        break;
      }
      if (std::abs(d) > best) {
        best = std::abs(d);
        entering = j;
        dir = cand_dir;
      }
    }
    if (entering < 0) return phase1 ? Outcome::kInfeasible : Outcome::kOptimal;

    ColumnInto(entering, &alpha);
    alpha = binv_ * alpha;
    // Basic i moves by -dir * alpha_i per unit step of the entering variable.
    struct Limit {
      int pos;
      double ratio;
      double harris;
      VarStatus leave_at;
    };
    std::vector<Limit> limits;
    for (int pos = 0; pos < m_; ++pos) {
      const double a = alpha[pos];
      if (std::abs(a) <= options_.pivot_tol) continue;
      const double delta = -dir * a;
      const int j = head_[pos];
      const double v = x_[j];
      const double lo = lower_[j];
      const double hi = upper_[j];
      const double tol_lo = ptol * (1.0 + std::abs(lo));
      const double tol_hi = ptol * (1.0 + std::abs(hi));
      if (delta < 0) {
        if (v > hi + tol_hi) {
          limits.push_back({pos, (v - hi) / -delta, (v - hi + tol_hi) / -delta,
                            VarStatus::kAtUpper});
        } else if (v >= lo - tol_lo && lo > -kLpInf) {
          limits.push_back({pos, (v - lo) / -delta, (v - lo + tol_lo) / -delta,
                            VarStatus::kAtLower});
        }
      } else {
        if (v < lo - tol_lo) {
          limits.push_back({pos, (lo - v) / delta, (lo - v + tol_lo) / delta,
                            VarStatus::kAtLower});
        } else if (v <= hi + tol_hi && hi < kLpInf) {
          limits.push_back({pos, (hi - v) / delta, (hi - v + tol_hi) / delta,
                            VarStatus::kAtUpper});
        }
      }
    }
    const double flip = upper_[entering] - lower_[entering];
    int chosen = -1;
    double theta = kLpInf;
    if (bland) {
      double min_ratio = kLpInf;
      for (const Limit& l : limits) min_ratio = std::min(min_ratio, l.ratio);
      for (int t = 0; t < static_cast<int>(limits.size()); ++t) {
        if (limits[t].ratio > min_ratio + 1e-12) continue;
        if (chosen < 0 || head_[limits[t].pos] < head_[limits[chosen].pos]) {
          chosen = t;
        }
      }
      if (chosen >= 0) theta = std::max(0.0, limits[chosen].ratio);
    } else {
      double harris = kLpInf;
      for (const Limit& l : limits) harris = std::min(harris, l.harris);
      double best_pivot = 0.0;
      for (int t = 0; t < static_cast<int>(limits.size()); ++t) {
        if (limits[t].ratio > harris) continue;
        const double p = std::abs(alpha[limits[t].pos]);
        if (p > best_pivot) {
          best_pivot = p;
          chosen = t;
        }
      }
      if (chosen >= 0) theta = std::max(0.0, limits[chosen].ratio);
    }
    ++iterations_;
    ++total_iterations_;
    if (flip < kLpInf && (chosen < 0 || flip <= theta)) {
      status_[entering] = status_[entering] == VarStatus::kAtUpper
                              ? VarStatus::kAtLower
                              : VarStatus::kAtUpper;
      degenerate = 0;
      bland = false;
      continue;
    }
    if (chosen < 0) {
      if (phase1) {
        // Cannot happen in exact arithmetic; refresh the factorization.
        Refactor();
        continue;
      }
      return Outcome::kUnbounded;
    }
    // Steps that barely move the objective count as degenerate.
    if (theta * std::max(best, 1e-12) <= 1e-12) {
      ++degenerate;
      if (degenerate > 50 && !perturb_used_) {
        Perturb();
        degenerate = 0;
      } else if (degenerate > degenerate_cap) {
        bland = true;
      }
    } else {
      degenerate = 0;
      bland = false;
    }
    const int leaving = head_[limits[chosen].pos];
    if (limits[chosen].ratio < 0.0 && shift_allowed_) {
      // The leaving value lies past its bound by round-off. Moving the
      // bound there keeps the entering variable at its own bound.
      if (limits[chosen].leave_at == VarStatus::kAtLower) {
        lower_[leaving] = x_[leaving];
      } else {
        upper_[leaving] = x_[leaving];
      }
      perturbed_ = true;
    }
    Pivot(limits[chosen].pos, entering, alpha);
    status_[leaving] = limits[chosen].leave_at;
    if (IsFixed(leaving)) status_[leaving] = VarStatus::kAtLower;
  }
}

LpSolver::Outcome LpSolver::RunDual() {
  const double dtol = options_.dual_tol;
  std::vector<double> cb(m_);
  Eigen::VectorXd alpha;
  while (true) {
    if (iterations_ >= iteration_limit_) return Outcome::kIterLimit;
    if (updates_ >= options_.refactor_interval || !factored_) Refactor();
    ComputePrimal();
    int r = -1;
    double worst = 0.0;
    for (int pos = 0; pos < m_; ++pos) {
      const double inf = PrimalInfeasibility(pos);
      if (inf > worst) {
        worst = inf;
        r = pos;
      }
    }
    if (r < 0) return Outcome::kOptimal;
    for (int pos = 0; pos < m_; ++pos) cb[pos] = cost_[head_[pos]];
    ComputeDuals(cb);
    const int leaving = head_[r];
    const int s = x_[leaving] < lower_[leaving] ? 1 : -1;
    const Eigen::VectorXd rho = binv_.row(r).transpose();
    struct Cand {
      int j;
      double a;
      double ratio;
    };
    std::vector<Cand> cands;
    double harris = kLpInf;
    for (int j = 0; j < num_total(); ++j) {
      const VarStatus st = status_[j];
      if (st == VarStatus::kBasic || IsFixed(j)) continue;
      const double a = ColumnDot(j, rho);
      if (std::abs(a) <= options_.pivot_tol) continue;
      const double d = cost_[j] - ColumnDot(j, y_);
      double dd;
      if (st == VarStatus::kAtLower) {
        if (s * a >= 0) continue;
        dd = std::max(0.0, d);
      } else if (st == VarStatus::kAtUpper) {
        if (s * a <= 0) continue;
        dd = std::max(0.0, -d);
      } else {
        dd = std::abs(d);
      }
      const double ratio = dd / std::abs(a);
      harris = std::min(harris, (dd + dtol) / std::abs(a));
      cands.push_back({j, a, ratio});
    }
    if (cands.empty()) return Outcome::kInfeasible;
    int entering = -1;
    double best_pivot = 0.0;
    for (const Cand& c : cands) {
      if (c.ratio > harris) continue;
      if (std::abs(c.a) > best_pivot) {
        best_pivot = std::abs(c.a);
        entering = c.j;
      }
    }
    ++iterations_;
    ++total_iterations_;
    ColumnInto(entering, &alpha);
    alpha = binv_ * alpha;
    if (std::abs(alpha[r]) <= options_.pivot_tol) {
      Refactor();
      continue;
    }
    Pivot(r, entering, alpha);
    status_[leaving] = s > 0 ? VarStatus::kAtLower : VarStatus::kAtUpper;
    if (IsFixed(leaving)) status_[leaving] = VarStatus::kAtLower;
  }
}

double LpSolver::RowResidual() const {
  std::vector<double> activity(m_, 0.0);
  for (int j = 0; j < n_; ++j) {
    for (const auto& [r, a] : model_.column(j)) activity[r] += a * x_[j];
  }
  double worst = 0.0;
  for (int i = 0; i < m_; ++i) {
    const double scale = 1.0 + std::abs(x_[n_ + i]);
    worst = std::max(worst, std::abs(activity[i] - x_[n_ + i]) / scale);
  }
  return worst;
}

void LpSolver::FillResult(LpStatus status) {
  result_ = LpResult();
  result_.status = status;
  result_.iterations = iterations_;
  result_.x.assign(x_.begin(), x_.begin() + n_);
  result_.row_activity.assign(x_.begin() + n_, x_.end());
  std::vector<double> cb(m_);
  for (int pos = 0; pos < m_; ++pos) cb[pos] = cost_[head_[pos]];
  ComputeDuals(cb);
  result_.duals.assign(y_.data(), y_.data() + m_);
  result_.reduced_costs.resize(n_);
  for (int j = 0; j < n_; ++j) {
    result_.reduced_costs[j] =
        status_[j] == VarStatus::kBasic ? 0.0 : cost_[j] - ColumnDot(j, y_);
  }
  double obj = 0.0;
  for (int j = 0; j < n_; ++j) obj += cost_[j] * x_[j];
  result_.objective = obj;
}

const LpResult& LpSolver::Solve() {
  iterations_ = 0;
  iteration_limit_ = options_.iteration_limit > 0 ? options_.iteration_limit
                                                  : 50LL * (m_ + n_) + 10000;
  perturb_used_ = false;
  for (int j = 0; j < num_total(); ++j) FixNonbasicStatus(j);
  if (!factored_) Refactor();
  Outcome outcome = Outcome::kSwitch;
  constexpr int kAttempts = 6;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    // The last attempt runs against the true bounds only.
    shift_allowed_ = attempt + 1 < kAttempts;
    if (!shift_allowed_) perturb_used_ = true;
    ComputePrimal();
    bool feasible = true;
    for (int pos = 0; pos < m_ && feasible; ++pos) {
      feasible = PrimalInfeasibility(pos) == 0.0;
    }
    if (!feasible && MakeDualFeasible()) {
      outcome = RunDual();
      if (outcome == Outcome::kInfeasible || outcome == Outcome::kIterLimit) {
        break;
      }
    }
    outcome = RunPrimal();
    if (outcome != Outcome::kOptimal) break;
    if (perturbed_) {
      // Clean up against the true bounds from the perturbed optimum.
      RestoreBounds();
      continue;
    }
    // Guard against drift of the updated inverse.
    if (RowResidual() <= 1e-9 || updates_ == 0) break;
    Refactor();
  }
  if (perturbed_) {
    RestoreBounds();
    ComputePrimal();
    if (outcome == Outcome::kOptimal) outcome = Outcome::kIterLimit;
  }
  switch (outcome) {
    case Outcome::kOptimal:
      FillResult(LpStatus::kOptimal);
      break;
    case Outcome::kInfeasible:
      FillResult(LpStatus::kInfeasible);
      break;
    case Outcome::kUnbounded:
      FillResult(LpStatus::kUnbounded);
      break;
    default:
      FillResult(LpStatus::kIterLimit);
      break;
  }
  return result_;
}

LpResult SolveLp(const LpModel& model, const Basis* warm) {
  LpSolver solver(model);
  if (warm != nullptr) solver.SetBasis(*warm);
  return solver.Solve();
}

}  // namespace hyperloc
