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

// Linear programs in the form
//   min c^T x  s.t.  row_lower <= A x <= row_upper,  lower <= x <= upper
// and a bounded revised simplex solver with warm starts.

#ifndef HYPERLOC_LP_SOLVER_H_
#define HYPERLOC_LP_SOLVER_H_

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace hyperloc {

inline constexpr double kLpInf = std::numeric_limits<double>::infinity();

using LpEntry = std::pair<int, double>;

enum class RowSense { kLessEqual, kGreaterEqual, kEqual };

class LpModel {
 public:
  int AddVariable(double cost, double lower, double upper,
                  std::string name = {});
  // Adds a variable with coefficients in existing rows. Throws kBadIndex.
  int AddColumn(double cost, double lower, double upper,
                const std::vector<LpEntry>& entries, std::string name = {});
  // Entries reference existing variables. Throws kBadIndex.
  int AddRow(double lower, double upper, const std::vector<LpEntry>& entries,
             std::string name = {});
  int AddRow(RowSense sense, double rhs, const std::vector<LpEntry>& entries,
             std::string name = {});

  void SetVariableBounds(int j, double lower, double upper);
  void SetCost(int j, double cost);
  void SetRowBounds(int i, double lower, double upper);

  int num_variables() const { return static_cast<int>(cost_.size()); }
  int num_rows() const { return static_cast<int>(row_lower_.size()); }
  double cost(int j) const { return cost_[j]; }
  double lower(int j) const { return lower_[j]; }
  double upper(int j) const { return upper_[j]; }
  double row_lower(int i) const { return row_lower_[i]; }
  double row_upper(int i) const { return row_upper_[i]; }
  const std::vector<LpEntry>& column(int j) const { return columns_[j]; }
  const std::string& variable_name(int j) const { return var_names_[j]; }
  const std::string& row_name(int i) const { return row_names_[i]; }

 private:
  std::vector<double> cost_, lower_, upper_;
  std::vector<std::vector<LpEntry>> columns_;
  std::vector<std::string> var_names_;
  std::vector<double> row_lower_, row_upper_;
  std::vector<std::string> row_names_;
};

// CPLEX-LP style text for cross-checking with external tools. `binaries`
// are listed in a Binaries section.
std::string ToLpFormat(const LpModel& model,
                       const std::vector<int>& binaries = {});

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterLimit };

const char* LpStatusName(LpStatus status);

enum class VarStatus : std::uint8_t { kBasic, kAtLower, kAtUpper, kFreeZero };

// Statuses of the structural variables followed by the row logicals.
struct Basis {
  std::vector<VarStatus> columns;
  std::vector<VarStatus> rows;
};

struct LpResult {
  LpStatus status = LpStatus::kIterLimit;
  double objective = 0.0;
  std::vector<double> x;
  std::vector<double> row_activity;
  // Row duals; for a minimization, rows active at their lower bound have
  // nonnegative duals.
  std::vector<double> duals;
  std::vector<double> reduced_costs;
  int64_t iterations = 0;
};

struct LpOptions {
  double primal_tol = 1e-9;
  double dual_tol = 1e-9;
  double pivot_tol = 1e-7;
  int refactor_interval = 100;
  // 0 selects a limit proportional to the model size.
  int64_t iteration_limit = 0;
};

// Keeps its basis between calls, so that re-solving after bound changes or
// added columns starts from the previous optimum.
class LpSolver {
 public:
  explicit LpSolver(LpModel model, LpOptions options = {});

  const LpModel& model() const { return model_; }

  int AddColumn(double cost, double lower, double upper,
                const std::vector<LpEntry>& entries, std::string name = {});
  void SetVariableBounds(int j, double lower, double upper);
  void SetCost(int j, double cost);

  const LpResult& Solve();
  const LpResult& result() const { return result_; }

  Basis GetBasis() const;
  // Installs a basis (e.g. a parent node's). A singular basis is repaired
  // with row logicals.
  void SetBasis(const Basis& basis);

  int64_t total_iterations() const { return total_iterations_; }

 private:
  enum class Outcome { kOptimal, kInfeasible, kUnbounded, kIterLimit, kSwitch };

  int num_total() const { return n_ + m_; }
  bool IsFixed(int j) const { return lower_[j] == upper_[j]; }
  double NonbasicValue(int j) const;
  void SyncFromModel();
  void DefaultStatus(int j);
  void FixNonbasicStatus(int j);
  void Refactor();
  void ComputePrimal();
  void ComputeDuals(const std::vector<double>& basic_costs);
  double ColumnDot(int j, const Eigen::VectorXd& y) const;
  void ColumnInto(int j, Eigen::VectorXd* out) const;
  double PrimalInfeasibility(int pos) const;
  double RowResidual() const;
  bool MakeDualFeasible();
  void Pivot(int pos, int entering, const Eigen::VectorXd& alpha);
  // Widens the bounds of basic variables by small random amounts after a
  // run of degenerate pivots; RestoreBounds undoes it.
  void Perturb();
  void RestoreBounds();
  // Moves bounds onto basic values that violate them by less than 1e-6
  // (relative), instead of entering phase one for round-off.
  void ShiftSmallViolations();
  Outcome RunPrimal();
  Outcome RunDual();
  void FillResult(LpStatus status);

  LpModel model_;
  LpOptions options_;
  int n_ = 0;
  int m_ = 0;
  std::vector<double> lower_, upper_, cost_;
  std::vector<VarStatus> status_;
  std::vector<int> head_;
  std::vector<int> position_;
  Eigen::MatrixXd binv_;
  bool factored_ = false;
  int updates_ = 0;
  std::vector<double> x_;
  Eigen::VectorXd y_;
  int64_t iterations_ = 0;
  int64_t iteration_limit_ = 0;
  int64_t total_iterations_ = 0;
  bool perturbed_ = false;
  bool perturb_used_ = false;
  bool shift_allowed_ = true;
  std::mt19937_64 rng_{0x5eed};
  LpResult result_;
};

// One-shot convenience wrapper.
LpResult SolveLp(const LpModel& model, const Basis* warm = nullptr);

}  // namespace hyperloc

#endif  // HYPERLOC_LP_SOLVER_H_
