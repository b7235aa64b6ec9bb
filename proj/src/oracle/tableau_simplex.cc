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

#include <cmath>
#include <limits>
#include <vector>

#include "hyperloc/error.h"
#include "hyperloc/oracle.h"

namespace hyperloc::oracle {
namespace {

constexpr double kEps = 1e-9;

struct Tableau {
  int m = 0;
  int cols = 0;  // excluding rhs
  std::vector<std::vector<double>> t;
  std::vector<int> basis;

  void Pivot(int r, int q) {
    const double p = t[r][q];
    for (double& v : t[r]) v /= p;
    for (int i = 0; i < m; ++i) {
      if (i == r) continue;
      const double f = t[i][q];
      if (f == 0.0) continue;
      for (int j = 0; j <= cols; ++j) t[i][j] -= f * t[r][j];
    }
    basis[r] = q;
  }

  // Returns false when unbounded. Columns with allowed[j] == false never
  // enter.
  bool Optimize(const std::vector<double>& cost,
                const std::vector<bool>& allowed) {
    while (true) {
      int q = -1;
      for (int j = 0; j < cols && q < 0; ++j) {
        if (!allowed[j]) continue;
        double d = cost[j];
        for (int i = 0; i < m; ++i) d -= cost[basis[i]] * t[i][j];
        if (d < -kEps) q = j;
      }
      if (q < 0) return true;
      int r = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        if (t[i][q] <= kEps) continue;
        const double ratio = t[i][cols] / t[i][q];
        if (r < 0 || ratio < best - 1e-12 ||
            (ratio <= best + 1e-12 && basis[i] < basis[r])) {
          r = i;
          best = std::min(best, ratio);
        }
      }
      if (r < 0) return false;
      Pivot(r, q);
    }
  }
};

}  // namespace

TableauResult SolveTableau(const TableauLp& lp) {
  const int m = static_cast<int>(lp.a.size());
  const int n = static_cast<int>(lp.c.size());
  if (static_cast<int>(lp.b.size()) != m ||
      static_cast<int>(lp.sense.size()) != m) {
    throw Error(ErrorCode::kLengthMismatch, "tableau rows");
  }
  std::vector<std::vector<double>> a = lp.a;
  std::vector<double> b = lp.b;
  std::vector<char> sense = lp.sense;
  for (int i = 0; i < m; ++i) {
    if (static_cast<int>(a[i].size()) != n) {
      throw Error(ErrorCode::kLengthMismatch, "tableau row width");
    }
    if (b[i] < 0) {
      for (double& v : a[i]) v = -v;
      b[i] = -b[i];
      if (sense[i] == '<') {
        sense[i] = '>';
      } else if (sense[i] == '>') {
        sense[i] = '<';
      }
    }
  }
  int num_slack = 0;
  int num_art = 0;
  for (char s : sense) {
    if (s != '=') ++num_slack;
    if (s != '<') ++num_art;
  }
  Tableau tab;
  tab.m = m;
  tab.cols = n + num_slack + num_art;
  tab.t.assign(m, std::vector<double>(tab.cols + 1, 0.0));
  tab.basis.assign(m, -1);
  std::vector<bool> is_art(tab.cols, false);
  int next_slack = n;
  int next_art = n + num_slack;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) tab.t[i][j] = a[i][j];
    tab.t[i][tab.cols] = b[i];
    if (sense[i] == '<') {
      tab.t[i][next_slack] = 1.0;
      tab.basis[i] = next_slack++;
    } else {
      if (sense[i] == '>') tab.t[i][next_slack++] = -1.0;
      tab.t[i][next_art] = 1.0;
      is_art[next_art] = true;
      tab.basis[i] = next_art++;
    }
  }
  TableauResult result;
  std::vector<double> phase1(tab.cols, 0.0);
  for (int j = 0; j < tab.cols; ++j) phase1[j] = is_art[j] ? 1.0 : 0.0;
  std::vector<bool> allowed(tab.cols, true);
  tab.Optimize(phase1, allowed);
  double infeas = 0.0;
  for (int i = 0; i < m; ++i) {
    if (is_art[tab.basis[i]]) infeas += tab.t[i][tab.cols];
  }
  if (infeas > 1e-7) {
    result.status = TableauStatus::kInfeasible;
    return result;
  }
  // Drive remaining artificials out of the basis; drop redundant rows.
  for (int i = 0; i < tab.m; ++i) {
    if (!is_art[tab.basis[i]]) continue;
    int q = -1;
    for (int j = 0; j < tab.cols && q < 0; ++j) {
      if (!is_art[j] && std::abs(tab.t[i][j]) > kEps) q = j;
    }
    if (q >= 0) {
      tab.Pivot(i, q);
    } else {
      tab.t.erase(tab.t.begin() + i);
      tab.basis.erase(tab.basis.begin() + i);
      --tab.m;
      --i;
    }
  }
  for (int j = 0; j < tab.cols; ++j) allowed[j] = !is_art[j];
  std::vector<double> phase2(tab.cols, 0.0);
  for (int j = 0; j < n; ++j) phase2[j] = lp.c[j];
  if (!tab.Optimize(phase2, allowed)) {
    result.status = TableauStatus::kUnbounded;
    return result;
  }
  result.status = TableauStatus::kOptimal;
  result.x.assign(n, 0.0);
  for (int i = 0; i < tab.m; ++i) {
    if (tab.basis[i] < n) result.x[tab.basis[i]] = tab.t[i][tab.cols];
  }
  double obj = 0.0;
  for (int j = 0; j < n; ++j) obj += lp.c[j] * result.x[j];
  result.objective = obj;
  return result;
}

}  // namespace hyperloc::oracle
