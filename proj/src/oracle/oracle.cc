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

#include "hyperloc/oracle.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "hyperloc/column.h"
#include "hyperloc/error.h"

namespace hyperloc::oracle {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// (k, lambda_k - lambda_{k+1}) for every strict decrease, lambda_{n+1} = 0.
std::vector<std::pair<int, double>> Increments(const OrderedWeights& lambda) {
  std::vector<std::pair<int, double>> out;
  const int n = lambda.size();
  for (int k = 1; k <= n; ++k) {
    const double drop = lambda[k - 1] - (k < n ? lambda[k] : 0.0);
    if (drop > 0) out.emplace_back(k, drop);
  }
  return out;
}

// LP for a fixed partition with a fixed face per cluster (ignored for
// Vertical). Returns +inf if the LP is not optimal.
double FacesLp(const Instance& instance,
               const std::vector<std::vector<int>>& clusters,
               const std::vector<int>& face,
               const std::vector<std::pair<int, double>>& steps,
               ResidualKind kind) {
  const int n = instance.size();
  const int d = instance.dim();
  const bool vertical = kind == ResidualKind::kVertical;
  const int q = static_cast<int>(clusters.size());
  // Layout: theta+/- per cluster (2d each), e (n), per step t+/- and r (n).
  const int theta0 = 0;
  const int e0 = 2 * d * q;
  const int step0 = e0 + n;
  const int per_step = 2 + n;
  const int vars = step0 + per_step * static_cast<int>(steps.size());
  TableauLp lp;
  lp.c.assign(vars, 0.0);
  auto row = [&](std::vector<double> a, char sense, double b) {
    lp.a.push_back(std::move(a));
    lp.sense.push_back(sense);
    lp.b.push_back(b);
  };
  for (int j = 0; j < q; ++j) {
    const int pinned = vertical ? d - 1 : face[j];
    std::vector<int> free;
    for (int l = 0; l < d; ++l) {
      if (l != pinned) free.push_back(l);
    }
    const int base = theta0 + 2 * d * j;
    for (int i : clusters[j]) {
      const auto x = instance.point(i);
      const double off = vertical ? -x[d - 1] : x[pinned];
      std::vector<double> up(vars, 0.0), down(vars, 0.0);
      for (int t = 0; t < d; ++t) {
        const double a = t + 1 < d ? x[free[t]] : 1.0;
        up[base + 2 * t] = -a;
        up[base + 2 * t + 1] = a;
        down[base + 2 * t] = a;
        down[base + 2 * t + 1] = -a;
      }
      up[e0 + i] = 1.0;
      down[e0 + i] = 1.0;
      row(std::move(up), '>', off);
      row(std::move(down), '>', -off);
    }
    if (!vertical) {
      for (int t = 0; t + 1 < d; ++t) {
        std::vector<double> a(vars, 0.0);
        a[base + 2 * t] = 1.0;
        a[base + 2 * t + 1] = -1.0;
        row(a, '<', 1.0);
        row(a, '>', -1.0);
      }
    }
  }
  for (size_t s = 0; s < steps.size(); ++s) {
    const int base = step0 + per_step * static_cast<int>(s);
    const auto [k, inc] = steps[s];
    lp.c[base] = inc * k;
    lp.c[base + 1] = -inc * k;
    for (int i = 0; i < n; ++i) {
      lp.c[base + 2 + i] = inc;
      std::vector<double> a(vars, 0.0);
      a[base + 2 + i] = 1.0;
      a[e0 + i] = -1.0;
      a[base] = 1.0;
      a[base + 1] = -1.0;
      row(std::move(a), '>', 0.0);
    }
  }
  const TableauResult r = SolveTableau(lp);
  return r.status == TableauStatus::kOptimal ? r.objective : kInf;
}

void RequireKind(ResidualKind kind) {
  if (kind != ResidualKind::kVertical && kind != ResidualKind::kL1) {
    throw Error(ErrorCode::kUnsupportedResidual,
                "oracle supports vertical and L1 residuals");
  }
}

double Ordered(const OrderedWeights& lambda, std::vector<double> e) {
  std::sort(e.begin(), e.end(), std::greater<>());
  double v = 0.0;
  for (size_t k = 0; k < e.size(); ++k) v += lambda[k] * e[k];
  return v;
}

}  // namespace

double FixedPartitionValue(const Instance& instance,
                           const std::vector<std::vector<int>>& clusters,
                           const OrderedWeights& lambda, ResidualKind kind) {
  RequireKind(kind);
  if (lambda.size() != instance.size()) {
    throw Error(ErrorCode::kLengthMismatch, "weights and points");
  }
  std::vector<std::vector<int>> used;
  std::vector<bool> seen(instance.size(), false);
  for (const auto& c : clusters) {
    for (int i : c) {
      if (i < 0 || i >= instance.size() || seen[i]) {
        throw Error(ErrorCode::kBadIndex, "clusters must partition the points");
      }
      seen[i] = true;
    }
    if (!c.empty()) used.push_back(c);
  }
  for (bool s : seen) {
    if (!s) throw Error(ErrorCode::kBadIndex, "clusters must cover the points");
  }
  const auto steps = Increments(lambda);
  if (steps.empty()) return 0.0;
  const int q = static_cast<int>(used.size());
  const int d = instance.dim();
  std::vector<int> face(q, 0);
  double best = kInf;
  while (true) {
    best = std::min(best, FacesLp(instance, used, face, steps, kind));
    if (kind == ResidualKind::kVertical) break;
    int j = 0;
    while (j < q && ++face[j] == d) face[j++] = 0;
    if (j == q) break;
  }
  if (!(best < kInf)) throw Error(ErrorCode::kNumerical, "oracle LP failed");
  return best;
}

double BruteForceOptimum(const Instance& instance, int p,
                         const OrderedWeights& lambda, ResidualKind kind,
                         OracleMode mode) {
  RequireKind(kind);
  const int n = instance.size();
  if (n > 10 || instance.dim() != 2 || p > 3) {
    throw Error(ErrorCode::kSizeLimit,
                "brute force needs n <= 10, d = 2 and p <= 3");
  }
  if (p < 1) throw Error(ErrorCode::kBadParam, "p must be >= 1");
  if (mode == OracleMode::kPerCluster) {
    for (int k = 1; k < n; ++k) {
      if (lambda[k] != lambda[0]) {
        throw Error(ErrorCode::kBadParam, "per-cluster mode needs Weber");
      }
    }
  }
  // Restricted growth strings: label[i] <= 1 + max(label[0..i-1]).
  std::vector<int> label(n, 0);
  double best = kInf;
  while (true) {
    int blocks = 0;
    for (int v : label) blocks = std::max(blocks, v + 1);
    if (blocks <= p) {
      std::vector<std::vector<int>> clusters(blocks);
      for (int i = 0; i < n; ++i) clusters[label[i]].push_back(i);
      double value = 0.0;
      if (mode == OracleMode::kJoint) {
        value = FixedPartitionValue(instance, clusters, lambda, kind);
      } else {
        for (const auto& c : clusters) {
          const Instance sub = instance.Subset(c);
          std::vector<int> all(c.size());
          std::iota(all.begin(), all.end(), 0);
          value += lambda[0] *
                   FixedPartitionValue(sub, {all},
                                       OrderedWeights::Weber(sub.size()), kind);
        }
      }
      best = std::min(best, value);
    }
    // Next string.
    int i = n - 1;
    while (i > 0) {
      int top = 0;
      for (int t = 0; t < i; ++t) top = std::max(top, label[t]);
      if (label[i] <= top && label[i] + 1 < p) {
        ++label[i];
        break;
      }
      label[i] = 0;
      --i;
    }
    if (i == 0) break;
  }
  return best;
}

double VertexEnumerationSingle(const Instance& instance,
                               const OrderedWeights& lambda,
                               ResidualKind kind) {
  RequireKind(kind);
  if (instance.dim() != 2) {
    throw Error(ErrorCode::kDimensionUnsupported, "vertex enumeration: d = 2");
  }
  const int n = instance.size();
  if (lambda.size() != n) {
    throw Error(ErrorCode::kLengthMismatch, "weights and points");
  }
  if (n <= 1) return 0.0;
  const bool vertical = kind == ResidualKind::kVertical;
  double best = kInf;
  for (int m = 0; m < (vertical ? 1 : 2); ++m) {
    // Signed residual s_i = u_i * theta + alpha + w_i.
    const int pinned = vertical ? 1 : m;
    const int other = 1 - pinned;
    std::vector<double> u(n), w(n);
    for (int i = 0; i < n; ++i) {
      u[i] = instance.coord(i, other);
      w[i] = vertical ? -instance.coord(i, 1) : instance.coord(i, pinned);
    }
    // Lines a * theta + b * alpha = c.
    struct L {
      double a, b, c;
    };
    std::vector<L> lines;
    for (int i = 0; i < n; ++i) {
      lines.push_back({u[i], 1.0, -w[i]});
      for (int j = i + 1; j < n; ++j) {
        lines.push_back({u[i] - u[j], 0.0, w[j] - w[i]});
        lines.push_back({u[i] + u[j], 2.0, -w[i] - w[j]});
      }
    }
    if (vertical) {
      lines.push_back({1.0, 0.0, 0.0});
    } else {
      lines.push_back({1.0, 0.0, 1.0});
      lines.push_back({1.0, 0.0, -1.0});
    }
    for (size_t a = 0; a < lines.size(); ++a) {
      for (size_t b = a + 1; b < lines.size(); ++b) {
        const L& p = lines[a];
        const L& q = lines[b];
        const double det = p.a * q.b - p.b * q.a;
        if (std::abs(det) < 1e-12) continue;
        const double theta = (p.c * q.b - p.b * q.c) / det;
        const double alpha = (p.a * q.c - p.c * q.a) / det;
        if (!vertical && std::abs(theta) > 1.0 + 1e-12) continue;
        std::vector<double> e(n);
        for (int i = 0; i < n; ++i)
          e[i] = std::abs(u[i] * theta + alpha + w[i]);
        best = std::min(best, Ordered(lambda, e));
      }
    }
  }
  return best;
}

double GridPricingOracle(const Instance& instance, const DualPrices& duals,
                         ResidualKind kind, int resolution, GridBox box) {
  RequireKind(kind);
  if (instance.dim() != 2) {
    throw Error(ErrorCode::kDimensionUnsupported, "grid oracle: d = 2");
  }
  if (resolution < 2) throw Error(ErrorCode::kBadParam, "resolution >= 2");
  const int n = instance.size();
  const bool vertical = kind == ResidualKind::kVertical;
  const double slope = vertical ? box.slope_bound : 1.0;
  double best = duals.gamma;
  for (int m = 0; m < (vertical ? 1 : 2); ++m) {
    const int pinned = vertical ? 1 : m;
    const int other = 1 - pinned;
    for (int a = 0; a < resolution; ++a) {
      const double theta = -slope + 2.0 * slope * a / (resolution - 1);
      for (int b = 0; b < resolution; ++b) {
        const double alpha = -box.intercept_bound +
                             2.0 * box.intercept_bound * b / (resolution - 1);
        double v = duals.gamma;
        for (int i = 0; i < n; ++i) {
          const double x = instance.coord(i, other);
          const double y = instance.coord(i, pinned);
          const double e = vertical ? std::abs(y - alpha - theta * x)
                                    : std::abs(alpha + y + theta * x);
          v += std::min(0.0, duals.cstar[i] * e - duals.phi[i]);
        }
        best = std::min(best, v);
      }
    }
  }
  return best;
}

}  // namespace hyperloc::oracle
