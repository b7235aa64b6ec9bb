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

#include "hyperloc/heuristics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "hyperloc/error.h"
#include "hyperloc/lp_solver.h"

namespace hyperloc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Above this many arrangement lines the planar fit switches to the LP.
constexpr size_t kMaxFitLines = 600;

// Whether h can be expressed in the gauge of `kind`.
bool Representable(const Hyperplane& h, ResidualKind kind) {
  if (kind != ResidualKind::kVertical) return true;
  double top = 0.0;
  for (double b : h.beta()) top = std::max(top, std::abs(b));
  return std::abs(h.beta().back()) > 1e-12 * top;
}

std::vector<double> SubsetResiduals(const Instance& instance,
                                    std::span<const int> subset,
                                    const Hyperplane& h, ResidualKind kind) {
  std::vector<double> e(subset.size());
  for (size_t t = 0; t < subset.size(); ++t) {
    e[t] = Residual(instance.point(subset[t]), h, kind);
  }
  return e;
}

// Planar fit over arrangement vertices. In chart coordinates (theta, alpha)
// the signed residual is u_i theta + alpha + w_i; vertical pins beta_d = -1,
// L1 face m pins beta_m = 1 and bounds |theta| <= 1.
FitResult FitByVertices(const Instance& instance, std::span<const int> subset,
                        const OrderedWeights& lambda, ResidualKind kind) {
  const bool vertical = kind == ResidualKind::kVertical;
  const bool weber = lambda.preset() == OmPreset::kWeber;
  const int m = static_cast<int>(subset.size());
  FitResult best;
  best.cost = kInf;
  struct Line {
    double a, b, c;  // a theta + b alpha = c
  };
  for (int face = 0; face < (vertical ? 1 : 2); ++face) {
    const int pinned = vertical ? 1 : face;
    const int other = 1 - pinned;
    std::vector<double> u(m), w(m);
    for (int t = 0; t < m; ++t) {
      u[t] = instance.coord(subset[t], other);
      w[t] = vertical ? -instance.coord(subset[t], 1)
                      : instance.coord(subset[t], pinned);
    }
    std::vector<Line> lines;
    for (int s = 0; s < m; ++s) {
      lines.push_back({u[s], 1.0, -w[s]});
      if (weber) continue;
      for (int t = s + 1; t < m; ++t) {
        if (u[s] != u[t]) lines.push_back({u[s] - u[t], 0.0, w[t] - w[s]});
        lines.push_back({u[s] + u[t], 2.0, -w[s] - w[t]});
      }
    }
    if (vertical) {
      lines.push_back({1.0, 0.0, 0.0});
    } else {
      lines.push_back({1.0, 0.0, 1.0});
      lines.push_back({1.0, 0.0, -1.0});
    }
    for (size_t p = 0; p < lines.size(); ++p) {
      for (size_t q = p + 1; q < lines.size(); ++q) {
        const Line& a = lines[p];
        const Line& b = lines[q];
        const double det = a.a * b.b - a.b * b.a;
        const double scale = std::max(
            {std::abs(a.a), std::abs(a.b), std::abs(b.a), std::abs(b.b), 1.0});
        if (std::abs(det) <= 1e-12 * scale * scale) continue;
        const double theta = (a.c * b.b - a.b * b.c) / det;
        const double alpha = (a.a * b.c - a.c * b.a) / det;
        if (!vertical && std::abs(theta) > 1.0 + 1e-12) continue;
        std::vector<double> beta(2);
        beta[pinned] = vertical ? -1.0 : 1.0;
        beta[other] = vertical ? theta : std::clamp(theta, -1.0, 1.0);
        Hyperplane h(beta, alpha);
        const double cost =
            OmEval(lambda, SubsetResiduals(instance, subset, h, kind));
        if (cost < best.cost) {
          best.cost = cost;
          best.hyperplane = std::move(h);
        }
      }
    }
  }
  return best;
}

// Exact fit by linear programming, one LP per gauge chart. The ordered
// median is written as a sum of k-largest terms, each as k t + sum r.
FitResult FitByLp(const Instance& instance, std::span<const int> subset,
                  const OrderedWeights& lambda, ResidualKind kind) {
  const bool vertical = kind == ResidualKind::kVertical;
  const int d = instance.dim();
  const int m = static_cast<int>(subset.size());
  const auto steps = lambda.Steps();
  FitResult best;
  best.cost = kInf;
  for (int face = 0; face < (vertical ? 1 : d); ++face) {
    const int pinned = vertical ? d - 1 : face;
    std::vector<int> free;
    for (int l = 0; l < d; ++l) {
      if (l != pinned) free.push_back(l);
    }
    LpModel model;
    std::vector<int> theta;
    for (int t = 0; t + 1 < d; ++t) {
      theta.push_back(vertical ? model.AddVariable(0.0, -kLpInf, kLpInf)
                               : model.AddVariable(0.0, -1.0, 1.0));
    }
    theta.push_back(model.AddVariable(0.0, -kLpInf, kLpInf));
    std::vector<int> e(m);
    for (int t = 0; t < m; ++t) e[t] = model.AddVariable(0.0, 0.0, kLpInf);
    for (int t = 0; t < m; ++t) {
      const auto x = instance.point(subset[t]);
      const double off = vertical ? -x[d - 1] : x[pinned];
      std::vector<LpEntry> up{{e[t], 1.0}}, down{{e[t], 1.0}};
      for (int q = 0; q + 1 < d; ++q) {
        up.emplace_back(theta[q], -x[free[q]]);
        down.emplace_back(theta[q], x[free[q]]);
      }
      up.emplace_back(theta[d - 1], -1.0);
      down.emplace_back(theta[d - 1], 1.0);
      model.AddRow(RowSense::kGreaterEqual, off, up);
      model.AddRow(RowSense::kGreaterEqual, -off, down);
    }
    for (const auto& [k, inc] : steps) {
      if (k == m) {
        for (int t = 0; t < m; ++t) {
          model.SetCost(e[t], model.cost(e[t]) + inc);
        }
        continue;
      }
      const int top = model.AddVariable(inc * k, -kLpInf, kLpInf);
      for (int t = 0; t < m; ++t) {
        if (k == 1) {
          model.AddRow(RowSense::kGreaterEqual, 0.0,
                       {{top, 1.0}, {e[t], -1.0}});
        } else {
          const int r = model.AddVariable(inc, 0.0, kLpInf);
          model.AddRow(RowSense::kGreaterEqual, 0.0,
                       {{r, 1.0}, {e[t], -1.0}, {top, 1.0}});
        }
      }
    }
    const LpResult r = SolveLp(model);
    if (r.status != LpStatus::kOptimal) {
      throw Error(ErrorCode::kNumerical, "single fit LP failed");
    }
    std::vector<double> beta(d);
    beta[pinned] = vertical ? -1.0 : 1.0;
    for (int q = 0; q + 1 < d; ++q) {
      beta[free[q]] =
          vertical ? r.x[theta[q]] : std::clamp(r.x[theta[q]], -1.0, 1.0);
    }
    Hyperplane h(beta, r.x[theta[d - 1]]);
    const double cost =
        OmEval(lambda, SubsetResiduals(instance, subset, h, kind));
    if (cost < best.cost) {
      best.cost = cost;
      best.hyperplane = std::move(h);
    }
  }
  return best;
}

// The d-point hyperplane through `pts` as a column-ready hyperplane, or
// nullopt when degenerate or not representable.
std::optional<Hyperplane> Through(const Instance& instance,
                                  const std::vector<int>& pts,
                                  ResidualKind kind) {
  std::vector<std::span<const double>> xs;
  for (int i : pts) xs.push_back(instance.point(i));
  auto h = HyperplaneThrough(xs);
  if (!h || !Representable(*h, kind)) return std::nullopt;
  return h->ToGauge(GaugeFor(kind));
}

std::vector<int> AllIndices(int n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

}  // namespace

FitResult FitSingleHyperplane(const Instance& instance,
                              std::span<const int> subset,
                              const OrderedWeights& lambda, ResidualKind kind) {
  RequireSolvableKind(kind);
  if (subset.empty()) throw Error(ErrorCode::kBadParam, "empty subset");
  if (lambda.size() != static_cast<int>(subset.size())) {
    throw Error(ErrorCode::kLengthMismatch, "weights and subset");
  }
  for (int i : subset) {
    if (i < 0 || i >= instance.size()) {
      throw Error(ErrorCode::kBadIndex, "subset index out of range");
    }
  }
  const size_t m = subset.size();
  const size_t lines = lambda.preset() == OmPreset::kWeber ? m : m * m;
  FitResult fit = instance.dim() == 2 && lines <= kMaxFitLines
                      ? FitByVertices(instance, subset, lambda, kind)
                      : FitByLp(instance, subset, lambda, kind);
  fit.hyperplane = fit.hyperplane.ToGauge(GaugeFor(kind));
  return fit;
}

ColumnPool InitialPool(const Instance& instance, ResidualKind kind,
                       const OrderedWeights& lambda) {
  RequireSolvableKind(kind);
  const int n = instance.size();
  const int d = instance.dim();
  if (lambda.size() != n) {
    throw Error(ErrorCode::kLengthMismatch, "weights and points");
  }
  ColumnPool pool;
  const std::vector<int> all = AllIndices(n);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      // Complete with the lowest-index points, sliding on degeneracy.
      for (int start = 0; start + (d - 2) <= n; ++start) {
        std::vector<int> pts{a, b};
        for (int i = start; i < n && (int)pts.size() < d; ++i) {
          if (i != a && i != b) pts.push_back(i);
        }
        if ((int)pts.size() < d) break;
        if (auto h = Through(instance, pts, kind)) {
          pool.Add(MakeColumn(instance, all, *h, kind));
          break;
        }
        if (d == 2) break;
      }
    }
  }
  const FitResult single = FitSingleHyperplane(instance, all, lambda, kind);
  pool.Add(MakeColumn(instance, all, single.hyperplane, kind));
  for (int i = 0; i < n; ++i) pool.Add(MakeArtificialColumn(i));
  return pool;
}

void AddSolutionColumns(const Instance& instance, const Solution& solution,
                        ResidualKind kind, ColumnPool* pool) {
  const int p = static_cast<int>(solution.hyperplanes.size());
  const auto clusters = ClustersOf(solution.assignment, p);
  for (int j = 0; j < p; ++j) {
    if (clusters[j].empty()) continue;
    pool->Add(MakeColumn(instance, clusters[j], solution.hyperplanes[j], kind));
  }
}

Solution InterchangeHeuristic(const Instance& instance, int p,
                              const OrderedWeights& lambda, ResidualKind kind,
                              uint32_t seed, int restarts) {
  RequireSolvableKind(kind);
  const int n = instance.size();
  const int d = instance.dim();
  if (p < 1) throw Error(ErrorCode::kBadParam, "p must be >= 1");
  if (lambda.size() != n) {
    throw Error(ErrorCode::kLengthMismatch, "weights and points");
  }
  const std::vector<int> all = AllIndices(n);
  const Hyperplane fallback =
      FitSingleHyperplane(instance, all, OrderedWeights::Weber(n), kind)
          .hyperplane;
  Solution best;
  best.objective = kInf;
  for (int restart = 0; restart < std::max(1, restarts); ++restart) {
    std::mt19937 rng(seed + 7919u * static_cast<uint32_t>(restart));
    auto random_subset = [&](std::vector<int> pool_of) {
      std::shuffle(pool_of.begin(), pool_of.end(), rng);
      pool_of.resize(std::min<size_t>(d, pool_of.size()));
      std::sort(pool_of.begin(), pool_of.end());
      return pool_of;
    };
    std::vector<Hyperplane> start;
    std::vector<int> order = all;
    std::shuffle(order.begin(), order.end(), rng);
    for (int j = 0; j < p; ++j) {
      std::optional<Hyperplane> h;
      if ((j + 1) * d <= n) {
        std::vector<int> pts(order.begin() + j * d,
                             order.begin() + (j + 1) * d);
        std::sort(pts.begin(), pts.end());
        h = Through(instance, pts, kind);
      }
      for (int attempt = 0; attempt < 50 && !h && n >= d; ++attempt) {
        h = Through(instance, random_subset(all), kind);
      }
      start.push_back(h ? *h : fallback);
    }
    Solution sol = EvaluateArrangement(instance, start, lambda, kind);
    for (int pass = 0; pass < 100; ++pass) {
      bool improved = false;
      for (int j = 0; j < p; ++j) {
        const auto clusters = ClustersOf(sol.assignment, p);
        const std::vector<int>& cj = clusters[j];
        std::vector<Hyperplane> moves;
        if (!cj.empty()) {
          moves.push_back(
              FitSingleHyperplane(
                  instance, cj,
                  OrderedWeights::Weber(static_cast<int>(cj.size())), kind)
                  .hyperplane);
        }
        if ((int)cj.size() >= d) {
          std::vector<int> idx(d);
          std::iota(idx.begin(), idx.end(), 0);
          const int m = static_cast<int>(cj.size());
          for (int count = 0; count < 200; ++count) {
            std::vector<int> pts(d);
            for (int t = 0; t < d; ++t) pts[t] = cj[idx[t]];
            if (auto h = Through(instance, pts, kind)) moves.push_back(*h);
            int t = d - 1;
            while (t >= 0 && idx[t] == m - d + t) --t;
            if (t < 0) break;
            ++idx[t];
            for (int u = t + 1; u < d; ++u) idx[u] = idx[u - 1] + 1;
          }
        }
        if (n >= d) {
          if (auto h = Through(instance, random_subset(all), kind)) {
            moves.push_back(*h);
          }
        }
        for (const Hyperplane& h : moves) {
          std::vector<Hyperplane> trial = sol.hyperplanes;
          trial[j] = h;
          Solution next = EvaluateArrangement(instance, trial, lambda, kind);
          if (next.objective <
              sol.objective - 1e-12 * std::max(1.0, sol.objective)) {
            sol = std::move(next);
            improved = true;
            break;
          }
        }
      }
      if (!improved) break;
    }
    if (sol.objective < best.objective) best = std::move(sol);
  }
  return best;
}

std::vector<GeometryCheck> Diagnostics(const Solution& solution,
                                       const Instance& instance,
                                       const OrderedWeights& lambda,
                                       ResidualKind kind) {
  std::vector<GeometryCheck> out;
  const bool single = solution.hyperplanes.size() == 1;
  const OmPreset preset = lambda.preset();
  if (!single || (preset != OmPreset::kWeber && preset != OmPreset::kCenter)) {
    GeometryCheck c;
    c.name = "geometry";
    c.witness = "NotApplicable";
    out.push_back(c);
    return out;
  }
  const Hyperplane& h = solution.hyperplanes[0];
  const int n = instance.size();
  const int d = instance.dim();
  if (preset == OmPreset::kWeber) {
    int above = 0;
    int below = 0;
    for (int i = 0; i < n; ++i) {
      const double s = h.Evaluate(instance.point(i));
      const double scale = 1e-9 * std::max(1.0, std::abs(h.alpha()));
      above += s > scale;
      below += s < -scale;
    }
    GeometryCheck c;
    c.name = "pseudo_halving";
    c.applicable = true;
    c.passed = 2 * above <= n && 2 * below <= n;
    std::ostringstream w;
    w << "above=" << above << " below=" << below << " n=" << n;
    c.witness = w.str();
    out.push_back(c);
    return out;
  }
  // Center: d+1 points at the maximal residual, or a hull facet parallel to
  // the hyperplane.
  std::vector<double> e(n);
  double top = 0.0;
  for (int i = 0; i < n; ++i) {
    e[i] = Residual(instance.point(i), h, kind);
    top = std::max(top, e[i]);
  }
  int at_max = 0;
  for (double v : e) at_max += std::abs(v - top) <= 1e-7 * std::max(1.0, top);
  GeometryCheck blocked;
  blocked.name = "center_blockedness";
  blocked.applicable = true;
  blocked.passed = at_max >= d + 1;
  blocked.witness = "points_at_max=" + std::to_string(at_max);
  out.push_back(blocked);

  GeometryCheck facet;
  facet.name = "center_parallel_facet";
  facet.applicable = true;
  double bnorm = 0.0;
  for (double b : h.beta()) bnorm = std::max(bnorm, std::abs(b));
  std::vector<int> idx(d);
  std::iota(idx.begin(), idx.end(), 0);
  while (n >= d) {
    std::vector<std::span<const double>> xs;
    for (int t : idx) xs.push_back(instance.point(t));
    if (auto f = HyperplaneThrough(xs)) {
      // Parallel: beta proportional to the facet normal.
      const auto& fb = f->beta();
      double fnorm = 0.0;
      for (double b : fb) fnorm = std::max(fnorm, std::abs(b));
      double dev_plus = 0.0;
      double dev_minus = 0.0;
      for (int l = 0; l < d; ++l) {
        dev_plus =
            std::max(dev_plus, std::abs(fb[l] / fnorm - h.beta()[l] / bnorm));
        dev_minus =
            std::max(dev_minus, std::abs(fb[l] / fnorm + h.beta()[l] / bnorm));
      }
      if (std::min(dev_plus, dev_minus) <= 1e-7) {
        int pos = 0;
        int neg = 0;
        for (int i = 0; i < n; ++i) {
          const double s = f->Evaluate(instance.point(i)) / fnorm;
          pos += s > 1e-9;
          neg += s < -1e-9;
        }
        if (pos == 0 || neg == 0) {
          facet.passed = true;
          std::ostringstream w;
          w << "facet=";
          for (size_t t = 0; t < idx.size(); ++t) {
            w << (t ? "," : "") << idx[t];
          }
          facet.witness = w.str();
          break;
        }
      }
    }
    int t = d - 1;
    while (t >= 0 && idx[t] == n - d + t) --t;
    if (t < 0) break;
    ++idx[t];
    for (int u = t + 1; u < d; ++u) idx[u] = idx[u - 1] + 1;
  }
  out.push_back(facet);
  return out;
}

}  // namespace hyperloc
