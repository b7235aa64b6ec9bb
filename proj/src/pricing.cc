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

#include "hyperloc/pricing.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <unordered_set>

#include "hyperloc/error.h"

namespace hyperloc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Gauge coordinates theta in R^d of one chart. For Vertical the chart has
// beta_{d-1} = -1; for L1 face m it has beta_m = 1. theta[t] for t < d-1 is
// beta[free[t]] and theta[d-1] is alpha. The signed residual of x is
// sum_t theta[t] x[free[t]] + alpha + offset(x).
struct Chart {
  int d = 0;
  int pinned = 0;
  double pinned_value = 0.0;
  std::vector<int> free;

  double Offset(std::span<const double> x) const {
    return pinned_value * x[pinned];
  }

  Hyperplane Build(const std::vector<double>& theta) const {
    std::vector<double> beta(d);
    beta[pinned] = pinned_value;
    for (size_t t = 0; t < free.size(); ++t) beta[free[t]] = theta[t];
    return Hyperplane(std::move(beta), theta[d - 1]);
  }
};

std::vector<Chart> ChartsFor(int d, ResidualKind kind) {
  std::vector<Chart> charts;
  const bool vertical = kind == ResidualKind::kVertical;
  const int faces = vertical ? 1 : d;
  for (int f = 0; f < faces; ++f) {
    Chart c;
    c.d = d;
    c.pinned = vertical ? d - 1 : f;
    c.pinned_value = vertical ? -1.0 : 1.0;
    for (int l = 0; l < d; ++l) {
      if (l != c.pinned) c.free.push_back(l);
    }
    charts.push_back(std::move(c));
  }
  return charts;
}

// Hyperplane in its gauge with a sign convention, so that equal
// hyperplanes compare equal.
Hyperplane Canonical(const Hyperplane& h, ResidualKind kind) {
  Hyperplane g = h.ToGauge(GaugeFor(kind));
  if (kind == ResidualKind::kVertical) return g;
  std::vector<double> beta = g.beta();
  double alpha = g.alpha();
  for (double b : beta) {
    if (std::abs(b) > 1e-12) {
      if (b < 0) {
        for (double& v : beta) v = -v;
        alpha = -alpha;
      }
      break;
    }
  }
  for (double& v : beta) {
    if (std::abs(std::abs(v) - 1.0) <= 1e-12) v = v > 0 ? 1.0 : -1.0;
  }
  return Hyperplane(std::move(beta), alpha).ToGauge(Gauge::kLInf);
}

struct KeyHash {
  size_t operator()(const std::vector<long long>& v) const {
    uint64_t h = 1469598103934665603ULL;
    for (long long x : v) {
      h ^= static_cast<uint64_t>(x);
      h *= 1099511628211ULL;
    }
    return static_cast<size_t>(h);
  }
};

class Dedup {
 public:
  explicit Dedup(ResidualKind kind) : kind_(kind) {}

  // Adds the canonical form of h unless already present.
  void Add(const Hyperplane& h, std::vector<Hyperplane>* out) {
    Hyperplane c = Canonical(h, kind_);
    std::vector<long long> key;
    key.reserve(c.dim() + 1);
    for (double b : c.beta()) key.push_back(std::llround(b * 1e9));
    key.push_back(std::llround(c.alpha() * 1e9));
    if (seen_.insert(std::move(key)).second) out->push_back(std::move(c));
  }

 private:
  ResidualKind kind_;
  std::unordered_set<std::vector<long long>, KeyHash> seen_;
};

double Binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int t = 1; t <= k; ++t) r = r * (n - k + t) / t;
  return r;
}

// Calls f(subset) for every k-subset of {0..n-1}, in lexicographic order.
template <typename F>
void ForEachSubset(int n, int k, F&& f) {
  if (k > n) return;
  std::vector<int> s(k);
  std::iota(s.begin(), s.end(), 0);
  while (true) {
    f(s);
    int t = k - 1;
    while (t >= 0 && s[t] == n - k + t) --t;
    if (t < 0) return;
    ++s[t];
    for (int u = t + 1; u < k; ++u) s[u] = s[u - 1] + 1;
  }
}

// Line a0 * theta0 + a1 * theta1 = rhs in a 2-d chart.
struct Line {
  double a0, a1, rhs;
};

// Precomputed view of a restriction: Together groups, Apart conflicts
// between groups and scratch space.
class Selector {
 public:
  explicit Selector(const PricerRestriction& r) {
    const int n = static_cast<int>(r.group.size());
    rep_of_.assign(n, -1);
    std::vector<int> index(n, -1);
    for (int i = 0; i < n; ++i) {
      int root = r.group[i];
      if (index[root] < 0) {
        index[root] = static_cast<int>(members_.size());
        members_.emplace_back();
      }
      rep_of_[i] = index[root];
      members_[index[root]].push_back(i);
    }
    const int g = static_cast<int>(members_.size());
    blocked_.assign(g, false);
    for (int i = 0; i < n; ++i) {
      if (!r.excluded.empty() && r.excluded[i]) blocked_[rep_of_[i]] = true;
    }
    conflicts_.assign(g, {});
    for (auto [a, b] : r.apart) {
      const int ga = rep_of_[a];
      const int gb = rep_of_[b];
      if (ga == gb) {
        blocked_[ga] = true;
        continue;
      }
      conflicts_[ga].push_back(gb);
      conflicts_[gb].push_back(ga);
      has_conflicts_ = true;
    }
    for (auto& c : conflicts_) {
      std::sort(c.begin(), c.end());
      c.erase(std::unique(c.begin(), c.end()), c.end());
    }
    weight_.resize(g);
  }

  int groups() const { return static_cast<int>(members_.size()); }

  // Best non-empty selection for contributions t (+inf marks a point that
  // may not be selected). Writes group choices to `chosen` when non-null.
  double Value(const std::vector<double>& t, std::vector<int>* chosen) {
    const int g = groups();
    double best_single = kInf;
    int best_single_group = -1;
    double total = 0.0;
    if (chosen) chosen->clear();
    for (int k = 0; k < g; ++k) {
      double w = blocked_[k] ? kInf : 0.0;
      if (!blocked_[k]) {
        for (int i : members_[k]) w += t[i];
      }
      weight_[k] = w;
      if (w < best_single) {
        best_single = w;
        best_single_group = k;
      }
    }
    if (!has_conflicts_) {
      for (int k = 0; k < g; ++k) {
        if (weight_[k] < -1e-12) {
          total += weight_[k];
          if (chosen) chosen->push_back(k);
        }
      }
    } else {
      total = IndependentSet(chosen);
    }
    if (total < -1e-12) return total;
    if (chosen && best_single_group >= 0 && best_single < kInf) {
      chosen->assign(1, best_single_group);
    }
    return best_single;
  }

  std::vector<int> MembersOf(const std::vector<int>& chosen) const {
    std::vector<int> out;
    for (int k : chosen) {
      out.insert(out.end(), members_[k].begin(), members_[k].end());
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  double weight(int k) const { return weight_[k]; }
  bool Conflicts(int a, int b) const {
    return std::binary_search(conflicts_[a].begin(), conflicts_[a].end(), b);
  }
  int group_of(int i) const { return rep_of_[i]; }

 private:
  // Exact maximum-weight independent set over the negative groups, one
  // connected component at a time.
  double IndependentSet(std::vector<int>* chosen) {
    const int g = groups();
    double total = 0.0;
    std::vector<int> component_of(g, -1);
    for (int s = 0; s < g; ++s) {
      if (component_of[s] >= 0 || !(weight_[s] < -1e-12)) continue;
      std::vector<int> comp{s};
      component_of[s] = s;
      for (size_t q = 0; q < comp.size(); ++q) {
        for (int v : conflicts_[comp[q]]) {
          if (component_of[v] < 0 && weight_[v] < -1e-12) {
            component_of[v] = s;
            comp.push_back(v);
          }
        }
      }
      if (comp.size() == 1) {
        total += weight_[s];
        if (chosen) chosen->push_back(s);
        continue;
      }
      std::sort(comp.begin(), comp.end(),
                [&](int a, int b) { return weight_[a] < weight_[b]; });
      best_ = 0.0;
      best_set_.clear();
      current_.clear();
      std::vector<bool> alive(comp.size(), true);
      Search(comp, &alive, 0, 0.0);
      total += best_;
      if (chosen)
        chosen->insert(chosen->end(), best_set_.begin(), best_set_.end());
    }
    return total;
  }

  void Search(const std::vector<int>& comp, std::vector<bool>* alive,
              size_t from, double value) {
    double bound = value;
    for (size_t q = from; q < comp.size(); ++q) {
      if ((*alive)[q]) bound += weight_[comp[q]];
    }
    if (bound >= best_ - 1e-15) return;
    size_t q = from;
    while (q < comp.size() && !(*alive)[q]) ++q;
    if (q == comp.size()) {
      best_ = value;
      best_set_ = current_;
      return;
    }
    const int v = comp[q];
    std::vector<size_t> killed;
    for (size_t r = q + 1; r < comp.size(); ++r) {
      if ((*alive)[r] && Conflicts(v, comp[r])) {
        (*alive)[r] = false;
        killed.push_back(r);
      }
    }
    current_.push_back(v);
    Search(comp, alive, q + 1, value + weight_[v]);
    current_.pop_back();
    for (size_t r : killed) (*alive)[r] = true;
    (*alive)[q] = false;
    Search(comp, alive, q + 1, value);
    (*alive)[q] = true;
  }

  std::vector<int> rep_of_;
  std::vector<std::vector<int>> members_;
  std::vector<bool> blocked_;
  std::vector<std::vector<int>> conflicts_;
  bool has_conflicts_ = false;
  std::vector<double> weight_;
  double best_ = 0.0;
  std::vector<int> best_set_;
  std::vector<int> current_;
};

bool IsForbidden(const Column& column, const PricerRestriction& r) {
  for (const Column& f : r.forbidden) {
    if (EquivalentColumns(column.members, column.hyperplane, column.residuals,
                          f.members, f.hyperplane, f.residuals)) {
      return true;
    }
  }
  return false;
}

double Range(const Instance& instance, int l) {
  double lo = kInf;
  double hi = -kInf;
  for (int i = 0; i < instance.size(); ++i) {
    lo = std::min(lo, instance.coord(i, l));
    hi = std::max(hi, instance.coord(i, l));
  }
  return instance.size() == 0 ? 0.0 : hi - lo;
}

}  // namespace

double DefaultCoefficientBound(const Instance& instance) {
  const int d = instance.dim();
  const double top = Range(instance, d - 1);
  double ratio = 1.0;
  for (int l = 0; l + 1 < d; ++l) {
    const double r = Range(instance, l);
    if (r > 0) ratio = std::max(ratio, top / r);
  }
  return 10.0 * ratio;
}

CoefficientBox MakeCoefficientBox(const Instance& instance, ResidualKind kind,
                                  double coef_bound) {
  if (coef_bound < 0 || !std::isfinite(coef_bound)) {
    throw Error(ErrorCode::kBadParam, "coefficient bound must be positive");
  }
  const double b =
      coef_bound > 0 ? coef_bound : DefaultCoefficientBound(instance);
  double norm1 = 0.0;
  for (int i = 0; i < instance.size(); ++i) {
    double s = 0.0;
    for (int l = 0; l < instance.dim(); ++l)
      s += std::abs(instance.coord(i, l));
    norm1 = std::max(norm1, s);
  }
  CoefficientBox box;
  box.slope = kind == ResidualKind::kVertical ? b : 1.0;
  box.intercept = b * (1.0 + norm1);
  return box;
}

CandidateSet EnumerateCandidates(const Instance& instance,
                                 const DualPrices& duals, ResidualKind kind,
                                 const PricerRestriction& restriction,
                                 unsigned families) {
  RequireSolvableKind(kind);
  if (instance.dim() != 2) {
    throw Error(ErrorCode::kDimensionUnsupported,
                "candidate enumeration needs d = 2");
  }
  const int n = instance.size();
  auto active = [&](int i) {
    return restriction.excluded.empty() || !restriction.excluded[i];
  };
  CandidateSet out;
  Dedup dedup(kind);
  for (const Chart& chart : ChartsFor(2, kind)) {
    const int f = chart.free[0];
    std::vector<Line> lines;
    auto a0 = [&](int i) { return instance.coord(i, f); };
    auto b = [&](int i) { return chart.Offset(instance.point(i)); };
    for (int i = 0; i < n; ++i) {
      if (!active(i)) continue;
      if (families & kIncidenceFamily) lines.push_back({a0(i), 1.0, -b(i)});
      if ((families & kThresholdFamily) && i < (int)duals.cstar.size() &&
          duals.cstar[i] > 0 && duals.phi[i] > 0) {
        const double r = duals.phi[i] / duals.cstar[i];
        lines.push_back({a0(i), 1.0, -b(i) + r});
        lines.push_back({a0(i), 1.0, -b(i) - r});
      }
      if (families & kEquidistanceFamily) {
        for (int j = i + 1; j < n; ++j) {
          if (!active(j)) continue;
          lines.push_back({a0(i) - a0(j), 0.0, b(j) - b(i)});
          lines.push_back({a0(i) + a0(j), 2.0, -b(i) - b(j)});
        }
      }
    }
    if ((families & kFaceFamily) && kind != ResidualKind::kVertical) {
      lines.push_back({1.0, 0.0, 1.0});
      lines.push_back({1.0, 0.0, -1.0});
    }
    out.condition_lines += static_cast<int64_t>(lines.size());
    for (size_t p = 0; p < lines.size(); ++p) {
      for (size_t q = p + 1; q < lines.size(); ++q) {
        ++out.pairs_tested;
        const Line& u = lines[p];
        const Line& v = lines[q];
        const double det = u.a0 * v.a1 - u.a1 * v.a0;
        const double scale = std::max({std::abs(u.a0), std::abs(u.a1),
                                       std::abs(v.a0), std::abs(v.a1), 1.0});
        if (std::abs(det) <= 1e-12 * scale * scale) {
          ++out.parallel_pairs;
          continue;
        }
        const double t0 = (u.rhs * v.a1 - u.a1 * v.rhs) / det;
        const double t1 = (u.a0 * v.rhs - u.rhs * v.a0) / det;
        if (kind != ResidualKind::kVertical && std::abs(t0) > 1.0 + 1e-9) {
          continue;
        }
        dedup.Add(chart.Build({t0, t1}), &out.hyperplanes);
      }
    }
  }
  return out;
}

bool IncidenceCandidates(const Instance& instance, ResidualKind kind,
                         int64_t cap, std::vector<Hyperplane>* out) {
  RequireSolvableKind(kind);
  const int n = instance.size();
  const int d = instance.dim();
  const bool vertical = kind == ResidualKind::kVertical;
  const std::vector<Chart> charts = ChartsFor(d, kind);
  double count = 0.0;
  for (int k = 1; k <= std::min(d, n); ++k) {
    count += Binomial(n, k) * Binomial(d - 1, d - k) *
             (vertical ? 1.0 : std::pow(2.0, d - k));
  }
  count *= static_cast<double>(charts.size());
  if (count > static_cast<double>(cap)) return false;

  out->clear();
  Dedup dedup(kind);
  Eigen::MatrixXd a(d, d);
  Eigen::VectorXd rhs(d);
  for (const Chart& chart : charts) {
    for (int k = std::min(d, n); k >= 1; --k) {
      const int pins = d - k;
      ForEachSubset(n, k, [&](const std::vector<int>& pts) {
        ForEachSubset(d - 1, pins, [&](const std::vector<int>& pinned) {
          const int signs = vertical ? 1 : (1 << pins);
          for (int mask = 0; mask < signs; ++mask) {
            a.setZero();
            for (int r = 0; r < k; ++r) {
              const auto x = instance.point(pts[r]);
              for (int t = 0; t + 1 < d; ++t) a(r, t) = x[chart.free[t]];
              a(r, d - 1) = 1.0;
              rhs(r) = -chart.Offset(x);
            }
            for (int r = 0; r < pins; ++r) {
              a(k + r, pinned[r]) = 1.0;
              rhs(k + r) = vertical ? 0.0 : ((mask >> r) & 1 ? -1.0 : 1.0);
            }
            std::vector<double> theta(d);
            if (d == 2) {
              const double det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
              const double scale = std::max({a.cwiseAbs().maxCoeff(), 1.0});
              if (std::abs(det) <= 1e-12 * scale * scale) continue;
              theta[0] = (rhs(0) * a(1, 1) - a(0, 1) * rhs(1)) / det;
              theta[1] = (a(0, 0) * rhs(1) - rhs(0) * a(1, 0)) / det;
            } else {
              Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
              lu.setThreshold(1e-12);
              if (!lu.isInvertible()) continue;
              const Eigen::VectorXd sol = lu.solve(rhs);
              for (int t = 0; t < d; ++t) theta[t] = sol(t);
            }
            bool ok = true;
            for (int t = 0; t < d && ok; ++t) ok = std::isfinite(theta[t]);
            if (!vertical) {
              for (int t = 0; t + 1 < d && ok; ++t) {
                ok = std::abs(theta[t]) <= 1.0 + 1e-9;
              }
            }
            if (ok) dedup.Add(chart.Build(theta), out);
          }
        });
      });
    }
  }
  return true;
}

bool BottleneckCandidates(const Instance& instance, ResidualKind kind,
                          int64_t cap, std::vector<Hyperplane>* out) {
  RequireSolvableKind(kind);
  const int n = instance.size();
  const int d = instance.dim();
  const bool vertical = kind == ResidualKind::kVertical;
  const std::vector<Chart> charts = ChartsFor(d, kind);
  // Rows over (theta, tau): signed residuals, then pins.
  struct Condition {
    std::vector<double> row;
    double rhs;
    int pin;  // free coordinate index for pins, -1 otherwise
  };
  const int pins_per_coordinate = vertical ? 1 : 2;
  const int conditions = 2 * n + pins_per_coordinate * (d - 1);
  const double count =
      Binomial(conditions, d + 1) * static_cast<double>(charts.size());
  if (count > static_cast<double>(cap)) return false;

  out->clear();
  Dedup dedup(kind);
  Eigen::MatrixXd a(d + 1, d + 1);
  Eigen::VectorXd rhs(d + 1);
  for (const Chart& chart : charts) {
    std::vector<Condition> list;
    for (int i = 0; i < n; ++i) {
      const auto x = instance.point(i);
      for (int s : {1, -1}) {
        Condition c{std::vector<double>(d + 1, 0.0), -chart.Offset(x), -1};
        for (int t = 0; t + 1 < d; ++t) c.row[t] = x[chart.free[t]];
        c.row[d - 1] = 1.0;
        c.row[d] = -s;
        list.push_back(std::move(c));
      }
    }
    for (int t = 0; t + 1 < d; ++t) {
      for (int s = 0; s < pins_per_coordinate; ++s) {
        Condition c{std::vector<double>(d + 1, 0.0),
                    vertical ? 0.0 : (s == 0 ? 1.0 : -1.0), t};
        c.row[t] = 1.0;
        list.push_back(std::move(c));
      }
    }
    ForEachSubset(conditions, d + 1, [&](const std::vector<int>& pick) {
      for (int r = 0; r <= d; ++r) {
        const Condition& c = list[pick[r]];
        for (int q = 0; q <= d; ++q) a(r, q) = c.row[q];
        rhs(r) = c.rhs;
      }
      const double scale = std::max(a.cwiseAbs().maxCoeff(), 1.0);
      Eigen::VectorXd sol;
      if (d == 2) {
        const Eigen::Matrix3d m = a;
        const double det = m.determinant();
        if (std::abs(det) <= 1e-12 * scale * scale * scale) return;
        sol = m.inverse() * Eigen::Vector3d(rhs);
      } else {
        Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
        lu.setThreshold(1e-12);
        if (!lu.isInvertible()) return;
        sol = lu.solve(rhs);
      }
      std::vector<double> theta(d);
      for (int t = 0; t < d; ++t) {
        theta[t] = sol(t);
        if (!std::isfinite(theta[t])) return;
      }
      if (!vertical) {
        for (int t = 0; t + 1 < d; ++t) {
          if (std::abs(theta[t]) > 1.0 + 1e-9) return;
        }
      }
      dedup.Add(chart.Build(theta), out);
    });
  }
  return true;
}

Selection SelectMembers(const std::vector<double>& t,
                        const PricerRestriction& restriction) {
  Selector selector(restriction);
  std::vector<double> masked = t;
  for (size_t i = 0; i < masked.size(); ++i) {
    if (!restriction.excluded.empty() && restriction.excluded[i]) {
      masked[i] = kInf;
    }
  }
  std::vector<int> chosen;
  Selection s;
  s.value = selector.Value(masked, &chosen);
  if (s.value < kInf) s.members = selector.MembersOf(chosen);
  return s;
}

Pricer::Pricer(const Instance& instance, ResidualKind kind,
               PricerOptions options)
    : instance_(instance), kind_(kind), options_(options) {
  RequireSolvableKind(kind);
  if (options_.grid < 2 || options_.max_columns < 1) {
    throw Error(ErrorCode::kBadParam, "grid >= 2 and max_columns >= 1");
  }
  const int n = instance.size();
  const int d = instance.dim();
  exact_available_ =
      IncidenceCandidates(instance, kind, options_.candidate_cap, &candidates_);
  if (exact_available_ && options_.bottleneck) {
    std::vector<Hyperplane> extra;
    exact_available_ =
        BottleneckCandidates(instance, kind, options_.candidate_cap, &extra);
    Dedup dedup(kind);
    std::vector<Hyperplane> all;
    for (const Hyperplane& h : candidates_) dedup.Add(h, &all);
    for (const Hyperplane& h : extra) dedup.Add(h, &all);
    candidates_ = std::move(all);
  }
  if (!exact_available_) candidates_.clear();
  candidate_residuals_.reserve(candidates_.size() * n);
  for (const Hyperplane& h : candidates_) {
    for (int i = 0; i < n; ++i) {
      candidate_residuals_.push_back(Residual(instance.point(i), h, kind));
    }
  }

  // Grid box: the hull of the candidate coordinates when they exist.
  const std::vector<Chart> charts = ChartsFor(d, kind);
  const bool vertical = kind == ResidualKind::kVertical;
  std::vector<double> lo(d, kInf), hi(d, -kInf);
  for (const Hyperplane& h : candidates_) {
    const Hyperplane g = h.ToGauge(GaugeFor(kind));
    for (const Chart& c : charts) {
      if (std::abs(g.beta()[c.pinned] - c.pinned_value) > 1e-9) continue;
      for (int t = 0; t + 1 < d; ++t) {
        lo[t] = std::min(lo[t], g.beta()[c.free[t]]);
        hi[t] = std::max(hi[t], g.beta()[c.free[t]]);
      }
      lo[d - 1] = std::min(lo[d - 1], g.alpha());
      hi[d - 1] = std::max(hi[d - 1], g.alpha());
    }
  }
  if (candidates_.empty()) {
    const CoefficientBox box =
        MakeCoefficientBox(instance, kind, options_.coef_bound);
    for (int t = 0; t + 1 < d; ++t) {
      lo[t] = -box.slope;
      hi[t] = box.slope;
    }
    lo[d - 1] = -box.intercept;
    hi[d - 1] = box.intercept;
  }
  if (!vertical) {
    for (int t = 0; t + 1 < d; ++t) {
      lo[t] = -1.0;
      hi[t] = 1.0;
    }
  }
  // Keep the grid residual table within a few million entries.
  int g = options_.grid;
  const double budget = 4e6 / std::max(1, n) / charts.size();
  while (g > 2 && std::pow(static_cast<double>(g), d) > budget) --g;
  std::vector<int> idx(d, 0);
  Dedup dedup(kind);
  for (const Chart& chart : charts) {
    std::fill(idx.begin(), idx.end(), 0);
    while (true) {
      std::vector<double> theta(d);
      for (int t = 0; t < d; ++t) {
        theta[t] = lo[t] + (hi[t] - lo[t]) * idx[t] / (g - 1);
      }
      dedup.Add(chart.Build(theta), &grid_);
      int t = 0;
      while (t < d && ++idx[t] == g) idx[t++] = 0;
      if (t == d) break;
    }
  }
  grid_residuals_.reserve(grid_.size() * n);
  for (const Hyperplane& h : grid_) {
    for (int i = 0; i < n; ++i) {
      grid_residuals_.push_back(Residual(instance.point(i), h, kind));
    }
  }
}

PricingOutcome Pricer::PriceOver(const std::vector<Hyperplane>& hyperplanes,
                                 const std::vector<double>& residuals,
                                 const DualPrices& duals,
                                 const PricerRestriction& restriction,
                                 Certificate certificate) const {
  const bool bottleneck = duals.bottleneck;
  if (bottleneck && certificate == Certificate::kExactMinimum &&
      !options_.bottleneck) {
    throw Error(ErrorCode::kBadParam,
                "bottleneck duals need a pricer built for them");
  }
  const int n = instance_.size();
  const int count = static_cast<int>(hyperplanes.size());
  Selector selector(restriction);
  bool faces = false;
  for (int f : restriction.face) faces = faces || f >= 0;
  std::vector<double> t(n);
  // Contributions at candidate c. Under bottleneck costs only points with
  // residual <= tau may join and each is charged tau.
  auto fill = [&](int c, double tau) {
    const double* r = &residuals[static_cast<size_t>(c) * n];
    const Hyperplane& h = hyperplanes[c];
    for (int i = 0; i < n; ++i) {
      if (bottleneck) {
        t[i] = r[i] <= tau ? duals.cstar[i] * tau - duals.phi[i] : kInf;
      } else {
        t[i] = duals.cstar[i] * r[i] - duals.phi[i];
      }
      if (faces && restriction.face[i] >= 0 &&
          !OnFace(h, restriction.face[i])) {
        t[i] = kInf;
      }
    }
  };
  std::vector<double> levels;
  // Best value at candidate c and the threshold achieving it.
  auto best_at = [&](int c, double* tau) {
    if (!bottleneck) {
      fill(c, 0.0);
      return duals.gamma + selector.Value(t, nullptr);
    }
    const double* r = &residuals[static_cast<size_t>(c) * n];
    levels.assign(r, r + n);
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    double best = kInf;
    for (double level : levels) {
      fill(c, level);
      const double v = duals.gamma + selector.Value(t, nullptr);
      if (v < best) {
        best = v;
        *tau = level;
      }
    }
    return best;
  };

  PricingOutcome out;
  out.certificate = certificate;
  out.candidates = count;
  out.best_reduced_cost = kInf;
  std::vector<double> value(count);
  std::vector<double> level_of(count, 0.0);
  for (int c = 0; c < count; ++c) value[c] = best_at(c, &level_of[c]);
  std::vector<int> order(count);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return value[a] < value[b] || (value[a] == value[b] && a < b);
  });

  std::set<std::vector<int>> seen;
  std::vector<int> chosen;
  for (int c : order) {
    if (value[c] >= out.best_reduced_cost) {
      // Nothing after this can improve the minimum; stop once enough.
      if ((int)out.columns.size() >= options_.max_columns ||
          value[c] >= -options_.tolerance) {
        break;
      }
    }
    fill(c, level_of[c]);
    double v = duals.gamma + selector.Value(t, &chosen);
    if (!(v < kInf)) continue;
    Column col = MakeColumn(instance_, selector.MembersOf(chosen),
                            hyperplanes[c], kind_);
    if (!restriction.forbidden.empty() && IsForbidden(col, restriction)) {
      // Next best selection by one group flip at the same hyperplane.
      double alt = kInf;
      std::vector<int> alt_chosen;
      std::vector<bool> in(selector.groups(), false);
      for (int k : chosen) in[k] = true;
      for (int k = 0; k < selector.groups(); ++k) {
        const double w = selector.weight(k);
        if (!(w < kInf)) continue;
        std::vector<int> trial;
        if (in[k]) {
          if (chosen.size() == 1) continue;
          for (int q : chosen) {
            if (q != k) trial.push_back(q);
          }
        } else {
          bool clash = false;
          for (int q : chosen) clash = clash || selector.Conflicts(k, q);
          if (clash) continue;
          trial = chosen;
          trial.push_back(k);
        }
        const double tv = v + (in[k] ? -w : w);
        if (tv < alt) {
          Column cand = MakeColumn(instance_, selector.MembersOf(trial),
                                   hyperplanes[c], kind_);
          if (IsForbidden(cand, restriction)) continue;
          alt = tv;
          alt_chosen = trial;
        }
      }
      if (!(alt < kInf)) continue;
      v = alt;
      col = MakeColumn(instance_, selector.MembersOf(alt_chosen),
                       hyperplanes[c], kind_);
    }
    // The members may all sit below the threshold.
    if (bottleneck) v = ReducedCost(col, duals);
    out.best_reduced_cost = std::min(out.best_reduced_cost, v);
    if (v < -options_.tolerance &&
        (int)out.columns.size() < options_.max_columns &&
        seen.insert(col.members).second) {
      out.columns.push_back(std::move(col));
      out.reduced_costs.push_back(v);
    }
  }
  // The empty set prices at gamma.
  out.best_reduced_cost = std::min(out.best_reduced_cost, duals.gamma);
  std::vector<size_t> rank(out.columns.size());
  std::iota(rank.begin(), rank.end(), 0);
  std::stable_sort(rank.begin(), rank.end(), [&](size_t a, size_t b) {
    return out.reduced_costs[a] < out.reduced_costs[b];
  });
  std::vector<Column> sorted;
  std::vector<double> costs;
  for (size_t r : rank) {
    sorted.push_back(std::move(out.columns[r]));
    costs.push_back(out.reduced_costs[r]);
  }
  out.columns = std::move(sorted);
  out.reduced_costs = std::move(costs);
  return out;
}

PricingOutcome Pricer::PriceExact(const DualPrices& duals,
                                  const PricerRestriction& restriction) const {
  if (!exact_available_) {
    throw Error(ErrorCode::kSizeLimit,
                "too many incidence candidates for exact pricing");
  }
  return PriceOver(candidates_, candidate_residuals_, duals, restriction,
                   Certificate::kExactMinimum);
}

PricingOutcome Pricer::PriceHeuristic(
    const DualPrices& duals, const PricerRestriction& restriction) const {
  return PriceOver(grid_, grid_residuals_, duals, restriction,
                   Certificate::kHeuristicOnly);
}

PricingOutcome Pricer::Price(const DualPrices& duals,
                             const PricerRestriction& restriction) const {
  if (options_.heuristic_first || !exact_available_) {
    PricingOutcome h = PriceHeuristic(duals, restriction);
    if (!h.columns.empty() || !exact_available_) return h;
  }
  return PriceExact(duals, restriction);
}

PricingOutcome PriceExact(const Instance& instance, const DualPrices& duals,
                          ResidualKind kind,
                          const PricerRestriction& restriction) {
  PricerOptions options;
  options.heuristic_first = false;
  options.bottleneck = duals.bottleneck;
  return Pricer(instance, kind, options).PriceExact(duals, restriction);
}

PricingOutcome PriceHeuristic(const Instance& instance, const DualPrices& duals,
                              ResidualKind kind, int grid,
                              const PricerRestriction& restriction) {
  PricerOptions options;
  options.grid = grid;
  return Pricer(instance, kind, options).PriceHeuristic(duals, restriction);
}

}  // namespace hyperloc
