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

#include "hyperloc/branch_price.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <queue>

#include "hyperloc/error.h"
#include "hyperloc/heuristics.h"
#include "hyperloc/logging.h"
#include "hyperloc/master.h"

namespace hyperloc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kIntegralTol = 1e-6;

double Elapsed(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

struct Node {
  int64_t id = 0;
  int depth = 0;
  double bound = -kInf;
  std::vector<BranchConstraint> constraints;
  const char* branch = "root";
};

struct NodeOrder {
  // Best bound first, deeper first on ties, then creation order.
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.id > b.id;
  }
};

double FathomTolerance(double incumbent) {
  return 1e-7 * std::max(1.0, std::abs(incumbent));
}

// Families of positive columns grouped by member set, when every pair of
// points has integral co-occurrence; nullopt otherwise.
std::optional<std::vector<std::vector<std::pair<int, double>>>> Families(
    const ColumnPool& pool, const std::vector<std::pair<int, double>>& positive,
    int n) {
  std::vector<int> first(n, -1);  // point -> index into `positive`
  for (size_t t = 0; t < positive.size(); ++t) {
    for (int i : pool[positive[t].first].members) {
      if (first[i] < 0) {
        first[i] = static_cast<int>(t);
      } else if (pool[positive[first[i]].first].members !=
                 pool[positive[t].first].members) {
        return std::nullopt;
      }
    }
  }
  std::map<std::vector<int>, std::vector<std::pair<int, double>>> by_members;
  for (const auto& [id, y] : positive) {
    by_members[pool[id].members].emplace_back(id, y);
  }
  std::vector<std::vector<std::pair<int, double>>> out;
  for (auto& [members, family] : by_members) out.push_back(family);
  return out;
}

// One hyperplane per family, each at least as good as the family's
// y-weighted residuals.
std::optional<std::vector<Hyperplane>> MergeFamilies(
    const ColumnPool& pool,
    const std::vector<std::vector<std::pair<int, double>>>& families,
    ResidualKind kind) {
  std::vector<Hyperplane> out;
  for (const auto& family : families) {
    std::vector<const Column*> cols;
    std::vector<double> y;
    for (const auto& [id, v] : family) {
      cols.push_back(&pool[id]);
      y.push_back(v);
    }
    auto cert = TryMerge(cols, y, kind);
    if (!cert) return std::nullopt;
    out.push_back(cert->merged);
  }
  return out;
}

}  // namespace

std::optional<Hyperplane> MergeHyperplanes(const std::vector<Hyperplane>& hs,
                                           const std::vector<double>& sigma,
                                           ResidualKind kind) {
  RequireSolvableKind(kind);
  if (hs.empty() || hs.size() != sigma.size()) {
    throw Error(ErrorCode::kLengthMismatch, "hyperplanes and weights");
  }
  const Gauge gauge = GaugeFor(kind);
  double total = 0.0;
  for (size_t t = 0; t < hs.size(); ++t) {
    if (hs[t].gauge() != gauge) {
      throw Error(ErrorCode::kGaugeError, "merge inputs must be in gauge");
    }
    if (!(sigma[t] > 0)) throw Error(ErrorCode::kBadParam, "weights > 0");
    total += sigma[t];
  }
  const int d = hs[0].dim();
  std::vector<double> sign(hs.size(), 1.0);
  if (kind == ResidualKind::kL1) {
    int shared = -1;
    for (int l = 0; l < d && shared < 0; ++l) {
      bool all = true;
      for (const Hyperplane& h : hs) {
        all = all && std::abs(h.beta()[l]) >= 1.0 - 1e-12;
      }
      if (all) shared = l;
    }
    if (shared < 0) return std::nullopt;
    for (size_t t = 0; t < hs.size(); ++t) {
      sign[t] = hs[t].beta()[shared] > 0 ? 1.0 : -1.0;
    }
  }
  std::vector<double> beta(d, 0.0);
  double alpha = 0.0;
  for (size_t t = 0; t < hs.size(); ++t) {
    const double w = sign[t] * sigma[t] / total;
    for (int l = 0; l < d; ++l) beta[l] += w * hs[t].beta()[l];
    alpha += w * hs[t].alpha();
  }
  return Hyperplane(std::move(beta), alpha).ToGauge(gauge);
}

std::optional<MergeCertificate> TryMerge(
    const std::vector<const Column*>& columns, const std::vector<double>& y,
    ResidualKind kind) {
  if (columns.empty() || columns.size() != y.size()) {
    throw Error(ErrorCode::kLengthMismatch, "columns and weights");
  }
  for (const Column* c : columns) {
    if (c->members != columns[0]->members) {
      throw Error(ErrorCode::kBadParam, "merge needs identical member sets");
    }
  }
  MergeCertificate cert;
  double total = std::accumulate(y.begin(), y.end(), 0.0);
  std::vector<Hyperplane> hs;
  for (size_t t = 0; t < columns.size(); ++t) {
    cert.sources.push_back(columns[t]->id);
    cert.sigma.push_back(y[t] / total);
    hs.push_back(columns[t]->hyperplane);
  }
  if (columns.size() == 1) {
    cert.merged = hs[0];
    return cert;
  }
  if (auto merged = MergeHyperplanes(hs, cert.sigma, kind)) {
    cert.merged = *merged;
    return cert;
  }
  // A source that is no worse than the weighted residuals at every member.
  const size_t m = columns[0]->members.size();
  for (size_t s = 0; s < columns.size(); ++s) {
    bool dominates = true;
    for (size_t t = 0; t < m && dominates; ++t) {
      double avg = 0.0;
      for (size_t q = 0; q < columns.size(); ++q) {
        avg += cert.sigma[q] * columns[q]->residuals[t];
      }
      dominates = columns[s]->residuals[t] <= avg + 1e-12;
    }
    if (dominates) {
      cert.merged = hs[s];
      std::fill(cert.sigma.begin(), cert.sigma.end(), 0.0);
      cert.sigma[s] = 1.0;
      return cert;
    }
  }
  return std::nullopt;
}

BranchDecision SelectBranch(const ColumnPool& pool,
                            const std::vector<std::pair<int, double>>& positive,
                            int n, int d, ResidualKind kind,
                            const std::vector<BranchConstraint>& node,
                            bool three_way) {
  std::vector<double> f(static_cast<size_t>(n) * n, 0.0);
  for (const auto& [id, y] : positive) {
    const auto& m = pool[id].members;
    for (size_t a = 0; a < m.size(); ++a) {
      for (size_t b = a + 1; b < m.size(); ++b) f[m[a] * n + m[b]] += y;
    }
  }
  BranchDecision dec;
  double best = kInf;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double v = f[i * n + j];
      if (v <= kIntegralTol || v >= 1.0 - kIntegralTol) continue;
      const double key = std::abs(v - 0.5);
      if (key < best - 1e-12) {
        best = key;
        dec.i = i;
        dec.j = j;
        dec.cooccurrence = v;
      }
    }
  }
  if (dec.i >= 0) {
    dec.kind = BranchKind::kRyanFoster;
    dec.children = {{BranchConstraint::Together(dec.i, dec.j)},
                    {BranchConstraint::Apart(dec.i, dec.j)}};
    return dec;
  }
  std::map<std::vector<int>, std::vector<std::pair<int, double>>> families;
  for (const auto& [id, y] : positive) {
    if (y < 1.0 - kIntegralTol) families[pool[id].members].emplace_back(id, y);
  }
  for (const auto& [members, family] : families) {
    if (family.size() < 2) continue;
    std::vector<const Column*> cols;
    std::vector<double> y;
    for (const auto& [id, v] : family) {
      cols.push_back(&pool[id]);
      y.push_back(v);
    }
    if (TryMerge(cols, y, kind)) continue;
    std::vector<std::pair<int, double>> sorted = family;
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
      return a.second > b.second || (a.second == b.second && a.first < b.first);
    });
    int point = -1;
    if (!three_way) {
      std::vector<bool> has_face(n, false);
      for (const BranchConstraint& c : node) {
        if (c.type == ConstraintType::kFace) has_face[c.i] = true;
      }
      for (int i : members) {
        if (!has_face[i]) {
          point = i;
          break;
        }
      }
    }
    if (point >= 0) {
      dec.kind = BranchKind::kFace;
      dec.i = point;
      for (int m = 0; m < d; ++m) {
        dec.children.push_back({BranchConstraint::Face(point, m)});
      }
    } else {
      dec.kind = BranchKind::kThreeWay;
      const Column& a = pool[sorted[0].first];
      const Column& b = pool[sorted[1].first];
      dec.column_a = a.id;
      dec.column_b = b.id;
      dec.children = {
          {BranchConstraint::Fix(a)},
          {BranchConstraint::Fix(b)},
          {BranchConstraint::Forbid(a), BranchConstraint::Forbid(b)}};
    }
    return dec;
  }
  throw Error(ErrorCode::kNoFractionality, "no branching candidate");
}

PricerRestriction ApplyToPricer(int n,
                                const std::vector<BranchConstraint>& node) {
  PricerRestriction r = PricerRestriction::None(n);
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  auto check = [&](int i) {
    if (i < 0 || i >= n) throw Error(ErrorCode::kBadIndex, "constraint point");
  };
  for (const BranchConstraint& c : node) {
    if (c.type == ConstraintType::kTogether) {
      check(c.i);
      check(c.j);
      parent[find(c.i)] = find(c.j);
    }
  }
  for (int i = 0; i < n; ++i) r.group[i] = find(i);
  for (const BranchConstraint& c : node) {
    switch (c.type) {
      case ConstraintType::kTogether:
        break;
      case ConstraintType::kApart:
        check(c.i);
        check(c.j);
        if (r.group[c.i] == r.group[c.j]) {
          throw Error(ErrorCode::kInfeasibleConstraints,
                      "points required together and apart");
        }
        r.apart.emplace_back(c.i, c.j);
        break;
      case ConstraintType::kFixColumn:
        for (int i : c.members) {
          check(i);
          r.excluded[i] = true;
        }
        break;
      case ConstraintType::kForbidColumn: {
        Column col;
        col.id = c.column;
        col.members = c.members;
        col.hyperplane = c.hyperplane;
        col.residuals = c.residuals;
        r.forbidden.push_back(std::move(col));
        break;
      }
      case ConstraintType::kFace:
        check(c.i);
        if (r.face[c.i] < 0) r.face[c.i] = c.j;
        break;
    }
  }
  return r;
}

MipResult SolveBnp(const Instance& instance, int p,
                   const OrderedWeights& lambda, ResidualKind kind,
                   const BnpOptions& options) {
  RequireSolvableKind(kind);
  const auto start = std::chrono::steady_clock::now();
  const auto deadline =
      start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                  std::chrono::duration<double>(options.time_limit_secs));
  const int n = instance.size();
  const int d = instance.dim();
  if (p < 1) throw Error(ErrorCode::kBadParam, "p must be >= 1");
  if (lambda.size() != n) {
    throw Error(ErrorCode::kLengthMismatch, "weights and points");
  }
  MipResult result;

  ColumnPool pool = InitialPool(instance, kind, lambda);
  Solution incumbent =
      InterchangeHeuristic(instance, std::min(p, n), lambda, kind, options.seed,
                           options.heuristic_restarts);
  if (options.initial && options.initial->objective < incumbent.objective) {
    incumbent = *options.initial;
  }
  AddSolutionColumns(instance, incumbent, kind, &pool);
  LogLine(LogLevel::kInfo, "bnp_start")
      .Kv("n", n)
      .Kv("p", p)
      .Kv("objective", lambda.Label())
      .Kv("residual", ResidualKindName(kind))
      .Kv("pool", pool.size())
      .Kv("incumbent", incumbent.objective);

  PricerOptions pricer_options = options.pricer;
  pricer_options.bottleneck = lambda.MaxOnly();
  const Pricer pricer(instance, kind, pricer_options);
  if (!pricer.exact_available()) {
    result.warnings.push_back("pricing is heuristic only; bounds uncertified");
  }
  double artificial_cost = 10.0 * (incumbent.objective + 1.0);
  Rmp rmp(n, p, lambda, &pool, artificial_cost);

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  int64_t next_id = 0;
  {
    Node root;
    root.id = next_id++;
    open.push(root);
  }
  bool certified = pricer.exact_available();
  bool stopped = false;
  double stopped_bound = kInf;
  while (!open.empty()) {
    if (incumbent.objective <= 0.0) break;
    Node node = open.top();
    open.pop();
    if (node.bound >=
        incumbent.objective - FathomTolerance(incumbent.objective)) {
      continue;
    }
    if (std::chrono::steady_clock::now() >= deadline ||
        (options.node_limit > 0 && result.stats.nodes >= options.node_limit)) {
      stopped = true;
      stopped_bound = node.bound;
      break;
    }
    ++result.stats.nodes;
    PricerRestriction restriction;
    try {
      restriction = ApplyToPricer(n, node.constraints);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kInfeasibleConstraints) throw;
      continue;
    }
    rmp.ApplyConstraints(node.constraints);
    CgOptions cg_options;
    cg_options.tolerance = options.cg_tolerance;
    cg_options.deadline = deadline;
    cg_options.lagrangian =
        std::none_of(node.constraints.begin(), node.constraints.end(),
                     [](const BranchConstraint& c) {
                       return c.type == ConstraintType::kFixColumn;
                     });
    cg_options.smoothing = options.smoothing;
    cg_options.cutoff =
        incumbent.objective - FathomTolerance(incumbent.objective);
    CgResult cg;
    double mass = 0.0;
    while (true) {
      cg = RunColumnGeneration(
          &rmp, &pool,
          [&](const DualPrices& duals) {
            return pricer.Price(duals, restriction);
          },
          cg_options);
      result.stats.cg_iterations += cg.iterations;
      if (cg.hit_limit || cg.cutoff) break;
      mass = rmp.ArtificialMass();
      if (mass <= 1e-9 || cg.value >= incumbent.objective ||
          artificial_cost >= 1e12) {
        break;
      }
      artificial_cost *= 100.0;
      rmp.SetArtificialCost(artificial_cost);
    }
    if (cg.hit_limit) {
      stopped = true;
      stopped_bound = node.bound;
      break;
    }
    if (!cg.certified && !cg.cutoff) certified = false;
    double bound = std::max(node.bound, cg.lower_bound);
    if (cg.certified) bound = std::max(bound, cg.value);
    LogLine(LogLevel::kInfo, "node")
        .Kv("id", node.id)
        .Kv("depth", node.depth)
        .Kv("branch", node.branch)
        .Kv("bound", bound)
        .Kv("incumbent", incumbent.objective)
        .Kv("cg_iters", cg.iterations)
        .Kv("pool", pool.size());
    if (mass > 1e-9 ||
        bound >= incumbent.objective - FathomTolerance(incumbent.objective)) {
      continue;
    }
    const auto positive = rmp.PositiveColumns(1e-9);
    std::optional<std::vector<Hyperplane>> found;
    if (auto families = Families(pool, positive, n)) {
      found = MergeFamilies(pool, *families, kind);
    }
    if (found) {
      Solution sol = EvaluateArrangement(instance, *found, lambda, kind);
      if (sol.objective > cg.value + 1e-6 * std::max(1.0, cg.value)) {
        result.warnings.push_back("merged solution exceeds node bound");
      }
      if (sol.objective < incumbent.objective) {
        incumbent = std::move(sol);
        AddSolutionColumns(instance, incumbent, kind, &pool);
        LogLine(LogLevel::kInfo, "incumbent")
            .Kv("node", node.id)
            .Kv("objective", incumbent.objective);
      }
      if (incumbent.objective <= cg.value + 1e-6 * std::max(1.0, cg.value)) {
        continue;
      }
    }
    BranchDecision dec;
    try {
      dec = SelectBranch(pool, positive, n, d, kind, node.constraints,
                         options.three_way);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNoFractionality) throw;
      result.warnings.push_back("node without branching candidate dropped");
      certified = false;
      continue;
    }
    const char* label = dec.kind == BranchKind::kRyanFoster ? "ryan_foster"
                        : dec.kind == BranchKind::kFace     ? "face"
                                                            : "three_way";
    for (auto& extra : dec.children) {
      Node child;
      child.id = next_id++;
      child.depth = node.depth + 1;
      child.bound = bound;
      child.constraints = node.constraints;
      child.constraints.insert(child.constraints.end(), extra.begin(),
                               extra.end());
      child.branch = label;
      open.push(std::move(child));
    }
  }

  double lower = incumbent.objective;
  if (stopped) lower = std::min(lower, stopped_bound);
  while (!open.empty()) {
    lower = std::min(lower, open.top().bound);
    open.pop();
  }
  if (incumbent.objective <= 0.0) lower = 0.0;
  lower = std::max(lower, 0.0);
  result.has_solution = true;
  result.solution = incumbent;
  result.lower_bound = lower;
  result.gap = RelativeGap(incumbent.objective, lower);
  if (stopped) {
    result.status = SolveStatus::kTimeLimit;
  } else if (!certified) {
    result.status = SolveStatus::kHeuristicOnly;
  } else {
    result.status = SolveStatus::kOptimal;
    result.lower_bound = incumbent.objective;
    result.gap = 0.0;
  }
  result.stats.columns = pool.size();
  result.stats.lp_iterations = rmp.lp_iterations();
  result.stats.time_secs = Elapsed(start);
  LogLine(LogLevel::kInfo, "bnp_done")
      .Kv("status", SolveStatusName(result.status))
      .Kv("objective", incumbent.objective)
      .Kv("bound", result.lower_bound)
      .Kv("nodes", result.stats.nodes)
      .Kv("columns", result.stats.columns)
      .Kv("secs", result.stats.time_secs);
  return result;
}

}  // namespace hyperloc
