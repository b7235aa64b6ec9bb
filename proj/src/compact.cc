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

#include "hyperloc/compact.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <queue>
#include <string>
#include <utility>

#include "hyperloc/error.h"
#include "hyperloc/heuristics.h"
#include "hyperloc/logging.h"

namespace hyperloc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kIntegralTol = 1e-6;

std::string Name(const char* base, int a, int b = -1) {
  std::string s = std::string(base) + "_" + std::to_string(a + 1);
  if (b >= 0) s += "_" + std::to_string(b + 1);
  return s;
}

void AddObjectiveBlock(const OrderedWeights& lambda, CompactEncoding encoding,
                       CompactModel* model) {
  LpModel& lp = model->lp;
  const int n = model->instance.size();
  if (encoding == CompactEncoding::kOrderedLp) {
    std::vector<int> u(n), v(n);
    for (int k = 0; k < n; ++k) {
      u[k] = lp.AddVariable(1.0, -kLpInf, kLpInf, Name("u", k));
    }
    for (int i = 0; i < n; ++i) {
      v[i] = lp.AddVariable(1.0, -kLpInf, kLpInf, Name("v", i));
    }
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < n; ++k) {
        std::vector<LpEntry> row = {{u[k], 1.0}, {v[i], 1.0}};
        if (lambda[k] != 0.0) row.push_back({model->e[i], -lambda[k]});
        lp.AddRow(RowSense::kGreaterEqual, 0.0, row, Name("om", i, k));
        ++model->lambda_rows;
      }
    }
    return;
  }
  int step = 0;
  for (const auto& [k, inc] : lambda.Steps()) {
    if (k == n) {
      for (int i = 0; i < n; ++i) {
        lp.SetCost(model->e[i], lp.cost(model->e[i]) + inc);
      }
    } else if (k == 1) {
      const int t = lp.AddVariable(inc, 0.0, kLpInf, Name("t", step));
      for (int i = 0; i < n; ++i) {
        lp.AddRow(RowSense::kGreaterEqual, 0.0, {{t, 1.0}, {model->e[i], -1.0}},
                  Name("max", step, i));
        ++model->lambda_rows;
      }
    } else {
      const int t = lp.AddVariable(inc * k, 0.0, kLpInf, Name("t", step));
      for (int i = 0; i < n; ++i) {
        const int r = lp.AddVariable(inc, 0.0, kLpInf, Name("r", step, i));
        lp.AddRow(RowSense::kGreaterEqual, 0.0,
                  {{r, 1.0}, {t, 1.0}, {model->e[i], -1.0}},
                  Name("excess", step, i));
        ++model->lambda_rows;
      }
    }
    ++step;
  }
}

}  // namespace

CompactModel BuildCompact(const Instance& instance, int p,
                          const OrderedWeights& lambda, ResidualKind kind,
                          const CompactOptions& options) {
  RequireSolvableKind(kind);
  const int n = instance.size();
  const int d = instance.dim();
  if (p < 1 || p > n) throw Error(ErrorCode::kBadParam, "p must be in [1, n]");
  if (lambda.size() != n) {
    throw Error(ErrorCode::kLengthMismatch, "weights and points differ");
  }
  CompactModel model;
  model.instance = instance;
  model.lambda = lambda;
  model.kind = kind;
  model.p = p;
  model.box = MakeCoefficientBox(instance, kind, options.coef_bound);
  const bool l1 = kind == ResidualKind::kL1;
  const int nb = l1 ? d : d - 1;
  const double slope = model.box.slope;
  const double intercept = model.box.intercept;
  LpModel& lp = model.lp;

  model.beta.assign(p, std::vector<int>(nb));
  model.alpha.resize(p);
  for (int j = 0; j < p; ++j) {
    for (int l = 0; l < nb; ++l) {
      model.beta[j][l] = lp.AddVariable(0.0, -slope, slope, Name("beta", j, l));
    }
    model.alpha[j] =
        lp.AddVariable(0.0, -intercept, intercept, Name("alpha", j));
  }
  model.e.resize(n);
  for (int i = 0; i < n; ++i) {
    model.e[i] = lp.AddVariable(0.0, 0.0, kLpInf, Name("e", i));
  }
  model.z.assign(n, std::vector<int>(p));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) {
      model.z[i][j] = lp.AddVariable(0.0, 0.0, 1.0, Name("z", i, j));
      model.binaries.push_back(model.z[i][j]);
    }
  }
  AddObjectiveBlock(lambda, options.encoding, &model);

  // e_i >= |residual| - M_ij (1 - z_ij), M_ij the largest |residual| over
  // the coefficient box.
  model.big_m.assign(n, std::vector<double>(p));
  for (int i = 0; i < n; ++i) {
    double m = intercept;
    for (int l = 0; l < nb; ++l) m += slope * std::abs(instance.coord(i, l));
    if (!l1) m += std::abs(instance.coord(i, d - 1));
    // Vertical: residual = x_id - alpha - beta x; L1: alpha + beta x.
    const double sign = l1 ? 1.0 : -1.0;
    const double constant = l1 ? 0.0 : instance.coord(i, d - 1);
    for (int j = 0; j < p; ++j) {
      model.big_m[i][j] = m;
      for (double s : {1.0, -1.0}) {
        std::vector<LpEntry> row = {{model.e[i], 1.0},
                                    {model.alpha[j], s * sign * -1.0}};
        for (int l = 0; l < nb; ++l) {
          const double x = instance.coord(i, l);
          if (x != 0.0) row.push_back({model.beta[j][l], -s * sign * x});
        }
        row.push_back({model.z[i][j], -m});
        lp.AddRow(RowSense::kGreaterEqual, s * constant - m, row,
                  Name(s > 0 ? "res_pos" : "res_neg", i, j));
        ++model.big_m_rows;
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    std::vector<LpEntry> row;
    for (int j = 0; j < p; ++j) row.push_back({model.z[i][j], 1.0});
    lp.AddRow(RowSense::kEqual, 1.0, row, Name("assign", i));
    ++model.assignment_rows;
  }

  if (l1) {
    // beta = eta+ - eta-, eta+ <= U xi, eta- <= U (1 - xi),
    // theta = eta+ + eta- <= 1, theta >= mu, sum_l mu = 1.
    const double u = slope;
    model.xi.assign(p, std::vector<int>(d));
    model.mu.assign(p, std::vector<int>(d));
    std::vector<int> xi_vars, mu_vars;
    for (int j = 0; j < p; ++j) {
      std::vector<LpEntry> face_row;
      for (int l = 0; l < d; ++l) {
        const int pos = lp.AddVariable(0.0, 0.0, u, Name("eta_pos", j, l));
        const int neg = lp.AddVariable(0.0, 0.0, u, Name("eta_neg", j, l));
        const int theta = lp.AddVariable(0.0, 0.0, 1.0, Name("theta", j, l));
        const int xi = lp.AddVariable(0.0, 0.0, 1.0, Name("xi", j, l));
        const int mu = lp.AddVariable(0.0, 0.0, 1.0, Name("mu", j, l));
        model.xi[j][l] = xi;
        model.mu[j][l] = mu;
        xi_vars.push_back(xi);
        mu_vars.push_back(mu);
        lp.AddRow(RowSense::kEqual, 0.0,
                  {{model.beta[j][l], 1.0}, {pos, -1.0}, {neg, 1.0}},
                  Name("split", j, l));
        lp.AddRow(RowSense::kLessEqual, 0.0, {{pos, 1.0}, {xi, -u}},
                  Name("sign_pos", j, l));
        lp.AddRow(RowSense::kLessEqual, u, {{neg, 1.0}, {xi, u}},
                  Name("sign_neg", j, l));
        lp.AddRow(RowSense::kEqual, 0.0,
                  {{theta, 1.0}, {pos, -1.0}, {neg, -1.0}}, Name("abs", j, l));
        lp.AddRow(RowSense::kGreaterEqual, 0.0, {{theta, 1.0}, {mu, -1.0}},
                  Name("face", j, l));
        model.gauge_rows += 5;
        face_row.push_back({mu, 1.0});
      }
      lp.AddRow(RowSense::kEqual, 1.0, face_row, Name("gauge", j));
      ++model.gauge_rows;
    }
    model.binaries.insert(model.binaries.end(), xi_vars.begin(), xi_vars.end());
    model.binaries.insert(model.binaries.end(), mu_vars.begin(), mu_vars.end());
  }

  if (options.symmetry_breaking) {
    for (int j = 0; j + 1 < p; ++j) {
      lp.AddRow(RowSense::kLessEqual, 0.0,
                {{model.alpha[j], 1.0}, {model.alpha[j + 1], -1.0}},
                Name("order", j));
      ++model.symmetry_rows;
    }
  }
  return model;
}

CompactModel BuildCenterVariant(const Instance& instance, int p,
                                const OrderedWeights& lambda, ResidualKind kind,
                                const CompactOptions& options) {
  if (lambda.preset() != OmPreset::kCenter) {
    throw Error(ErrorCode::kWrongPreset, "center variant needs center weights");
  }
  CompactOptions o = options;
  o.encoding = CompactEncoding::kAuto;
  return BuildCompact(instance, p, lambda, kind, o);
}

CompactModel BuildKCentrumVariant(const Instance& instance, int p,
                                  const OrderedWeights& lambda,
                                  ResidualKind kind,
                                  const CompactOptions& options) {
  if (lambda.preset() != OmPreset::kKCentrum) {
    throw Error(ErrorCode::kWrongPreset,
                "k-centrum variant needs k-centrum weights");
  }
  CompactOptions o = options;
  o.encoding = CompactEncoding::kAuto;
  return BuildCompact(instance, p, lambda, kind, o);
}

std::optional<std::vector<Hyperplane>> CompactHyperplanes(
    const CompactModel& model, const std::vector<double>& x) {
  std::vector<Hyperplane> out;
  for (int j = 0; j < model.p; ++j) {
    std::vector<double> beta;
    for (int v : model.beta[j]) beta.push_back(x[v]);
    const double alpha = x[model.alpha[j]];
    if (model.kind == ResidualKind::kVertical) {
      out.push_back(Hyperplane::Vertical(beta, alpha));
      continue;
    }
    double top = 0.0;
    for (double b : beta) top = std::max(top, std::abs(b));
    if (top < 1e-9) return std::nullopt;
    out.push_back(Hyperplane(beta, alpha).ToGauge(GaugeFor(model.kind)));
  }
  return out;
}

namespace {

double Elapsed(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

double PruneTolerance(double incumbent) {
  return 1e-7 * std::max(1.0, std::abs(incumbent));
}

struct Node {
  double bound = -kInf;
  int depth = 0;
  int64_t id = 0;
  // (binary, value) fixings from the root.
  std::vector<std::pair<int, int>> fixes;
  std::shared_ptr<const Basis> basis;
};

// Best bound first; ties go to the deeper, then the older node.
struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.id > b.id;
  }
};

class CompactSearch {
 public:
  CompactSearch(const CompactModel& model, const CompactSolveOptions& options)
      : model_(model), options_(options), solver_(model.lp) {}

  MipResult Run();

 private:
  void ApplyFixes(LpSolver* solver, std::vector<int>* applied,
                  const std::vector<std::pair<int, int>>& fixes);
  void Offer(const std::vector<Hyperplane>& hs);
  void Round(const std::vector<double>& x);
  int BranchVariable(const std::vector<double>& x) const;
  void CheckBox(MipResult* result) const;

  const CompactModel& model_;
  const CompactSolveOptions& options_;
  LpSolver solver_;
  std::vector<int> applied_;
  std::unique_ptr<LpSolver> rounder_;
  std::vector<int> rounder_applied_;
  Solution incumbent_;
  bool has_incumbent_ = false;
};

void CompactSearch::ApplyFixes(LpSolver* solver, std::vector<int>* applied,
                               const std::vector<std::pair<int, int>>& fixes) {
  for (int v : *applied) solver->SetVariableBounds(v, 0.0, 1.0);
  applied->clear();
  for (const auto& [v, value] : fixes) {
    solver->SetVariableBounds(v, value, value);
    applied->push_back(v);
  }
}

void CompactSearch::Offer(const std::vector<Hyperplane>& hs) {
  Solution s =
      EvaluateArrangement(model_.instance, hs, model_.lambda, model_.kind);
  if (!has_incumbent_ || s.objective < incumbent_.objective - 1e-12) {
    incumbent_ = std::move(s);
    has_incumbent_ = true;
    LogLine(LogLevel::kDebug, "compact_incumbent")
        .Kv("objective", incumbent_.objective);
  }
}

// Serves every point by the LP hyperplane of smallest residual, then
// re-optimizes the hyperplanes for that assignment.
void CompactSearch::Round(const std::vector<double>& lp_x) {
  std::vector<double> x = lp_x;
  if (model_.kind == ResidualKind::kL1) {
    // A relaxed L1 plane may shrink to beta = 0; use the last axis then.
    for (int j = 0; j < model_.p; ++j) {
      double top = 0.0;
      for (int v : model_.beta[j]) top = std::max(top, std::abs(x[v]));
      if (top < 1e-9) x[model_.beta[j].back()] = 1.0;
    }
  }
  const auto hs = CompactHyperplanes(model_, x);
  if (!hs) return;
  Offer(*hs);
  const Instance& inst = model_.instance;
  const int n = inst.size();
  const int p = model_.p;
  std::vector<std::pair<int, int>> fixes;
  for (int i = 0; i < n; ++i) {
    int best = 0;
    double best_r = kInf;
    for (int j = 0; j < p; ++j) {
      const double r = Residual(inst.point(i), (*hs)[j], model_.kind);
      if (r < best_r) {
        best_r = r;
        best = j;
      }
    }
    for (int j = 0; j < p; ++j) fixes.push_back({model_.z[i][j], j == best});
  }
  if (model_.kind == ResidualKind::kL1) {
    // Keep the face and sign pattern of the rounded hyperplanes.
    for (int j = 0; j < p; ++j) {
      const std::vector<double>& beta = (*hs)[j].beta();
      int face = 0;
      for (int l = 1; l < inst.dim(); ++l) {
        if (std::abs(beta[l]) > std::abs(beta[face])) face = l;
      }
      for (int l = 0; l < inst.dim(); ++l) {
        fixes.push_back({model_.xi[j][l], beta[l] >= 0.0});
        fixes.push_back({model_.mu[j][l], l == face});
      }
    }
  }
  if (!rounder_) rounder_ = std::make_unique<LpSolver>(model_.lp);
  ApplyFixes(rounder_.get(), &rounder_applied_, fixes);
  const LpResult& r = rounder_->Solve();
  if (r.status != LpStatus::kOptimal) return;
  if (const auto refit = CompactHyperplanes(model_, r.x)) Offer(*refit);
}

int CompactSearch::BranchVariable(const std::vector<double>& x) const {
  const int nz = model_.instance.size() * model_.p;
  const int total = static_cast<int>(model_.binaries.size());
  const int groups[3][2] = {
      {0, nz}, {nz, nz + (total - nz) / 2}, {nz + (total - nz) / 2, total}};
  for (const auto& [first, last] : groups) {
    int best = -1;
    double best_dist = kInf;
    for (int b = first; b < last; ++b) {
      const double v = x[model_.binaries[b]];
      const double frac = v - std::floor(v);
      if (frac <= kIntegralTol || frac >= 1.0 - kIntegralTol) continue;
      const double dist = std::abs(frac - 0.5);
      if (dist < best_dist) {
        best_dist = dist;
        best = model_.binaries[b];
      }
    }
    if (best >= 0) return best;
  }
  return -1;
}

void CompactSearch::CheckBox(MipResult* result) const {
  const double slope = model_.box.slope;
  const double intercept = model_.box.intercept;
  const int d = model_.instance.dim();
  for (const Hyperplane& h : result->solution.hyperplanes) {
    bool touches = std::abs(h.alpha()) >= intercept * (1.0 - 1e-6);
    if (model_.kind == ResidualKind::kVertical) {
      for (int l = 0; l + 1 < d; ++l) {
        touches = touches || std::abs(h.beta()[l]) >= slope * (1.0 - 1e-6);
      }
    }
    if (touches) {
      result->warnings.push_back(
          "a hyperplane touches the coefficient box; the bound B may bind");
      return;
    }
  }
}

MipResult CompactSearch::Run() {
  const auto start = std::chrono::steady_clock::now();
  const auto deadline =
      start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                  std::chrono::duration<double>(options_.time_limit_secs));
  MipResult result;
  if (options_.initial) {
    incumbent_ = *options_.initial;
    has_incumbent_ = true;
  } else if (options_.heuristic_restarts > 0) {
    incumbent_ = InterchangeHeuristic(model_.instance, model_.p, model_.lambda,
                                      model_.kind, options_.seed,
                                      options_.heuristic_restarts);
    has_incumbent_ = true;
  }

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  int64_t next_id = 0;
  {
    Node root;
    root.id = next_id++;
    open.push(std::move(root));
  }
  bool stopped = false;
  bool numerical = false;
  double stopped_bound = kInf;
  auto cutoff = [&] {
    return has_incumbent_
               ? incumbent_.objective - PruneTolerance(incumbent_.objective)
               : kInf;
  };
  while (!open.empty()) {
    if (has_incumbent_ && incumbent_.objective <= 0.0) break;
    Node node = open.top();
    open.pop();
    if (node.bound >= cutoff()) continue;
    if (std::chrono::steady_clock::now() >= deadline ||
        (options_.node_limit > 0 &&
         result.stats.nodes >= options_.node_limit)) {
      stopped = true;
      stopped_bound = node.bound;
      break;
    }
    ++result.stats.nodes;
    ApplyFixes(&solver_, &applied_, node.fixes);
    if (node.basis) solver_.SetBasis(*node.basis);
    const LpResult* lp = &solver_.Solve();
    std::unique_ptr<LpSolver> fresh;
    if (lp->status == LpStatus::kIterLimit) {
      fresh = std::make_unique<LpSolver>(solver_.model());
      lp = &fresh->Solve();
    }
    if (lp->status == LpStatus::kInfeasible) continue;
    double bound = node.bound;
    int var = -1;
    if (lp->status == LpStatus::kOptimal) {
      bound = std::max(bound, lp->objective);
      if (bound >= cutoff()) continue;
      var = BranchVariable(lp->x);
      if (var < 0) {
        if (const auto hs = CompactHyperplanes(model_, lp->x)) Offer(*hs);
        continue;
      }
      if (node.depth == 0 || options_.rounding_interval <= 1 ||
          result.stats.nodes % options_.rounding_interval == 0) {
        Round(lp->x);
      }
    } else {
      // The bound of the parent stays valid; branch on a free z.
      numerical = true;
      for (int b : model_.binaries) {
        if (solver_.model().lower(b) != solver_.model().upper(b)) {
          var = b;
          break;
        }
      }
      if (var < 0) continue;
    }
    auto basis = std::make_shared<const Basis>(fresh ? fresh->GetBasis()
                                                     : solver_.GetBasis());
    for (int value : {1, 0}) {
      Node child;
      child.bound = bound;
      child.depth = node.depth + 1;
      child.id = next_id++;
      child.fixes = node.fixes;
      child.fixes.push_back({var, value});
      child.basis = basis;
      open.push(std::move(child));
    }
  }

  result.stats.lp_iterations = solver_.total_iterations() +
                               (rounder_ ? rounder_->total_iterations() : 0);
  result.stats.time_secs = Elapsed(start);
  if (!has_incumbent_) {
    result.status =
        stopped ? SolveStatus::kTimeLimit : SolveStatus::kInfeasible;
    result.lower_bound = stopped ? stopped_bound : kInf;
    result.gap = kInf;
    return result;
  }
  double lower = incumbent_.objective;
  if (stopped) {
    lower = std::min(lower, stopped_bound);
    while (!open.empty()) {
      lower = std::min(lower, open.top().bound);
      open.pop();
    }
  }
  result.has_solution = true;
  result.solution = incumbent_;
  result.lower_bound = lower;
  result.gap = RelativeGap(incumbent_.objective, lower);
  if (stopped) {
    result.status = SolveStatus::kTimeLimit;
  } else if (numerical) {
    result.status = SolveStatus::kHeuristicOnly;
    result.warnings.push_back("some node LPs hit the iteration limit");
  } else {
    result.status = SolveStatus::kOptimal;
    result.lower_bound = incumbent_.objective;
    result.gap = 0.0;
  }
  CheckBox(&result);
  LogLine(LogLevel::kInfo, "compact_done")
      .Kv("status", SolveStatusName(result.status))
      .Kv("objective", incumbent_.objective)
      .Kv("bound", result.lower_bound)
      .Kv("nodes", result.stats.nodes)
      .Kv("secs", result.stats.time_secs);
  return result;
}

}  // namespace

MipResult SolveCompact(const CompactModel& model,
                       const CompactSolveOptions& options) {
  if (options.time_limit_secs <= 0 || options.node_limit < 0) {
    throw Error(ErrorCode::kBadParam, "limits must be positive");
  }
  CompactSearch search(model, options);
  return search.Run();
}

}  // namespace hyperloc
