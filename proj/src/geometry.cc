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

#include "hyperloc/geometry.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "hyperloc/error.h"

namespace hyperloc {

std::string_view ResidualKindName(ResidualKind kind) {
  switch (kind) {
    case ResidualKind::kVertical:
      return "vertical";
    case ResidualKind::kL1:
      return "l1";
    case ResidualKind::kL2:
      return "l2";
    case ResidualKind::kLInf:
      return "linf";
  }
  return "unknown";
}

ResidualKind ParseResidualKind(std::string_view name) {
  if (name == "vertical") return ResidualKind::kVertical;
  if (name == "l1") return ResidualKind::kL1;
  if (name == "l2") return ResidualKind::kL2;
  if (name == "linf") return ResidualKind::kLInf;
  throw Error(ErrorCode::kParseError,
              "unknown residual kind '" + std::string(name) + "'");
}

std::string_view GaugeName(Gauge gauge) {
  switch (gauge) {
    case Gauge::kVertical:
      return "vertical";
    case Gauge::kLInf:
      return "linf";
    case Gauge::kRaw:
      return "raw";
  }
  return "unknown";
}

void RequireSolvableKind(ResidualKind kind) {
  if (kind != ResidualKind::kVertical && kind != ResidualKind::kL1) {
    throw Error(
        ErrorCode::kUnsupportedResidual,
        std::string(ResidualKindName(kind)) + " residuals are evaluation-only");
  }
}

Gauge GaugeFor(ResidualKind kind) {
  switch (kind) {
    case ResidualKind::kVertical:
      return Gauge::kVertical;
    case ResidualKind::kL1:
      return Gauge::kLInf;
    default:
      return Gauge::kRaw;
  }
}

Instance::Instance(const std::vector<Point>& points) {
  if (points.empty()) {
    throw Error(ErrorCode::kBadParam, "instance has no points");
  }
  n_ = static_cast<int>(points.size());
  d_ = static_cast<int>(points.front().size());
  if (d_ < 2) {
    throw Error(ErrorCode::kDimensionUnsupported, "dimension must be >= 2");
  }
  data_.reserve(static_cast<size_t>(n_) * d_);
  for (const Point& p : points) {
    if (static_cast<int>(p.size()) != d_) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "points have different dimensions");
    }
    for (double v : p) {
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::kBadParam, "non-finite coordinate");
      }
      data_.push_back(v);
    }
  }
}

std::vector<Point> Instance::Points() const {
  std::vector<Point> out;
  out.reserve(n_);
  for (int i = 0; i < n_; ++i) {
    auto p = point(i);
    out.emplace_back(p.begin(), p.end());
  }
  return out;
}

Instance Instance::Subset(std::span<const int> indices) const {
  std::vector<Point> pts;
  pts.reserve(indices.size());
  for (int i : indices) {
    if (i < 0 || i >= n_) throw Error(ErrorCode::kBadIndex, "point index");
    auto p = point(i);
    pts.emplace_back(p.begin(), p.end());
  }
  return Instance(pts);
}

Hyperplane::Hyperplane(std::vector<double> beta, double alpha)
    : beta_(std::move(beta)), alpha_(alpha), gauge_(Gauge::kRaw) {
  if (std::all_of(beta_.begin(), beta_.end(),
                  [](double b) { return b == 0.0; })) {
    throw Error(ErrorCode::kGaugeError, "zero coefficient vector");
  }
}

Hyperplane Hyperplane::Vertical(std::span<const double> slopes,
                                double intercept) {
  std::vector<double> beta(slopes.begin(), slopes.end());
  beta.push_back(-1.0);
  Hyperplane h(std::move(beta), intercept);
  h.gauge_ = Gauge::kVertical;
  return h;
}

Hyperplane Hyperplane::ToGauge(Gauge gauge) const {
  if (gauge == gauge_) return *this;
  Hyperplane h = *this;
  h.gauge_ = gauge;
  double scale = 1.0;
  switch (gauge) {
    case Gauge::kRaw:
      return h;
    case Gauge::kVertical: {
      const double last = beta_.back();
      if (last == 0.0) {
        throw Error(ErrorCode::kGaugeError,
                    "vertical residual undefined: beta_d = 0");
      }
      scale = -last;
      break;
    }
    case Gauge::kLInf: {
      scale = 0.0;
      for (double b : beta_) scale = std::max(scale, std::abs(b));
      break;
    }
  }
  for (double& b : h.beta_) b /= scale;
  h.alpha_ /= scale;
  if (gauge == Gauge::kVertical) h.beta_.back() = -1.0;
  if (gauge == Gauge::kLInf) {
    for (double& b : h.beta_) {
      if (std::abs(std::abs(b) - 1.0) < 1e-15) b = b > 0 ? 1.0 : -1.0;
    }
  }
  return h;
}

double Hyperplane::Evaluate(std::span<const double> x) const {
  double s = alpha_;
  for (size_t l = 0; l < beta_.size(); ++l) s += beta_[l] * x[l];
  return s;
}

double ResidualVertical(std::span<const double> x, const Hyperplane& h) {
  if (h.gauge() == Gauge::kVertical) {
    const int d = h.dim();
    double s = x[d - 1] - h.alpha();
    for (int l = 0; l + 1 < d; ++l) s -= h.beta()[l] * x[l];
    return std::abs(s);
  }
  return ResidualVertical(x, h.ToGauge(Gauge::kVertical));
}

double DualNorm(std::span<const double> beta, ResidualKind kind) {
  double s = 0.0;
  switch (kind) {
    case ResidualKind::kL1:
      for (double b : beta) s = std::max(s, std::abs(b));
      return s;
    case ResidualKind::kL2:
      for (double b : beta) s += b * b;
      return std::sqrt(s);
    case ResidualKind::kLInf:
      for (double b : beta) s += std::abs(b);
      return s;
    case ResidualKind::kVertical:
      return std::abs(beta.back());
  }
  return s;
}

double ResidualNorm(std::span<const double> x, const Hyperplane& h,
                    ResidualKind kind) {
  if (kind == ResidualKind::kVertical) {
    throw Error(ErrorCode::kBadParam, "ResidualNorm needs a norm kind");
  }
  if (kind == ResidualKind::kL1 && h.gauge() == Gauge::kLInf) {
    return std::abs(h.Evaluate(x));
  }
  return std::abs(h.Evaluate(x)) / DualNorm(h.beta(), kind);
}

double Residual(std::span<const double> x, const Hyperplane& h,
                ResidualKind kind) {
  if (kind == ResidualKind::kVertical) return ResidualVertical(x, h);
  return ResidualNorm(x, h, kind);
}

std::vector<double> Residuals(const Instance& instance, const Hyperplane& h,
                              ResidualKind kind) {
  const Hyperplane g =
      kind == ResidualKind::kVertical ? h.ToGauge(Gauge::kVertical) : h;
  std::vector<double> out(instance.size());
  for (int i = 0; i < instance.size(); ++i) {
    out[i] = Residual(instance.point(i), g, kind);
  }
  return out;
}

Point Project(std::span<const double> x, const Hyperplane& h,
              ResidualKind kind) {
  const auto& beta = h.beta();
  const int d = h.dim();
  const double value = h.Evaluate(x);
  Point y(x.begin(), x.end());
  switch (kind) {
    case ResidualKind::kVertical: {
      if (beta[d - 1] == 0.0) {
        throw Error(ErrorCode::kGaugeError, "vertical projection undefined");
      }
      y[d - 1] -= value / beta[d - 1];
      break;
    }
    case ResidualKind::kL1: {
      int m = 0;
      for (int l = 1; l < d; ++l) {
        if (std::abs(beta[l]) > std::abs(beta[m])) m = l;
      }
      y[m] -= value / beta[m];
      break;
    }
    case ResidualKind::kL2: {
      double nn = 0.0;
      for (double b : beta) nn += b * b;
      for (int l = 0; l < d; ++l) y[l] -= value * beta[l] / nn;
      break;
    }
    case ResidualKind::kLInf: {
      const double n1 = DualNorm(beta, ResidualKind::kLInf);
      for (int l = 0; l < d; ++l) {
        const double s = beta[l] > 0 ? 1.0 : (beta[l] < 0 ? -1.0 : 0.0);
        y[l] -= value / n1 * s;
      }
      break;
    }
  }
  return y;
}

std::optional<Hyperplane> HyperplaneThrough(
    const std::vector<std::span<const double>>& points) {
  const int d = static_cast<int>(points.size());
  if (d < 2) return std::nullopt;
  if (d == 2) {
    const double dx = points[1][0] - points[0][0];
    const double dy = points[1][1] - points[0][1];
    if (dx == 0.0 && dy == 0.0) return std::nullopt;
    return Hyperplane({dy, -dx}, dx * points[0][1] - dy * points[0][0]);
  }
  Eigen::MatrixXd diff(d - 1, d);
  double scale = 0.0;
  for (int k = 1; k < d; ++k) {
    for (int l = 0; l < d; ++l) {
      diff(k - 1, l) = points[k][l] - points[0][l];
      scale = std::max(scale, std::abs(diff(k - 1, l)));
    }
  }
  if (scale == 0.0) return std::nullopt;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(diff / scale);
  lu.setThreshold(1e-12);
  if (lu.rank() != d - 1) return std::nullopt;
  const Eigen::MatrixXd kernel = lu.kernel();
  std::vector<double> beta(d);
  double alpha = 0.0;
  for (int l = 0; l < d; ++l) {
    beta[l] = kernel(l, 0);
    alpha -= beta[l] * points[0][l];
  }
  return Hyperplane(std::move(beta), alpha);
}

double Distance(std::span<const double> x, std::span<const double> y,
                ResidualKind kind) {
  const size_t d = x.size();
  double s = 0.0;
  switch (kind) {
    case ResidualKind::kVertical:
      for (size_t l = 0; l + 1 < d; ++l) {
        if (x[l] != y[l]) return std::numeric_limits<double>::infinity();
      }
      return std::abs(x[d - 1] - y[d - 1]);
    case ResidualKind::kL1:
      for (size_t l = 0; l < d; ++l) s += std::abs(x[l] - y[l]);
      return s;
    case ResidualKind::kL2:
      for (size_t l = 0; l < d; ++l) s += (x[l] - y[l]) * (x[l] - y[l]);
      return std::sqrt(s);
    case ResidualKind::kLInf:
      for (size_t l = 0; l < d; ++l) s = std::max(s, std::abs(x[l] - y[l]));
      return s;
  }
  return s;
}

}  // namespace hyperloc
