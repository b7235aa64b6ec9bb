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

// Points, hyperplanes and residual evaluation.

#ifndef HYPERLOC_GEOMETRY_H_
#define HYPERLOC_GEOMETRY_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hyperloc {

using Point = std::vector<double>;

// Vertical and L1 can be optimized; L2 and LInf are evaluation-only.
enum class ResidualKind { kVertical, kL1, kL2, kLInf };

enum class Gauge { kVertical, kLInf, kRaw };

std::string_view ResidualKindName(ResidualKind kind);
ResidualKind ParseResidualKind(std::string_view name);
std::string_view GaugeName(Gauge gauge);

// Throws kUnsupportedResidual unless kind is Vertical or L1.
void RequireSolvableKind(ResidualKind kind);

// The gauge used to store hyperplanes fitted under `kind`.
Gauge GaugeFor(ResidualKind kind);

// An immutable set of n points in R^d, d >= 2, stored row-major.
class Instance {
 public:
  Instance() = default;
  explicit Instance(const std::vector<Point>& points);

  int size() const { return n_; }
  int dim() const { return d_; }
  std::span<const double> point(int i) const {
    return {data_.data() + static_cast<size_t>(i) * d_,
            static_cast<size_t>(d_)};
  }
  double coord(int i, int l) const {
    return data_[static_cast<size_t>(i) * d_ + l];
  }
  std::vector<Point> Points() const;

  // Subset of the rows, in the given order.
  Instance Subset(std::span<const int> indices) const;

 private:
  int n_ = 0;
  int d_ = 0;
  std::vector<double> data_;
};

// The hyperplane {x : beta^T x + alpha = 0}.
class Hyperplane {
 public:
  Hyperplane() = default;
  // Raw coefficients. Throws kGaugeError if beta is the zero vector.
  Hyperplane(std::vector<double> beta, double alpha);

  // x_d = intercept + sum_l slopes[l] x_l, stored with beta_d = -1.
  static Hyperplane Vertical(std::span<const double> slopes, double intercept);

  // Rescales (beta, alpha) into `gauge`. kVertical divides by -beta_d and
  // throws kGaugeError when beta_d == 0; kLInf divides by max |beta_l|.
  Hyperplane ToGauge(Gauge gauge) const;

  const std::vector<double>& beta() const { return beta_; }
  double alpha() const { return alpha_; }
  Gauge gauge() const { return gauge_; }
  int dim() const { return static_cast<int>(beta_.size()); }

  // beta^T x + alpha.
  double Evaluate(std::span<const double> x) const;

 private:
  std::vector<double> beta_;
  double alpha_ = 0.0;
  Gauge gauge_ = Gauge::kRaw;
};

// |x_d - alpha - sum_{l<d} beta_l x_l| in vertical gauge.
double ResidualVertical(std::span<const double> x, const Hyperplane& h);

// |alpha + beta^T x| / ||beta||_*, kind in {L1, L2, LInf}.
double ResidualNorm(std::span<const double> x, const Hyperplane& h,
                    ResidualKind kind);

// Dispatches on kind, including Vertical.
double Residual(std::span<const double> x, const Hyperplane& h,
                ResidualKind kind);

// Residuals of every instance point.
std::vector<double> Residuals(const Instance& instance, const Hyperplane& h,
                              ResidualKind kind);

// Dual norm of beta for the norm of `kind`.
double DualNorm(std::span<const double> beta, ResidualKind kind);

// Closest point of h to x under the distance of `kind`. For L1 the move is
// along the smallest index achieving max |beta_l|; for Vertical along x_d.
Point Project(std::span<const double> x, const Hyperplane& h,
              ResidualKind kind);

// The hyperplane through the given d points, or nullopt when they do not
// determine a unique hyperplane.
std::optional<Hyperplane> HyperplaneThrough(
    const std::vector<std::span<const double>>& points);

// Distance of `kind` between points. Vertical distance is infinite unless
// the first d-1 coordinates coincide.
double Distance(std::span<const double> x, std::span<const double> y,
                ResidualKind kind);

}  // namespace hyperloc

#endif  // HYPERLOC_GEOMETRY_H_
