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

// Ordered median weights and their evaluation.

#ifndef HYPERLOC_OBJECTIVES_H_
#define HYPERLOC_OBJECTIVES_H_

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hyperloc {

enum class OmPreset { kWeber, kCenter, kKCentrum, kCentdian, kCustom };

// Non-increasing, nonnegative weights lambda_1 >= ... >= lambda_n >= 0.
class OrderedWeights {
 public:
  OrderedWeights() = default;

  static OrderedWeights Weber(int n);
  static OrderedWeights Center(int n);
  static OrderedWeights KCentrum(int n, int k);
  static OrderedWeights Centdian(int n, double rho);
  // Throws kNonMonotoneWeights for increasing entries, kBadParam for
  // negative or non-finite ones.
  static OrderedWeights Custom(std::vector<double> lambda);

  // `param` is k for KCentrum and rho for Centdian; ignored otherwise.
  static OrderedWeights Preset(OmPreset preset, int n, double param = 0.0);

  const std::vector<double>& lambda() const { return lambda_; }
  double operator[](int k) const { return lambda_[k]; }
  int size() const { return static_cast<int>(lambda_.size()); }
  OmPreset preset() const { return preset_; }
  int k() const { return k_; }
  double rho() const { return rho_; }
  double Sum() const;
  // Only lambda_1 is positive, so OM(e) = lambda_1 * max_i e_i.
  bool MaxOnly() const;

  // "weber", "center", "kcentrum:3", "centdian:0.9" or "custom".
  std::string Label() const;

  // Breakpoints (k, lambda_k - lambda_{k+1}) with positive increment, k
  // 1-based and lambda_{n+1} = 0, so that OM(e) = sum inc * (sum of the k
  // largest entries of e).
  std::vector<std::pair<int, double>> Steps() const;

  // Same preset for a different number of points. Custom weights only
  // resize to their own length.
  OrderedWeights Resized(int n) const;

 private:
  std::vector<double> lambda_;
  OmPreset preset_ = OmPreset::kCustom;
  int k_ = 0;
  double rho_ = 0.0;
};

// sum_k lambda_k e_(k) with e sorted in non-increasing order.
double OmEval(const OrderedWeights& lambda, std::span<const double> e);

// Optimal value of min sum u + sum v s.t. u_k + v_i >= lambda_k e_i.
double OmLpValue(const OrderedWeights& lambda, std::span<const double> e);

// weber | center | kcentrum:k | centdian:rho | file:<path>
OrderedWeights ParseOmSpec(std::string_view spec, int n);

}  // namespace hyperloc

#endif  // HYPERLOC_OBJECTIVES_H_
