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

#include "hyperloc/objectives.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "hyperloc/error.h"
#include "hyperloc/lp_solver.h"

namespace hyperloc {
namespace {

void RequirePositiveSize(int n) {
  if (n < 1) throw Error(ErrorCode::kBadParam, "weights need n >= 1");
}

std::string FormatNumber(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

OrderedWeights OrderedWeights::Weber(int n) {
  RequirePositiveSize(n);
  OrderedWeights w;
  w.lambda_.assign(n, 1.0);
  w.preset_ = OmPreset::kWeber;
  return w;
}

OrderedWeights OrderedWeights::Center(int n) {
  RequirePositiveSize(n);
  OrderedWeights w;
  w.lambda_.assign(n, 0.0);
  w.lambda_[0] = 1.0;
  w.preset_ = OmPreset::kCenter;
  return w;
}

OrderedWeights OrderedWeights::KCentrum(int n, int k) {
  RequirePositiveSize(n);
  if (k < 1 || k > n) {
    throw Error(ErrorCode::kBadParam, "k-centrum needs 1 <= k <= n");
  }
  OrderedWeights w;
  w.lambda_.assign(n, 0.0);
  std::fill(w.lambda_.begin(), w.lambda_.begin() + k, 1.0);
  w.preset_ = OmPreset::kKCentrum;
  w.k_ = k;
  return w;
}

OrderedWeights OrderedWeights::Centdian(int n, double rho) {
  RequirePositiveSize(n);
  if (!(rho > 0.0 && rho < 1.0)) {
    throw Error(ErrorCode::kBadParam, "centdian needs 0 < rho < 1");
  }
  OrderedWeights w;
  w.lambda_.assign(n, rho);
  w.lambda_[0] = 1.0;
  w.preset_ = OmPreset::kCentdian;
  w.rho_ = rho;
  return w;
}

OrderedWeights OrderedWeights::Custom(std::vector<double> lambda) {
  RequirePositiveSize(static_cast<int>(lambda.size()));
  for (size_t i = 0; i < lambda.size(); ++i) {
    if (!std::isfinite(lambda[i]) || lambda[i] < 0.0) {
      throw Error(ErrorCode::kBadParam, "weights must be finite and >= 0");
    }
    if (i > 0 && lambda[i] > lambda[i - 1]) {
      throw Error(ErrorCode::kNonMonotoneWeights,
                  "weights must be non-increasing");
    }
  }
  OrderedWeights w;
  w.lambda_ = std::move(lambda);
  w.preset_ = OmPreset::kCustom;
  return w;
}

OrderedWeights OrderedWeights::Preset(OmPreset preset, int n, double param) {
  switch (preset) {
    case OmPreset::kWeber:
      return Weber(n);
    case OmPreset::kCenter:
      return Center(n);
    case OmPreset::kKCentrum:
      if (param != std::floor(param)) {
        throw Error(ErrorCode::kBadParam, "k must be an integer");
      }
      return KCentrum(n, static_cast<int>(param));
    case OmPreset::kCentdian:
      return Centdian(n, param);
    case OmPreset::kCustom:
      break;
  }
  throw Error(ErrorCode::kBadParam, "custom weights have no preset form");
}

double OrderedWeights::Sum() const {
  return std::accumulate(lambda_.begin(), lambda_.end(), 0.0);
}

bool OrderedWeights::MaxOnly() const {
  if (lambda_.empty() || !(lambda_[0] > 0.0)) return false;
  for (size_t k = 1; k < lambda_.size(); ++k) {
    if (lambda_[k] != 0.0) return false;
  }
  return true;
}

std::string OrderedWeights::Label() const {
  switch (preset_) {
    case OmPreset::kWeber:
      return "weber";
    case OmPreset::kCenter:
      return "center";
    case OmPreset::kKCentrum:
      return "kcentrum:" + std::to_string(k_);
    case OmPreset::kCentdian:
      return "centdian:" + FormatNumber(rho_);
    case OmPreset::kCustom:
      break;
  }
  return "custom";
}

std::vector<std::pair<int, double>> OrderedWeights::Steps() const {
  std::vector<std::pair<int, double>> steps;
  const int n = size();
  for (int k = 0; k < n; ++k) {
    const double next = k + 1 < n ? lambda_[k + 1] : 0.0;
    const double inc = lambda_[k] - next;
    if (inc > 0.0) steps.emplace_back(k + 1, inc);
  }
  return steps;
}

OrderedWeights OrderedWeights::Resized(int n) const {
  if (n == size()) return *this;
  switch (preset_) {
    case OmPreset::kKCentrum:
      return KCentrum(n, std::min(k_, n));
    case OmPreset::kCustom:
      throw Error(ErrorCode::kLengthMismatch,
                  "custom weights cannot be resized");
    default:
      return Preset(preset_, n, rho_);
  }
}

double OmEval(const OrderedWeights& lambda, std::span<const double> e) {
  if (static_cast<int>(e.size()) != lambda.size()) {
    throw Error(ErrorCode::kLengthMismatch, "residual and weight lengths");
  }
  std::vector<double> sorted(e.begin(), e.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double s = 0.0;
  for (size_t k = 0; k < sorted.size(); ++k) s += lambda[k] * sorted[k];
  return s;
}

double OmLpValue(const OrderedWeights& lambda, std::span<const double> e) {
  const int n = lambda.size();
  if (static_cast<int>(e.size()) != n) {
    throw Error(ErrorCode::kLengthMismatch, "residual and weight lengths");
  }
  LpModel model;
  std::vector<int> u(n), v(n);
  for (int k = 0; k < n; ++k) u[k] = model.AddVariable(1.0, -kLpInf, kLpInf);
  for (int i = 0; i < n; ++i) v[i] = model.AddVariable(1.0, -kLpInf, kLpInf);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      model.AddRow(lambda[k] * e[i], kLpInf, {{u[k], 1.0}, {v[i], 1.0}});
    }
  }
  LpSolver solver(model);
  const LpResult& result = solver.Solve();
  if (result.status != LpStatus::kOptimal) {
    throw Error(ErrorCode::kNumerical, "ordered median LP not solved");
  }
  return result.objective;
}

OrderedWeights ParseOmSpec(std::string_view spec, int n) {
  auto parse_number = [&](std::string_view text) {
    try {
      size_t used = 0;
      const std::string s(text);
      const double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      throw Error(ErrorCode::kParseError,
                  "bad number in objective '" + std::string(spec) + "'");
    }
  };
  if (spec == "weber") return OrderedWeights::Weber(n);
  if (spec == "center") return OrderedWeights::Center(n);
  const size_t colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorCode::kParseError,
                "unknown objective '" + std::string(spec) + "'");
  }
  const std::string_view head = spec.substr(0, colon);
  const std::string_view tail = spec.substr(colon + 1);
  if (head == "kcentrum") {
    return OrderedWeights::Preset(OmPreset::kKCentrum, n, parse_number(tail));
  }
  if (head == "centdian") {
    return OrderedWeights::Centdian(n, parse_number(tail));
  }
  if (head == "file") {
    std::ifstream in{std::string(tail)};
    if (!in) {
      throw Error(ErrorCode::kIoError,
                  "cannot open weights file '" + std::string(tail) + "'");
    }
    std::vector<double> lambda;
    std::string line;
    while (std::getline(in, line)) {
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      const auto last = line.find_last_not_of(" \t\r");
      lambda.push_back(parse_number(line.substr(first, last - first + 1)));
    }
    if (static_cast<int>(lambda.size()) != n) {
      throw Error(ErrorCode::kLengthMismatch,
                  "weights file has " + std::to_string(lambda.size()) +
                      " entries, expected " + std::to_string(n));
    }
    return OrderedWeights::Custom(std::move(lambda));
  }
  throw Error(ErrorCode::kParseError,
              "unknown objective '" + std::string(spec) + "'");
}

}  // namespace hyperloc
