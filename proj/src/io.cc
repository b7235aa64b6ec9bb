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

#include "hyperloc/io.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

#include "hyperloc/error.h"
#include "hyperloc/heuristics.h"

namespace hyperloc {
namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
    s.remove_prefix(1);
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::optional<double> ParseNumber(std::string_view s) {
  s = Trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || end != s.data() + s.size() ||
      !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    const size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string Fixed(double v) {
  std::ostringstream out;
  out.precision(3);
  out << std::fixed << v;
  return out.str();
}

}  // namespace

Instance ParseCsv(std::string_view text) {
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") {
    text.remove_prefix(3);
  }
  std::vector<Point> points;
  int line_no = 0;
  bool first = true;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = Trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string_view> fields = SplitFields(line);
    Point p;
    int bad_column = -1;
    for (size_t c = 0; c < fields.size(); ++c) {
      const auto v = ParseNumber(fields[c]);
      if (!v) {
        if (bad_column < 0) bad_column = static_cast<int>(c);
        continue;
      }
      p.push_back(*v);
    }
    if (bad_column >= 0) {
      if (first) {
        first = false;
        continue;
      }
      throw Error(ErrorCode::kParseError,
                  "line " + std::to_string(line_no) + ", column " +
                      std::to_string(bad_column + 1) + ": not a finite number");
    }
    first = false;
    if (!points.empty() && p.size() != points.front().size()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "line " + std::to_string(line_no) + " has " +
                      std::to_string(p.size()) + " columns, expected " +
                      std::to_string(points.front().size()));
    }
    points.push_back(std::move(p));
  }
  if (points.empty()) throw Error(ErrorCode::kParseError, "no data rows");
  if (points.front().size() < 2) {
    throw Error(ErrorCode::kParseError, "need at least two columns");
  }
  return Instance(points);
}

Instance LoadCsv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseCsv(buffer.str());
}

void WriteTextFile(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::kIoError, "failed writing " + path);
}

nlohmann::json ResultJson(const MipResult& result, const Instance& instance,
                          const OrderedWeights& lambda, ResidualKind kind) {
  nlohmann::json j;
  j["status"] = std::string(SolveStatusName(result.status));
  j["objective"] = result.has_solution
                       ? nlohmann::json(result.solution.objective)
                       : nlohmann::json(nullptr);
  j["lower_bound"] = result.lower_bound;
  j["gap"] = result.gap;
  nlohmann::json planes = nlohmann::json::array();
  for (const Hyperplane& h : result.solution.hyperplanes) {
    planes.push_back({{"beta", h.beta()},
                      {"alpha", h.alpha()},
                      {"gauge", std::string(GaugeName(h.gauge()))}});
  }
  j["hyperplanes"] = planes;
  j["assignment"] = result.solution.assignment;
  j["residuals"] = result.solution.residuals;
  j["stats"] = {{"nodes", result.stats.nodes},
                {"cg_iterations", result.stats.cg_iterations},
                {"columns", result.stats.columns},
                {"lp_iterations", result.stats.lp_iterations},
                {"time_secs", result.stats.time_secs}};
  j["warnings"] = result.warnings;
  nlohmann::json checks = nlohmann::json::array();
  if (result.has_solution) {
    for (const GeometryCheck& c :
         Diagnostics(result.solution, instance, lambda, kind)) {
      checks.push_back({{"name", c.name},
                        {"applicable", c.applicable},
                        {"passed", c.passed},
                        {"witness", c.witness}});
    }
  }
  j["geometry_checks"] = checks;
  return j;
}

nlohmann::json AggregationJson(const AggregationMap& map,
                               const AggregationReport& report) {
  return {{"k", map.centroids.size()},
          {"t", report.t},
          {"bound", report.bound},
          {"aggregated_objective", report.aggregated_objective},
          {"realized_objective", report.realized_objective},
          {"best_known", report.best_known},
          {"realized_error", report.realized_error},
          {"percent", report.percent},
          {"assignment", map.assignment}};
}

std::string SvgDocument(const Solution& solution, const Instance& instance) {
  if (instance.dim() != 2) {
    throw Error(ErrorCode::kDimensionUnsupported, "plots need d = 2");
  }
  double x0 = instance.coord(0, 0), x1 = x0;
  double y0 = instance.coord(0, 1), y1 = y0;
  for (int i = 1; i < instance.size(); ++i) {
    x0 = std::min(x0, instance.coord(i, 0));
    x1 = std::max(x1, instance.coord(i, 0));
    y0 = std::min(y0, instance.coord(i, 1));
    y1 = std::max(y1, instance.coord(i, 1));
  }
  if (x1 - x0 <= 0) x1 = x0 + 1;
  if (y1 - y0 <= 0) y1 = y0 + 1;
  constexpr double kSize = 480.0;
  constexpr double kMargin = 20.0;
  auto sx = [&](double x) { return kMargin + (x - x0) / (x1 - x0) * kSize; };
  auto sy = [&](double y) { return kMargin + (y1 - y) / (y1 - y0) * kSize; };
  static constexpr const char* kColors[] = {"#1b9e77", "#d95f02", "#7570b3",
                                            "#e7298a", "#66a61e", "#e6ab02"};
  std::ostringstream out;
  const double side = kSize + 2 * kMargin;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << side
      << "\" height=\"" << side << "\" viewBox=\"0 0 " << side << ' ' << side
      << "\">\n<style>\n";
  const int p = static_cast<int>(solution.hyperplanes.size());
  for (int j = 0; j < p; ++j) {
    out << ".cluster-" << j << "{fill:" << kColors[j % 6] << ";}\n"
        << ".hyperplane-" << j << "{stroke:" << kColors[j % 6]
        << ";stroke-width:1.5;}\n";
  }
  out << "</style>\n";
  // Segment of beta_1 x + beta_2 y + alpha = 0 inside the box.
  for (int j = 0; j < p; ++j) {
    const Hyperplane& h = solution.hyperplanes[j];
    const double a = h.beta()[0], b = h.beta()[1], c = h.alpha();
    std::vector<std::pair<double, double>> hits;
    auto keep = [&](double x, double y) {
      const double ex = 1e-9 * (x1 - x0), ey = 1e-9 * (y1 - y0);
      if (x >= x0 - ex && x <= x1 + ex && y >= y0 - ey && y <= y1 + ey) {
        hits.push_back({x, y});
      }
    };
    if (b != 0.0) {
      keep(x0, -(a * x0 + c) / b);
      keep(x1, -(a * x1 + c) / b);
    }
    if (a != 0.0) {
      keep(-(b * y0 + c) / a, y0);
      keep(-(b * y1 + c) / a, y1);
    }
    if (hits.size() < 2) continue;
    auto lo = std::min_element(hits.begin(), hits.end());
    auto hi = std::max_element(hits.begin(), hits.end());
    out << "<line class=\"hyperplane-" << j << "\" x1=\""
        << Fixed(sx(lo->first)) << "\" y1=\"" << Fixed(sy(lo->second))
        << "\" x2=\"" << Fixed(sx(hi->first)) << "\" y2=\""
        << Fixed(sy(hi->second)) << "\"/>\n";
  }
  for (int i = 0; i < instance.size(); ++i) {
    const int j = i < static_cast<int>(solution.assignment.size())
                      ? solution.assignment[i]
                      : 0;
    out << "<circle class=\"cluster-" << j << "\" cx=\""
        << Fixed(sx(instance.coord(i, 0))) << "\" cy=\""
        << Fixed(sy(instance.coord(i, 1))) << "\" r=\"4\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

void WriteSvg(const Solution& solution, const Instance& instance,
              const std::string& path) {
  WriteTextFile(path, SvgDocument(solution, instance));
}

}  // namespace hyperloc
