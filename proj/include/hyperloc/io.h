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

// CSV input, JSON result documents and SVG plots of planar solutions.

#ifndef HYPERLOC_IO_H_
#define HYPERLOC_IO_H_

#include <string>
#include <string_view>

#include "hyperloc/aggregation.h"
#include "hyperloc/geometry.h"
#include "hyperloc/objectives.h"
#include "hyperloc/solution.h"
#include "json.hpp"

namespace hyperloc {

// Comma separated numbers, one point per line; a first line with any
// non-numeric field is a header. Blank lines are skipped. Throws kParseError
// (with line and column) for bad fields or no data, kDimensionMismatch for
// ragged rows.
Instance ParseCsv(std::string_view text);
// Throws kIoError when the file cannot be read.
Instance LoadCsv(const std::string& path);

// status, objective, lower_bound, gap, hyperplanes, assignment, residuals,
// stats, warnings and geometry_checks of a solve.
nlohmann::json ResultJson(const MipResult& result, const Instance& instance,
                          const OrderedWeights& lambda, ResidualKind kind);

nlohmann::json AggregationJson(const AggregationMap& map,
                               const AggregationReport& report);

// Points with one marker class per cluster and one segment per hyperplane
// clipped to the bounding box of the data. Throws kDimensionUnsupported
// unless d = 2.
std::string SvgDocument(const Solution& solution, const Instance& instance);
void WriteSvg(const Solution& solution, const Instance& instance,
              const std::string& path);

// Throws kIoError.
void WriteTextFile(const std::string& path, std::string_view text);

}  // namespace hyperloc

#endif  // HYPERLOC_IO_H_
