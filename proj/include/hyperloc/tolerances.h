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

#ifndef HYPERLOC_TOLERANCES_H_
#define HYPERLOC_TOLERANCES_H_

namespace hyperloc {

// Primal feasibility and geometric identities.
inline constexpr double kFeasibilityTol = 1e-9;
// Objective comparisons, pruning, reduced-cost signs.
inline constexpr double kCompareTol = 1e-7;
// Agreement of reported values.
inline constexpr double kReportTol = 1e-6;

}  // namespace hyperloc

#endif  // HYPERLOC_TOLERANCES_H_
