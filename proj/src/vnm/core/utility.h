// Copyright 2026 The vnmelicit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VNM_CORE_UTILITY_H_
#define VNM_CORE_UTILITY_H_

#include <string>
#include <vector>

#include "vnm/core/grid.h"
#include "vnm/core/lottery.h"

namespace vnm {

enum class Structure { kFull, kNoLipschitz, kMonotoneOnly, kNone };

std::string StructureName(Structure s);  // "full", "nolip", "mono", "none"
Structure ParseStructure(const std::string& name);

// Shape information imposed on the utility. `lipschitz` is a bound on the
// normalized utility's slope per monetary unit; `cbar` bounds 1/sigma.
struct StructureParams {
  Structure level = Structure::kFull;
  double lipschitz = 10.0;
  double cbar = 100.0;
  void Validate() const;
};

// Piecewise-linear utility through (y_j, alpha_j) with slopes beta_j per
// monetary unit. Both vectors are stored and checked for consistency.
class PiecewiseUtility {
 public:
  // `normalized` asserts alpha_1 = 0 and alpha_N = 1. The shape properties
  // implied by `promise` are validated (beta_1 <= lipschitz only for kFull).
  static PiecewiseUtility Create(BreakpointGrid grid, std::vector<double> alpha,
                                 std::vector<double> beta, bool normalized,
                                 Structure promise, double lipschitz = 0.0);
  // Derives the slopes from the values.
  static PiecewiseUtility FromValues(BreakpointGrid grid,
                                     std::vector<double> alpha, bool normalized,
                                     Structure promise, double lipschitz = 0.0);

  const BreakpointGrid& grid() const { return grid_; }
  const std::vector<double>& alpha() const { return alpha_; }
  const std::vector<double>& beta() const { return beta_; }
  bool normalized() const { return normalized_; }
  Structure promise() const { return promise_; }
  double lipschitz() const { return lipschitz_; }

  double Eval(double y) const;
  double Expected(const Lottery& x) const;
  bool IsConcave(double tol = 0.0) const;
  bool IsMonotone(double tol = 0.0) const;

  bool operator==(const PiecewiseUtility& o) const;

 private:
  PiecewiseUtility(BreakpointGrid grid) : grid_(std::move(grid)) {}
  void Validate() const;

  BreakpointGrid grid_;
  std::vector<double> alpha_;
  std::vector<double> beta_;
  bool normalized_ = false;
  Structure promise_ = Structure::kNone;
  double lipschitz_ = 0.0;
};

// Piecewise-linear interpolation of monotone values sampled at the grid.
PiecewiseUtility PlaProject(const std::vector<double>& values,
                            const BreakpointGrid& grid);

}  // namespace vnm

#endif  // VNM_CORE_UTILITY_H_
