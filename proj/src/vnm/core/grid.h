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

#ifndef VNM_CORE_GRID_H_
#define VNM_CORE_GRID_H_

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "vnm/core/lottery.h"

namespace vnm {

inline constexpr double kDefaultQuantum = 1.0;

// Sorted breakpoints 0 = y_1 < ... < y_N = b_bar. Payoffs are matched to
// breakpoints after rounding to `quantum`.
class BreakpointGrid {
 public:
  static BreakpointGrid Create(std::vector<double> points, double b_bar,
                               double quantum = kDefaultQuantum);

  const std::vector<double>& points() const { return points_; }
  int size() const { return static_cast<int>(points_.size()); }
  double b_bar() const { return b_bar_; }
  double quantum() const { return quantum_; }
  double operator[](int j) const { return points_[j]; }

  // Largest adjacent gap.
  double Mesh() const;

  // Index of the breakpoint matching `payoff` under quantum rounding.
  std::optional<int> Find(double payoff) const;
  // Index j with y_j <= y <= y_{j+1}, j in [0, N-2].
  int Segment(double y) const;

  // Returns a grid with `extra` points added (deduplicated).
  BreakpointGrid WithPoints(const std::vector<double>& extra) const;

  bool operator==(const BreakpointGrid& o) const {
    return points_ == o.points_ && b_bar_ == o.b_bar_ && quantum_ == o.quantum_;
  }

 private:
  BreakpointGrid() = default;
  int64_t Key(double y) const;

  std::vector<double> points_;
  double b_bar_ = 1.0;
  double quantum_ = kDefaultQuantum;
};

// Union of {0}, all supports, and {b_bar}.
BreakpointGrid BuildGrid(const Dataset& dataset, double b_bar,
                         double quantum = kDefaultQuantum);

// p_j = P[W = y_j] - P[Y = y_j] over the grid (length N).
Eigen::VectorXd MassDiff(const Lottery& w, const Lottery& y,
                         const BreakpointGrid& grid);

// Drops the first component.
inline Eigen::VectorXd Reduced(const Eigen::VectorXd& p) {
  return p.tail(p.size() - 1);
}

// K x (N-1) matrix whose rows are the reduced mass differences (unsigned).
Eigen::MatrixXd ReducedDesignMatrix(const Dataset& dataset,
                                    const BreakpointGrid& grid);

}  // namespace vnm

#endif  // VNM_CORE_GRID_H_
