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

#include "vnm/core/grid.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "vnm/core/errors.h"

namespace vnm {

int64_t BreakpointGrid::Key(double y) const {
  return static_cast<int64_t>(std::llround(y / quantum_));
}

BreakpointGrid BreakpointGrid::Create(std::vector<double> points, double b_bar,
                                      double quantum) {
  if (!(b_bar > 0.0) || !std::isfinite(b_bar)) {
    throw DomainError("b_bar must be positive and finite");
  }
  if (!(quantum > 0.0) || !std::isfinite(quantum)) {
    throw DomainError("payoff quantum must be positive");
  }
  if (quantum > b_bar) throw DomainError("payoff quantum exceeds b_bar");
  BreakpointGrid grid;
  grid.b_bar_ = b_bar;
  grid.quantum_ = quantum;
  for (double y : points) {
    if (!std::isfinite(y) || y < 0.0 || y > b_bar) {
      throw DomainError("payoff " + std::to_string(y) + " outside [0, " +
                        std::to_string(b_bar) + "]");
    }
  }
  points.push_back(0.0);
  points.push_back(b_bar);
  std::sort(points.begin(), points.end());
  const int64_t last = grid.Key(b_bar);
  for (double y : points) {
    int64_t key = grid.Key(y);
    if (!grid.points_.empty() && grid.Key(grid.points_.back()) == key) continue;
    // Endpoints win over payoffs that round onto them.
    if (key == 0) {
      grid.points_.push_back(0.0);
    } else if (key == last) {
      grid.points_.push_back(b_bar);
    } else {
      grid.points_.push_back(y);
    }
  }
  if (grid.points_.front() != 0.0 || grid.points_.back() != b_bar ||
      grid.points_.size() < 2) {
    throw DomainError("grid endpoints invalid");
  }
  return grid;
}

double BreakpointGrid::Mesh() const {
  double mesh = 0.0;
  for (size_t j = 0; j + 1 < points_.size(); ++j) {
    mesh = std::max(mesh, points_[j + 1] - points_[j]);
  }
  return mesh;
}

std::optional<int> BreakpointGrid::Find(double payoff) const {
  int64_t key = Key(payoff);
  auto it = std::lower_bound(
      points_.begin(), points_.end(), key,
      [this](double y, int64_t k) { return Key(y) < k; });
  if (it == points_.end() || Key(*it) != key) return std::nullopt;
  return static_cast<int>(it - points_.begin());
}

int BreakpointGrid::Segment(double y) const {
  auto it = std::upper_bound(points_.begin(), points_.end(), y);
  int j = static_cast<int>(it - points_.begin()) - 1;
  return std::clamp(j, 0, size() - 2);
}

BreakpointGrid BreakpointGrid::WithPoints(
    const std::vector<double>& extra) const {
  std::vector<double> all = points_;
  all.insert(all.end(), extra.begin(), extra.end());
  return Create(std::move(all), b_bar_, quantum_);
}

BreakpointGrid BuildGrid(const Dataset& dataset, double b_bar, double quantum) {
  std::vector<double> points;
  for (const ComparisonRecord& r : dataset) {
    for (const Outcome& o : r.w.outcomes()) points.push_back(o.payoff);
    for (const Outcome& o : r.y.outcomes()) points.push_back(o.payoff);
  }
  return BreakpointGrid::Create(std::move(points), b_bar, quantum);
}

Eigen::VectorXd MassDiff(const Lottery& w, const Lottery& y,
                         const BreakpointGrid& grid) {
  Eigen::VectorXd p = Eigen::VectorXd::Zero(grid.size());
  auto add = [&](const Lottery& lottery, double sign) {
    for (const Outcome& o : lottery.outcomes()) {
      std::optional<int> j = grid.Find(o.payoff);
      if (!j) {
        throw DomainError("support point " + std::to_string(o.payoff) +
                          " is not a grid breakpoint");
      }
      p[*j] += sign * o.prob;
    }
  };
  add(w, 1.0);
  add(y, -1.0);
  return p;
}

Eigen::MatrixXd ReducedDesignMatrix(const Dataset& dataset,
                                    const BreakpointGrid& grid) {
  const int n = grid.size() - 1;
  Eigen::MatrixXd P(static_cast<Eigen::Index>(dataset.size()), n);
  for (size_t k = 0; k < dataset.size(); ++k) {
    P.row(static_cast<Eigen::Index>(k)) =
        Reduced(MassDiff(dataset[k].w, dataset[k].y, grid)).transpose();
  }
  return P;
}

}  // namespace vnm
