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

#include "vnm/core/utility.h"

#include <algorithm>
#include <cmath>

#include "vnm/core/errors.h"

namespace vnm {
namespace {

// Relative tolerance for the alpha/beta consistency and shape checks.
constexpr double kShapeTol = 1e-9;

}  // namespace

std::string StructureName(Structure s) {
  switch (s) {
    case Structure::kFull: return "full";
    case Structure::kNoLipschitz: return "nolip";
    case Structure::kMonotoneOnly: return "mono";
    case Structure::kNone: return "none";
  }
  return "none";
}

Structure ParseStructure(const std::string& name) {
  if (name == "full") return Structure::kFull;
  if (name == "nolip") return Structure::kNoLipschitz;
  if (name == "mono") return Structure::kMonotoneOnly;
  if (name == "none") return Structure::kNone;
  throw DomainError("unknown structure level '" + name +
                    "' (expected full|nolip|mono|none)");
}

void StructureParams::Validate() const {
  if (!(lipschitz > 0.0) || !std::isfinite(lipschitz)) {
    throw DomainError("Lipschitz modulus L must be positive");
  }
  if (!(cbar > 0.0) || !std::isfinite(cbar)) {
    throw DomainError("cbar must be positive");
  }
}

PiecewiseUtility PiecewiseUtility::Create(BreakpointGrid grid,
                                          std::vector<double> alpha,
                                          std::vector<double> beta,
                                          bool normalized, Structure promise,
                                          double lipschitz) {
  PiecewiseUtility u(std::move(grid));
  u.alpha_ = std::move(alpha);
  u.beta_ = std::move(beta);
  u.normalized_ = normalized;
  u.promise_ = promise;
  u.lipschitz_ = lipschitz;
  u.Validate();
  return u;
}

PiecewiseUtility PiecewiseUtility::FromValues(BreakpointGrid grid,
                                              std::vector<double> alpha,
                                              bool normalized,
                                              Structure promise,
                                              double lipschitz) {
  if (static_cast<int>(alpha.size()) != grid.size()) {
    throw DomainError("utility values do not match grid size");
  }
  std::vector<double> beta(alpha.size() - 1);
  for (size_t j = 0; j + 1 < alpha.size(); ++j) {
    beta[j] = (alpha[j + 1] - alpha[j]) / (grid[j + 1] - grid[j]);
  }
  return Create(std::move(grid), std::move(alpha), std::move(beta), normalized,
                promise, lipschitz);
}

void PiecewiseUtility::Validate() const {
  const int n = grid_.size();
  if (static_cast<int>(alpha_.size()) != n ||
      static_cast<int>(beta_.size()) != n - 1) {
    throw DomainError("utility vectors do not match grid size");
  }
  double scale = 0.0;
  for (double a : alpha_) {
    if (!std::isfinite(a)) throw DomainError("utility value is not finite");
    scale = std::max(scale, std::fabs(a));
  }
  if (alpha_[0] != 0.0) throw DomainError("utility must vanish at 0");
  if (normalized_ && alpha_[n - 1] != 1.0) {
    throw DomainError("normalized utility must equal 1 at b_bar");
  }
  const double tol = kShapeTol * std::max(scale, 1e-300);
  for (int j = 0; j + 1 < n; ++j) {
    double h = grid_[j + 1] - grid_[j];
    if (std::fabs(beta_[j] * h - (alpha_[j + 1] - alpha_[j])) > tol) {
      throw DomainError("slope inconsistent with utility values on segment " +
                        std::to_string(j));
    }
  }
  if (promise_ == Structure::kNone) return;
  if (!IsMonotone(tol / grid_.b_bar())) {
    throw DomainError("utility is not monotone");
  }
  if (promise_ == Structure::kMonotoneOnly) return;
  if (!IsConcave(tol / grid_.b_bar())) {
    throw DomainError("utility is not concave");
  }
  if (promise_ == Structure::kFull) {
    double bound = lipschitz_ * (normalized_ ? 1.0 : alpha_[n - 1]);
    if (beta_[0] > bound * (1.0 + kShapeTol) + tol / grid_.b_bar()) {
      throw DomainError("utility violates the Lipschitz bound");
    }
  }
}

double PiecewiseUtility::Eval(double y) const {
  if (!(y >= 0.0 && y <= grid_.b_bar())) {
    throw DomainError("utility argument " + std::to_string(y) +
                      " outside [0, b_bar]");
  }
  int j = grid_.Segment(y);
  if (y == grid_[j]) return alpha_[j];
  if (y == grid_[j + 1]) return alpha_[j + 1];
  double t = (y - grid_[j]) / (grid_[j + 1] - grid_[j]);
  return alpha_[j] + t * (alpha_[j + 1] - alpha_[j]);
}

double PiecewiseUtility::Expected(const Lottery& x) const {
  double total = 0.0;
  for (const Outcome& o : x.outcomes()) total += o.prob * Eval(o.payoff);
  return total;
}

bool PiecewiseUtility::IsConcave(double tol) const {
  for (size_t j = 0; j + 1 < beta_.size(); ++j) {
    if (beta_[j + 1] > beta_[j] + tol) return false;
  }
  return true;
}

bool PiecewiseUtility::IsMonotone(double tol) const {
  for (double b : beta_) {
    if (b < -tol) return false;
  }
  return true;
}

bool PiecewiseUtility::operator==(const PiecewiseUtility& o) const {
  return grid_ == o.grid_ && alpha_ == o.alpha_ && beta_ == o.beta_ &&
         normalized_ == o.normalized_ && promise_ == o.promise_ &&
         lipschitz_ == o.lipschitz_;
}

PiecewiseUtility PlaProject(const std::vector<double>& values,
                            const BreakpointGrid& grid) {
  if (static_cast<int>(values.size()) != grid.size()) {
    throw DomainError("value count does not match grid size");
  }
  for (size_t j = 0; j + 1 < values.size(); ++j) {
    if (!(values[j + 1] >= values[j])) {
      throw DomainError("utility values are not monotone at breakpoint " +
                        std::to_string(j + 1));
    }
  }
  bool normalized = values.front() == 0.0 && values.back() == 1.0;
  return PiecewiseUtility::FromValues(grid, values, normalized,
                                      Structure::kMonotoneOnly);
}

}  // namespace vnm
