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

#ifndef VNM_MLE_MLE_H_
#define VNM_MLE_MLE_H_

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vnm/core/grid.h"
#include "vnm/core/lottery.h"
#include "vnm/core/utility.h"
#include "vnm/optim/ipm.h"

namespace vnm {

enum class MleStatus {
  kUnique,
  kNonUniqueRankDeficient,
  kNotRationalizable,
  kSeparationAtBound,
};
std::string MleStatusName(MleStatus s);
MleStatus ParseMleStatus(const std::string& name);

struct MleOptions {
  // Benchmark-only: fixes sigma instead of estimating it.
  std::optional<double> fixed_sigma;
  // gamma* <= gamma_zero_rel_tol * cbar is reported as gamma* = 0.
  double gamma_zero_rel_tol = 1e-6;
  // Without shape constraints the likelihood can diverge; interior values are
  // boxed to |theta_j| <= none_box_rel * cbar. Hitting the box is reported.
  double none_box_rel = 1e4;
  bool detect_separation = true;
  IpmOptions ipm;
};

// rows(k, :) = -Z_k p^k over the full grid (K x N).
struct MleProblem {
  BreakpointGrid grid;
  SparseRowMatrix rows;
  StructureParams structure;
  MleOptions options;
};

MleProblem MakeMleProblem(const Dataset& dataset, const BreakpointGrid& grid,
                          const StructureParams& structure,
                          const MleOptions& options = {});

// -sum_k log(1 + exp(rows_k . theta)), theta over the full grid.
double LogLikelihood(const Eigen::VectorXd& theta, const SparseRowMatrix& rows);
Eigen::VectorXd LogLikelihoodGradient(const Eigen::VectorXd& theta,
                                      const SparseRowMatrix& rows);

struct MleDiagnostics {
  int k = 0;  // records
  int rank = 0;
  double lambda_min = 0.0;
  std::vector<double> eigenvalues;
  double gamma_zero_tol = 0.0;
  int iterations = 0;
  double gap = 0.0;
  double dual_residual = 0.0;
  std::string solver_message;
  bool separation_detected = false;
  // Largest slope change made by the post-solve projection.
  double cleanup_adjustment = 0.0;
  bool box_active = false;
  bool sigma_fixed = false;
};

struct MleSolution {
  BreakpointGrid grid;
  StructureParams structure;
  double gamma_star = 0.0;
  // Solver values of the adjusted utility at the grid (alpha-bar).
  std::vector<double> alpha_bar;
  // Normalized estimate; absent when gamma* is below the zero tolerance.
  std::optional<PiecewiseUtility> utility;
  double sigma_hat = std::numeric_limits<double>::infinity();
  double loglik = 0.0;
  MleStatus status = MleStatus::kNotRationalizable;
  MleDiagnostics diagnostics;

  // Identified vector theta-hat = alpha-hat / sigma-hat over the grid.
  std::vector<double> ThetaHat() const;
};

MleSolution SolveMle(const MleProblem& problem);

enum class Rationalizability { kGammaZero, kGammaPositive };

struct RationalizabilityResult {
  Rationalizability verdict = Rationalizability::kGammaZero;
  // max over the admissible set of p-bar' alpha (0 when decided without LP).
  double lp_value = 0.0;
  bool by_sufficient_condition = false;
  std::vector<double> p_bar;
  // Maximizing alpha (empty when decided without LP).
  std::vector<double> certificate;
};

// Aggregate rationalizability test for the monotone structures (kNone is
// rejected: gamma = 0 does not pin the other values there).
RationalizabilityResult CheckRationalizability(const Dataset& dataset,
                                               const BreakpointGrid& grid,
                                               const StructureParams& structure);

// Pointwise band of all shape-feasible utilities through the estimated
// breakpoint values. The lower envelope is the estimate itself.
class OptimalSetBand {
 public:
  OptimalSetBand(PiecewiseUtility lower, Structure level, double lipschitz)
      : lower_(std::move(lower)), level_(level), lipschitz_(lipschitz) {}
  const PiecewiseUtility& lower() const { return lower_; }
  double Lower(double y) const { return lower_.Eval(y); }
  double Upper(double y) const;
  // Breakpoints and kinks of the upper envelope, ascending.
  std::vector<std::pair<double, double>> UpperPolyline() const;

 private:
  PiecewiseUtility lower_;
  Structure level_;
  double lipschitz_;
};

OptimalSetBand ComputeOptimalSetBand(const MleSolution& solution);

}  // namespace vnm

#endif  // VNM_MLE_MLE_H_
