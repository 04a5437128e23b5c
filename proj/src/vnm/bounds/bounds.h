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
#ifndef VNM_BOUNDS_BOUNDS_H_
#define VNM_BOUNDS_BOUNDS_H_

#include <optional>
#include <string>
#include <vector>

#include "vnm/bounds/info_matrix.h"
#include "vnm/core/utility.h"

namespace vnm {

enum class Regime { kFullRank, kRankDeficient };
std::string RegimeName(Regime r);

struct BoundInputs {
  int n = 2;  // breakpoints N
  double delta = 0.05;
  // Ridge parameter; nullopt selects 0 for full rank and 1/K otherwise.
  std::optional<double> lambda;
  double cbar = 100.0;
  double lipschitz = 10.0;
  double mesh = 0.0;  // mu_N
};

// Finite-sample bounds on the adjusted-utility error. Every quantity carries
// its natural logarithm; the plain value is exp(log) and may be +inf.
struct BoundReport {
  double delta = 0.0;
  double lambda = 0.0;
  bool lambda_auto = false;
  Regime regime = Regime::kFullRank;
  int rank = 0;
  int k = 0;
  double log_omega = 0.0;
  double omega = 0.0;
  double log_weighted_norm_bound = 0.0;
  double weighted_norm_bound = 0.0;
  double log_l2_bound = 0.0;
  double l2_bound = 0.0;
  double linf_bound = 0.0;
  double log_kolmogorov_bound = 0.0;
  double kolmogorov_bound = 0.0;
  // Smallest eigenvalue of Sigma_D + lambda I.
  double lambda_min_regularized = 0.0;
  // l2 bound above 1 says nothing about values in [0, cbar].
  bool vacuous = false;
};

// log(2 + 2 exp(2 cbar)) negated.
double LogOmega(double cbar);

BoundReport TheoreticalBounds(const InfoMatrix& info, const BoundInputs& in);

struct ErrorNorms {
  double l2 = 0.0;
  double linf = 0.0;
};
ErrorNorms EmpiricalErrors(const std::vector<double>& theta_hat,
                           const std::vector<double>& theta_star);

// sup_y |s1 u1(y) - s2 u2(y)| over [0, b_bar]; evaluated at the union of
// both breakpoint sets.
double KolmogorovDistance(const PiecewiseUtility& u1,
                          const PiecewiseUtility& u2, double s1 = 1.0,
                          double s2 = 1.0);

}  // namespace vnm

#endif  // VNM_BOUNDS_BOUNDS_H_
