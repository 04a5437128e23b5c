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
#include "vnm/bounds/bounds.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vnm/core/errors.h"

namespace vnm {
namespace {

double LogAddExp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

}  // namespace

std::string RegimeName(Regime r) {
  return r == Regime::kFullRank ? "full_rank" : "rank_deficient";
}

double LogOmega(double cbar) {
  // 2 + 2 e^{2c} = 2 e^{2c} (1 + e^{-2c}).
  return -(std::log(2.0) + 2.0 * cbar + std::log1p(std::exp(-2.0 * cbar)));
}

BoundReport TheoreticalBounds(const InfoMatrix& info, const BoundInputs& in) {
  if (!(in.delta > 0.0 && in.delta < 1.0)) {
    throw DomainError("delta must lie in (0, 1)");
  }
  if (!(in.cbar > 0.0) || !(in.lipschitz > 0.0) || in.mesh < 0.0) {
    throw DomainError("cbar and L must be positive and the mesh non-negative");
  }
  if (in.n < 2 || static_cast<int>(info.eigenvalues.size()) != in.n - 1 ||
      info.k < 1) {
    throw DomainError("information matrix does not match N or is empty");
  }
  BoundReport r;
  r.delta = in.delta;
  r.k = info.k;
  r.rank = info.rank;
  r.regime = info.rank == in.n - 1 ? Regime::kFullRank : Regime::kRankDeficient;
  const bool full = r.regime == Regime::kFullRank && info.lambda_min > 0.0;
  if (in.lambda) {
    if (*in.lambda < 0.0) throw DomainError("lambda must be non-negative");
    r.lambda = *in.lambda;
  } else {
    r.lambda_auto = true;
    r.lambda = full ? 0.0 : 1.0 / info.k;
  }
  if (r.lambda == 0.0 && !full) {
    throw DomainError(
        "lambda = 0 requires lambda_min(Sigma_D) > 0 (a full-rank dataset); "
        "pass lambda > 0 or 'auto'");
  }
  r.lambda_min_regularized = info.lambda_min + r.lambda;

  const double rd = info.rank;
  const double log_delta = std::log(in.delta);
  const double a = rd + 2.0 * std::sqrt(-rd * log_delta) - 2.0 * log_delta;
  r.log_omega = LogOmega(in.cbar);
  r.omega = std::exp(r.log_omega);
  // First term sqrt(a / (omega^2 K)) in logs.
  const double log_t1 = 0.5 * (std::log(a) - std::log(info.k)) - r.log_omega;
  const double ridge = r.lambda * in.cbar * in.cbar * (in.n - 1);
  const double log_ridge =
      ridge > 0.0 ? std::log(ridge) : -std::numeric_limits<double>::infinity();
  const double log_t2 = 0.5 * LogAddExp(2.0 * log_t1, log_ridge);
  r.log_weighted_norm_bound = LogAddExp(log_t1, log_t2);
  r.log_l2_bound =
      r.log_weighted_norm_bound - 0.5 * std::log(r.lambda_min_regularized);
  r.log_kolmogorov_bound =
      in.mesh > 0.0
          ? LogAddExp(std::log(in.lipschitz * in.cbar * in.mesh), r.log_l2_bound)
          : r.log_l2_bound;
  r.weighted_norm_bound = std::exp(r.log_weighted_norm_bound);
  r.l2_bound = std::exp(r.log_l2_bound);
  r.linf_bound = r.l2_bound;
  r.kolmogorov_bound = std::exp(r.log_kolmogorov_bound);
  r.vacuous = r.log_l2_bound > 0.0;
  return r;
}

ErrorNorms EmpiricalErrors(const std::vector<double>& theta_hat,
                           const std::vector<double>& theta_star) {
  if (theta_hat.size() != theta_star.size()) {
    throw DomainError("error vectors differ in length (grids must match)");
  }
  ErrorNorms e;
  double sq = 0.0;
  for (size_t j = 0; j < theta_hat.size(); ++j) {
    double d = std::fabs(theta_hat[j] - theta_star[j]);
    sq += d * d;
    e.linf = std::max(e.linf, d);
  }
  e.l2 = std::sqrt(sq);
  return e;
}

double KolmogorovDistance(const PiecewiseUtility& u1,
                          const PiecewiseUtility& u2, double s1, double s2) {
  if (u1.grid().b_bar() != u2.grid().b_bar()) {
    throw DomainError("utilities are defined on different domains");
  }
  double best = 0.0;
  for (const auto* pts : {&u1.grid().points(), &u2.grid().points()}) {
    for (double y : *pts) {
      best = std::max(best, std::fabs(s1 * u1.Eval(y) - s2 * u2.Eval(y)));
    }
  }
  return best;
}

}  // namespace vnm
