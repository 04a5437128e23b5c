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

#include "vnm/bounds/info_matrix.h"

#include <algorithm>
#include <limits>

#include "vnm/core/errors.h"

namespace vnm {

InfoMatrix ComputeInfoMatrix(const Eigen::MatrixXd& reduced_rows) {
  const Eigen::Index k = reduced_rows.rows();
  const Eigen::Index n = reduced_rows.cols();
  if (k < 1) throw DomainError("information matrix needs at least one record");
  InfoMatrix info;
  info.k = static_cast<int>(k);
  info.sigma_d = Eigen::MatrixXd::Zero(n, n);
  info.sigma_d.selfadjointView<Eigen::Lower>().rankUpdate(
      reduced_rows.transpose(), 1.0 / static_cast<double>(k));
  info.sigma_d.triangularView<Eigen::StrictlyUpper>() =
      info.sigma_d.transpose();
  if (n == 0) return info;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(info.sigma_d,
                                                     Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = eig.eigenvalues();
  info.eigenvalues.assign(ev.data(), ev.data() + n);
  double top = std::max(0.0, ev[n - 1]);
  double cutoff = static_cast<double>(std::max(k, n)) *
                  std::numeric_limits<double>::epsilon() * top;
  for (double v : info.eigenvalues) {
    if (v > cutoff) ++info.rank;
  }
  info.lambda_min = info.rank == n ? ev[0] : 0.0;
  return info;
}

InfoMatrix ComputeInfoMatrix(const Dataset& dataset,
                             const BreakpointGrid& grid) {
  return ComputeInfoMatrix(ReducedDesignMatrix(dataset, grid));
}

}  // namespace vnm
