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

#ifndef VNM_BOUNDS_INFO_MATRIX_H_
#define VNM_BOUNDS_INFO_MATRIX_H_

#include <vector>

#include <Eigen/Dense>

#include "vnm/core/grid.h"
#include "vnm/core/lottery.h"

namespace vnm {

// Sigma_D = (1/K) P'P over the reduced mass differences.
struct InfoMatrix {
  Eigen::MatrixXd sigma_d;
  int k = 0;
  int rank = 0;
  // Ascending.
  std::vector<double> eigenvalues;
  double lambda_min = 0.0;

  // Eigenvalues of the unnormalized Gram matrix P'P are K * eigenvalues.
  double GramLambdaMin() const { return k * lambda_min; }
};

// Numerical rank uses the cutoff max(K, N-1) * eps * sigma_max on the
// singular values (here eigenvalues) of Sigma_D.
InfoMatrix ComputeInfoMatrix(const Eigen::MatrixXd& reduced_rows);
InfoMatrix ComputeInfoMatrix(const Dataset& dataset, const BreakpointGrid& grid);

}  // namespace vnm

#endif  // VNM_BOUNDS_INFO_MATRIX_H_
