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

#ifndef VNM_OPTIM_IPM_H_
#define VNM_OPTIM_IPM_H_

#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace vnm {

using SparseRowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// Smooth convex function of z in R^n.
class ConvexObjective {
 public:
  virtual ~ConvexObjective() = default;
  virtual double Value(const Eigen::VectorXd& z) const = 0;
  virtual Eigen::VectorXd Gradient(const Eigen::VectorXd& z) const = 0;
  // Adds the Hessian at z to *h (n x n, dense).
  virtual void AddHessian(const Eigen::VectorXd& z, Eigen::MatrixXd* h) const = 0;
};

class LinearObjective : public ConvexObjective {
 public:
  explicit LinearObjective(Eigen::VectorXd c) : c_(std::move(c)) {}
  double Value(const Eigen::VectorXd& z) const override { return c_.dot(z); }
  Eigen::VectorXd Gradient(const Eigen::VectorXd&) const override { return c_; }
  void AddHessian(const Eigen::VectorXd&, Eigen::MatrixXd*) const override {}

 private:
  Eigen::VectorXd c_;
};

struct IpmOptions {
  // Stop when the surrogate duality gap s'lambda is below
  // max(gap_tol, gap_rel_tol * |f|) and the dual residual is below
  // residual_tol * max(1, |grad|_inf).
  double gap_tol = 1e-9;
  double gap_rel_tol = 1e-12;
  double residual_tol = 1e-9;
  int max_iter = 400;
  double mu = 10.0;
};

struct IpmResult {
  Eigen::VectorXd z;
  Eigen::VectorXd lambda;  // multipliers of G z <= h
  double value = 0.0;
  double gap = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string message;
};

// Minimizes f(z) subject to G z <= h with a primal-dual interior-point method
// (central path, backtracking on the residual norm). z0 must be strictly
// feasible; throws DomainError otherwise.
IpmResult MinimizeIpm(const ConvexObjective& f, const SparseRowMatrix& g,
                      const Eigen::VectorXd& h, const Eigen::VectorXd& z0,
                      const IpmOptions& options = {});

}  // namespace vnm

#endif  // VNM_OPTIM_IPM_H_
