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

#include "vnm/optim/ipm.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vnm/core/errors.h"

namespace vnm {
namespace {

struct Residual {
  Eigen::VectorXd dual;
  Eigen::VectorXd cent;
  double Norm() const {
    return std::sqrt(dual.squaredNorm() + cent.squaredNorm());
  }
};

Residual ComputeResidual(const Eigen::VectorXd& grad, const SparseRowMatrix& g,
                         const Eigen::VectorXd& s, const Eigen::VectorXd& lambda,
                         double t) {
  Residual r;
  r.dual = grad + g.transpose() * lambda;
  r.cent = (lambda.array() * s.array() - 1.0 / t).matrix();
  return r;
}

// Classical log-barrier path following with damped Newton centering. Slower
// than the primal-dual iteration but monotone in a true merit function, so it
// finishes badly scaled problems where the residual line search stalls.
IpmResult MinimizeBarrier(const ConvexObjective& f, const SparseRowMatrix& g,
                          const Eigen::VectorXd& h, const Eigen::VectorXd& z0,
                          const IpmOptions& options) {
  const double m_d = static_cast<double>(h.size());
  Eigen::VectorXd z = z0;
  Eigen::VectorXd s = h - g * z;
  auto phi = [&](double t, const Eigen::VectorXd& zz, const Eigen::VectorXd& ss) {
    return t * f.Value(zz) - ss.array().log().sum();
  };
  double t = m_d / std::max(1.0, std::fabs(f.Value(z)));
  IpmResult result;
  int newton = 0;
  const int max_newton = 50 * options.max_iter;
  while (newton < max_newton) {
    for (int inner = 0; inner < 200 && newton < max_newton; ++inner, ++newton) {
      Eigen::VectorXd inv_s = s.cwiseInverse();
      Eigen::VectorXd grad = t * f.Gradient(z) + g.transpose() * inv_s;
      SparseRowMatrix gd = inv_s.asDiagonal() * g;
      Eigen::MatrixXd hess = Eigen::MatrixXd(gd.transpose() * gd);
      Eigen::MatrixXd fh = Eigen::MatrixXd::Zero(z.size(), z.size());
      f.AddHessian(z, &fh);
      hess += t * fh;
      Eigen::LDLT<Eigen::MatrixXd> ldlt(hess);
      Eigen::VectorXd dz = ldlt.solve(-grad);
      double dec = -grad.dot(dz);
      if (!(dec > 2e-12)) break;
      Eigen::VectorXd gdz = g * dz;
      double step = 1.0;
      for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (gdz[i] > 0.0) step = std::min(step, 0.99 * s[i] / gdz[i]);
      }
      double phi0 = phi(t, z, s);
      bool moved = false;
      for (int k = 0; k < 60; ++k) {
        Eigen::VectorXd zn = z + step * dz;
        Eigen::VectorXd sn = h - g * zn;
        if (sn.minCoeff() > 0.0 && phi(t, zn, sn) <= phi0 - 0.01 * step * dec) {
          z = std::move(zn);
          s = std::move(sn);
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved) break;
    }
    double gap = m_d / t;
    if (gap <= std::max(options.gap_tol,
                        options.gap_rel_tol * std::fabs(f.Value(z)))) {
      result.converged = true;
      break;
    }
    t *= options.mu;
  }
  result.z = z;
  result.lambda = (t * s.array()).inverse().matrix();
  result.value = f.Value(z);
  result.gap = s.dot(result.lambda);
  result.dual_residual =
      (f.Gradient(z) + g.transpose() * result.lambda).lpNorm<Eigen::Infinity>();
  result.iterations = newton;
  result.message = result.converged ? "converged (barrier)"
                                    : "barrier iteration limit reached";
  return result;
}

}  // namespace

IpmResult MinimizeIpm(const ConvexObjective& f, const SparseRowMatrix& g,
                      const Eigen::VectorXd& h, const Eigen::VectorXd& z0,
                      const IpmOptions& options) {
  const Eigen::Index n = z0.size();
  const Eigen::Index m = h.size();
  if (g.rows() != m || g.cols() != n) {
    throw DomainError("constraint matrix dimensions do not match");
  }
  IpmResult result;
  result.z = z0;
  Eigen::VectorXd s = h - g * z0;
  if (m > 0 && s.minCoeff() <= 0.0) {
    throw DomainError("interior-point start is not strictly feasible");
  }
  if (m == 0) {
    // Unconstrained problems are not produced by callers in this library.
    result.value = f.Value(z0);
    result.converged = n == 0;
    result.message = n == 0 ? "empty problem" : "no constraints";
    return result;
  }
  Eigen::VectorXd lambda = s.cwiseInverse();
  Eigen::VectorXd z = z0;
  Eigen::VectorXd grad = f.Gradient(z);
  const double m_d = static_cast<double>(m);

  for (int iter = 0; iter < options.max_iter; ++iter) {
    double eta = s.dot(lambda);
    Eigen::VectorXd dual = grad + g.transpose() * lambda;
    double dual_norm = dual.lpNorm<Eigen::Infinity>();
    double scale = std::max(1.0, grad.lpNorm<Eigen::Infinity>());
    result.iterations = iter;
    result.gap = eta;
    result.dual_residual = dual_norm;
    double gap_target =
        std::max(options.gap_tol, options.gap_rel_tol * std::fabs(f.Value(z)));
    if (eta <= gap_target && dual_norm <= options.residual_tol * scale) {
      result.converged = true;
      break;
    }
    double t = options.mu * m_d / eta;

    // Newton system reduced to z: (H + G' D G) dz = -(grad + G' (1/(t s))).
    Eigen::VectorXd d = (lambda.array() / s.array()).matrix();
    SparseRowMatrix gd = d.asDiagonal() * g;
    Eigen::MatrixXd kkt = Eigen::MatrixXd(g.transpose() * gd);
    f.AddHessian(z, &kkt);
    Eigen::VectorXd rhs =
        -(grad + g.transpose() * (t * s.array()).inverse().matrix());
    double diag_scale = std::max(1.0, kkt.diagonal().cwiseAbs().maxCoeff());
    Eigen::LLT<Eigen::MatrixXd> llt;
    double reg = 0.0;
    for (int attempt = 0; attempt < 8; ++attempt) {
      Eigen::MatrixXd k = kkt;
      if (reg > 0.0) k.diagonal().array() += reg;
      llt.compute(k);
      if (llt.info() == Eigen::Success) break;
      reg = reg == 0.0 ? 1e-14 * diag_scale : reg * 100.0;
    }
    if (llt.info() != Eigen::Success) {
      result.message = "Newton system not positive definite";
      break;
    }
    Eigen::VectorXd dz = llt.solve(rhs);
    Eigen::VectorXd gdz = g * dz;
    Eigen::VectorXd dlambda =
        (d.array() * gdz.array() - lambda.array() +
         (t * s.array()).inverse())
            .matrix();

    double step = 1.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (dlambda[i] < 0.0) step = std::min(step, -lambda[i] / dlambda[i]);
    }
    step *= 0.99;
    Residual r0 = ComputeResidual(grad, g, s, lambda, t);
    double r0_norm = r0.Norm();
    // Keep the primal strictly feasible.
    Eigen::VectorXd s_new;
    for (int k = 0; k < 100; ++k) {
      s_new = s - step * gdz;
      if (s_new.minCoeff() > 0.0) break;
      step *= 0.5;
    }
    Eigen::VectorXd z_new, lambda_new, grad_new;
    bool accepted = false;
    for (int k = 0; k < 60; ++k) {
      z_new = z + step * dz;
      lambda_new = lambda + step * dlambda;
      s_new = h - g * z_new;
      if (s_new.minCoeff() > 0.0) {
        grad_new = f.Gradient(z_new);
        Residual r1 = ComputeResidual(grad_new, g, s_new, lambda_new, t);
        if (r1.Norm() <= (1.0 - 0.01 * step) * r0_norm) {
          accepted = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted || step < 1e-12) {
      if (accepted) {
        z = std::move(z_new);
        lambda = std::move(lambda_new);
        s = std::move(s_new);
        grad = std::move(grad_new);
      }
      // Residual is at the floating-point floor; keep the best iterate.
      result.message = "line search stalled";
      break;
    }
    z = std::move(z_new);
    lambda = std::move(lambda_new);
    s = std::move(s_new);
    grad = std::move(grad_new);
    result.iterations = iter + 1;
  }
  result.z = z;
  result.lambda = lambda;
  result.value = f.Value(z);
  result.gap = s.dot(lambda);
  result.dual_residual = (grad + g.transpose() * lambda).lpNorm<Eigen::Infinity>();
  if (!result.converged && result.message.empty()) {
    result.message = "iteration limit reached";
  }
  bool loose = result.gap <= 1e-7 &&
               result.dual_residual <= 1e-6 * std::max(1.0, std::fabs(result.value));
  if (!result.converged && !loose) {
    IpmResult b = MinimizeBarrier(f, g, h, result.z, options);
    b.iterations += result.iterations;
    return b;
  }
  return result;
}

}  // namespace vnm
