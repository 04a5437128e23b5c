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

#include "vnm/mle/mle.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "vnm/bounds/info_matrix.h"
#include "vnm/core/errors.h"

namespace vnm {
namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using Triplet = Eigen::Triplet<double>;

// Treat a restricted row as constant when its coefficients vanish.
constexpr double kZeroRowTol = 1e-12;
// Strict-separation margin below which separation is not declared.
constexpr double kSeparationTol = 1e-9;

double Softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double Sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

// Rows of G x <= h, each scaled to unit max-abs coefficient.
class RowBuilder {
 public:
  explicit RowBuilder(int cols) : cols_(cols) {}
  void Add(const std::vector<std::pair<int, double>>& coefs, double rhs) {
    double scale = 0.0;
    for (const auto& [c, v] : coefs) scale = std::max(scale, std::fabs(v));
    if (scale == 0.0) return;
    for (const auto& [c, v] : coefs) {
      if (v != 0.0) trips_.emplace_back(rows_, c, v / scale);
    }
    rhs_.push_back(rhs / scale);
    ++rows_;
  }
  SparseRowMatrix Matrix() const {
    SparseRowMatrix g(rows_, cols_);
    g.setFromTriplets(trips_.begin(), trips_.end());
    return g;
  }
  VectorXd Rhs() const {
    return Eigen::Map<const VectorXd>(rhs_.data(), static_cast<Index>(rhs_.size()));
  }

 private:
  int cols_;
  int rows_ = 0;
  std::vector<Triplet> trips_;
  std::vector<double> rhs_;
};

struct LinearSystem {
  SparseRowMatrix g;
  VectorXd h;
};

// Shape constraints on x = theta_{2:N} in normalized payoff units t = y/b_bar.
// The last coordinate of x is gamma.
LinearSystem ShapeConstraints(const std::vector<double>& t, Structure level,
                              double lip_t, bool with_cap, double cbar,
                              double box) {
  const int n_grid = static_cast<int>(t.size());
  const int nx = n_grid - 1;
  RowBuilder rb(nx);
  // slope_j = (theta[j+1] - theta[j]) / h_j, theta[0] = 0 is dropped.
  auto slope = [&](int j, double sign, std::vector<std::pair<int, double>>* out) {
    double inv_h = 1.0 / (t[j + 1] - t[j]);
    out->emplace_back(j, sign * inv_h);
    if (j >= 1) out->emplace_back(j - 1, -sign * inv_h);
  };
  auto merge = [](std::vector<std::pair<int, double>> v) {
    std::sort(v.begin(), v.end());
    std::vector<std::pair<int, double>> out;
    for (const auto& e : v) {
      if (!out.empty() && out.back().first == e.first) {
        out.back().second += e.second;
      } else {
        out.push_back(e);
      }
    }
    return out;
  };
  const int gamma = nx - 1;
  const bool concave =
      level == Structure::kFull || level == Structure::kNoLipschitz;
  if (concave) {
    for (int j = 0; j + 2 < n_grid; ++j) {
      std::vector<std::pair<int, double>> row;
      slope(j + 1, 1.0, &row);
      slope(j, -1.0, &row);
      rb.Add(merge(row), 0.0);
    }
    std::vector<std::pair<int, double>> mono;
    slope(n_grid - 2, -1.0, &mono);
    rb.Add(mono, 0.0);
  }
  if (level == Structure::kFull) {
    std::vector<std::pair<int, double>> row;
    slope(0, 1.0, &row);
    row.emplace_back(gamma, -lip_t);
    rb.Add(merge(row), 0.0);
  }
  if (level == Structure::kMonotoneOnly) {
    for (int j = 0; j + 1 < n_grid; ++j) {
      std::vector<std::pair<int, double>> row;
      slope(j, -1.0, &row);
      rb.Add(row, 0.0);
    }
  }
  if (level == Structure::kNone) {
    for (int i = 0; i < gamma; ++i) {
      rb.Add({{i, 1.0}}, box);
      rb.Add({{i, -1.0}}, box);
    }
    rb.Add({{gamma, -1.0}}, 0.0);
  }
  if (with_cap) rb.Add({{gamma, 1.0}}, cbar);
  return {rb.Matrix(), rb.Rhs()};
}

// x = e z + e0.
struct Parametrization {
  SparseRowMatrix e;
  VectorXd e0;
  VectorXd z0;  // strictly feasible start
  LinearSystem restricted;
  bool empty = false;  // no feasible x at all
};

LinearSystem Restrict(const LinearSystem& s, const Parametrization& p) {
  SparseRowMatrix gz = s.g * p.e;
  VectorXd hz = s.h - s.g * p.e0;
  RowBuilder rb(static_cast<int>(p.e.cols()));
  for (Index r = 0; r < gz.rows(); ++r) {
    std::vector<std::pair<int, double>> coefs;
    double mx = 0.0;
    for (SparseRowMatrix::InnerIterator it(gz, r); it; ++it) {
      coefs.emplace_back(static_cast<int>(it.col()), it.value());
      mx = std::max(mx, std::fabs(it.value()));
    }
    if (mx <= kZeroRowTol) {
      if (hz[r] < -1e-9) throw DomainError("shape constraints are infeasible");
      continue;
    }
    rb.Add(coefs, hz[r]);
  }
  return {rb.Matrix(), rb.Rhs()};
}

enum class Mode { kFreeGamma, kFixedGamma };

// Values g * u0(t) with u0 strictly concave, increasing, u0(0)=0, u0(1)=1 and
// initial slope below lip_t.
VectorXd InteriorShape(const std::vector<double>& t, double eps, double g) {
  VectorXd x(static_cast<Index>(t.size()) - 1);
  for (size_t j = 1; j < t.size(); ++j) {
    x[static_cast<Index>(j) - 1] = g * (t[j] + eps * (t[j] - t[j] * t[j]));
  }
  return x;
}

SparseRowMatrix Identity(int rows, int cols) {
  SparseRowMatrix e(rows, cols);
  std::vector<Triplet> trips;
  for (int i = 0; i < std::min(rows, cols); ++i) trips.emplace_back(i, i, 1.0);
  e.setFromTriplets(trips.begin(), trips.end());
  return e;
}

Parametrization MakeParametrization(const std::vector<double>& t,
                                    const StructureParams& sp, Mode mode,
                                    double gamma_fixed, double box) {
  const int nx = static_cast<int>(t.size()) - 1;
  const double lip_t = sp.lipschitz;  // already in normalized units
  Parametrization p;
  const bool free = mode == Mode::kFreeGamma;
  LinearSystem shape =
      ShapeConstraints(t, sp.level, lip_t, free, sp.cbar, box);
  double eps = 0.5;
  if (sp.level == Structure::kFull) {
    if (lip_t < 1.0 - 1e-12) {
      // Only the zero function has an admissible slope.
      p.empty = !free;
      p.e = SparseRowMatrix(nx, 0);
      p.e0 = VectorXd::Zero(nx);
      p.z0 = VectorXd(0);
      if (!p.empty) p.restricted = Restrict(shape, p);
      return p;
    }
    if (lip_t <= 1.0 + 1e-12) {
      // Only the linear utility remains.
      VectorXd lin(nx);
      for (int j = 0; j < nx; ++j) lin[j] = t[j + 1];
      if (free) {
        p.e = lin.sparseView();
        p.e0 = VectorXd::Zero(nx);
        p.z0 = VectorXd::Constant(1, sp.cbar / 2.0);
      } else {
        p.e = SparseRowMatrix(nx, 0);
        p.e0 = gamma_fixed * lin;
        p.z0 = VectorXd(0);
      }
      p.restricted = Restrict(shape, p);
      return p;
    }
    eps = std::min(0.5, (lip_t - 1.0) / 2.0);
  }
  if (free) {
    p.e = Identity(nx, nx);
    p.e0 = VectorXd::Zero(nx);
    p.z0 = InteriorShape(t, eps, sp.cbar / 2.0);
  } else {
    p.e = Identity(nx, nx - 1);
    p.e0 = VectorXd::Zero(nx);
    p.e0[nx - 1] = gamma_fixed;
    p.z0 = InteriorShape(t, eps, gamma_fixed).head(nx - 1);
  }
  p.restricted = Restrict(shape, p);
  return p;
}

// sum_k softplus(a_k . z + offset_k).
class LogisticObjective : public ConvexObjective {
 public:
  LogisticObjective(SparseRowMatrix a, VectorXd offset)
      : a_(std::move(a)), offset_(std::move(offset)) {}
  double Value(const VectorXd& z) const override {
    VectorXd m = Margins(z);
    double total = 0.0;
    for (Index k = 0; k < m.size(); ++k) total += Softplus(m[k]);
    return total;
  }
  VectorXd Gradient(const VectorXd& z) const override {
    VectorXd m = Margins(z);
    for (Index k = 0; k < m.size(); ++k) m[k] = Sigmoid(m[k]);
    return a_.transpose() * m;
  }
  void AddHessian(const VectorXd& z, MatrixXd* h) const override {
    VectorXd w = Margins(z);
    for (Index k = 0; k < w.size(); ++k) {
      double s = Sigmoid(w[k]);
      w[k] = s * (1.0 - s);
    }
    SparseRowMatrix wa = w.asDiagonal() * a_;
    *h += MatrixXd(a_.transpose() * wa);
  }

 private:
  VectorXd Margins(const VectorXd& z) const { return a_ * z + offset_; }
  SparseRowMatrix a_;
  VectorXd offset_;
};

std::vector<double> NormalizedPayoffs(const BreakpointGrid& grid) {
  std::vector<double> t(grid.size());
  for (int j = 0; j < grid.size(); ++j) t[j] = grid[j] / grid.b_bar();
  t.back() = 1.0;
  return t;
}

// Structure params with the Lipschitz modulus in normalized payoff units.
StructureParams Normalized(const StructureParams& sp, double b_bar) {
  StructureParams out = sp;
  out.lipschitz = sp.lipschitz * b_bar;
  return out;
}

// Drops the theta_1 column.
SparseRowMatrix ReducedRows(const SparseRowMatrix& rows) {
  const Index n = rows.cols();
  SparseRowMatrix sel(n, n - 1);
  std::vector<Triplet> trips;
  for (Index j = 1; j < n; ++j) trips.emplace_back(j, j - 1, 1.0);
  sel.setFromTriplets(trips.begin(), trips.end());
  return rows * sel;
}

bool AcceptIpm(const IpmResult& r) {
  if (r.converged) return true;
  // Residual floor reached; accept if within a loose tolerance.
  return r.gap <= 1e-7 && r.dual_residual <= 1e-6 * std::max(1.0, r.value);
}

struct InnerSolve {
  VectorXd theta;  // full length N
  double objective = 0.0;
  int iterations = 0;
  double gap = 0.0;
  double dual_residual = 0.0;
  std::string message;
};

InnerSolve SolveInner(const SparseRowMatrix& rows_x,
                      const Parametrization& p, const IpmOptions& ipm) {
  InnerSolve out;
  const Index nx = p.e.rows();
  VectorXd x;
  SparseRowMatrix a = rows_x * p.e;
  VectorXd offset = rows_x * p.e0;
  LogisticObjective f(a, offset);
  if (p.e.cols() == 0) {
    x = p.e0;
    out.message = "no free variables";
  } else {
    IpmResult r = MinimizeIpm(f, p.restricted.g, p.restricted.h, p.z0, ipm);
    if (!AcceptIpm(r)) {
      throw SolverError("likelihood solver failed: " + r.message +
                        " (gap " + std::to_string(r.gap) + ", residual " +
                        std::to_string(r.dual_residual) + ")");
    }
    x = p.e * r.z + p.e0;
    out.iterations = r.iterations;
    out.gap = r.gap;
    out.dual_residual = r.dual_residual;
    out.message = r.converged ? "converged" : r.message;
  }
  out.theta = VectorXd::Zero(nx + 1);
  out.theta.tail(nx) = x;
  return out;
}

}  // namespace

namespace {

// True when some admissible normalized utility strictly prefers every chosen
// lottery: then the likelihood increases along that direction up to gamma =
// cbar. Solved as min tau s.t. margin_k(alpha) + tau >= 0, alpha admissible.
bool DetectSeparation(const SparseRowMatrix& rows_x,
                      const std::vector<double>& t,
                      const StructureParams& sp_t, double box_rel,
                      const IpmOptions& ipm) {
  Parametrization p;
  try {
    p = MakeParametrization(t, sp_t, Mode::kFixedGamma, 1.0, box_rel);
  } catch (const DomainError&) {
    return false;
  }
  if (p.empty) return false;
  const Index n = p.e.cols();
  const Index k = rows_x.rows();
  SparseRowMatrix a = rows_x * p.e;     // -margin coefficients
  VectorXd offset = rows_x * p.e0;      // -margin offset
  VectorXd margins0 = -(a * p.z0 + offset);
  if (n == 0) {
    return margins0.size() > 0 && margins0.minCoeff() > kSeparationTol;
  }
  const LinearSystem& s = p.restricted;
  std::vector<Triplet> trips;
  for (Index r = 0; r < s.g.rows(); ++r) {
    for (SparseRowMatrix::InnerIterator it(s.g, r); it; ++it) {
      trips.emplace_back(r, it.col(), it.value());
    }
  }
  Index row = s.g.rows();
  VectorXd h(s.g.rows() + k + 2);
  h.head(s.g.rows()) = s.h;
  for (Index i = 0; i < k; ++i, ++row) {
    for (SparseRowMatrix::InnerIterator it(a, i); it; ++it) {
      trips.emplace_back(row, it.col(), it.value());
    }
    trips.emplace_back(row, n, -1.0);
    h[row] = -offset[i];
  }
  trips.emplace_back(row, n, 1.0);
  h[row++] = 4.0;
  trips.emplace_back(row, n, -1.0);
  h[row++] = 3.0;
  SparseRowMatrix g(row, n + 1);
  g.setFromTriplets(trips.begin(), trips.end());
  VectorXd z0(n + 1);
  z0.head(n) = p.z0;
  z0[n] = std::min(3.5, std::max(-2.5, (-margins0).maxCoeff() + 1.0));
  VectorXd c = VectorXd::Zero(n + 1);
  c[n] = 1.0;
  IpmResult r = MinimizeIpm(LinearObjective(c), g, h, z0, ipm);
  if (!AcceptIpm(r)) return false;
  return r.z[n] < -kSeparationTol;
}

struct Cleaned {
  PiecewiseUtility utility;
  double adjustment;
};

// Projects alpha = theta / gamma onto the promised shape and renormalizes.
Cleaned CleanUp(const VectorXd& theta, double gamma, const BreakpointGrid& grid,
                const StructureParams& sp) {
  const int n = grid.size();
  const std::vector<double> t = NormalizedPayoffs(grid);
  std::vector<double> alpha(n);
  for (int j = 0; j < n; ++j) alpha[j] = theta[j] / gamma;
  alpha[0] = 0.0;
  if (sp.level == Structure::kNone) {
    alpha[n - 1] = 1.0;
    return {PiecewiseUtility::FromValues(grid, alpha, true, Structure::kNone),
            0.0};
  }
  const double lip_t = sp.lipschitz * grid.b_bar();
  const bool concave =
      sp.level == Structure::kFull || sp.level == Structure::kNoLipschitz;
  std::vector<double> beta(n - 1), h(n - 1);
  for (int j = 0; j + 1 < n; ++j) {
    h[j] = t[j + 1] - t[j];
    beta[j] = (alpha[j + 1] - alpha[j]) / h[j];
  }
  const std::vector<double> raw = beta;
  auto project = [&](std::vector<double>& b, double lip) {
    if (sp.level == Structure::kFull) b[0] = std::min(b[0], lip);
    if (concave) {
      for (int j = 1; j + 1 < n; ++j) b[j] = std::min(b[j], b[j - 1]);
    }
    for (double& v : b) v = std::max(v, 0.0);
  };
  project(beta, lip_t);
  double adjustment = 0.0, scale = 0.0;
  for (int j = 0; j + 1 < n; ++j) {
    adjustment = std::max(adjustment, std::fabs(beta[j] - raw[j]));
    scale = std::max(scale, std::fabs(raw[j]));
  }
  std::vector<double> cum(n, 0.0);
  for (int j = 0; j + 1 < n; ++j) cum[j + 1] = cum[j] + beta[j] * h[j];
  const double total = cum[n - 1];
  if (!(total > 0.0)) throw SolverError("estimated utility is identically 0");
  std::vector<double> beta_pu(n - 1);
  for (int j = 0; j + 1 < n; ++j) {
    beta_pu[j] = beta[j] / (total * grid.b_bar());
  }
  project(beta_pu, sp.lipschitz);
  std::vector<double> a(n);
  for (int j = 0; j < n; ++j) a[j] = cum[j] / total;
  a[0] = 0.0;
  a[n - 1] = 1.0;
  return {PiecewiseUtility::Create(grid, std::move(a), std::move(beta_pu), true,
                                   sp.level, sp.lipschitz),
          scale > 0.0 ? adjustment / scale : adjustment};
}

}  // namespace

std::string MleStatusName(MleStatus s) {
  switch (s) {
    case MleStatus::kUnique: return "Unique";
    case MleStatus::kNonUniqueRankDeficient: return "NonUniqueRankDeficient";
    case MleStatus::kNotRationalizable: return "NotRationalizable";
    case MleStatus::kSeparationAtBound: return "SeparationAtBound";
  }
  return "NotRationalizable";
}

MleStatus ParseMleStatus(const std::string& name) {
  for (MleStatus s : {MleStatus::kUnique, MleStatus::kNonUniqueRankDeficient,
                      MleStatus::kNotRationalizable,
                      MleStatus::kSeparationAtBound}) {
    if (MleStatusName(s) == name) return s;
  }
  throw DomainError("unknown MLE status '" + name + "'");
}

MleProblem MakeMleProblem(const Dataset& dataset, const BreakpointGrid& grid,
                          const StructureParams& structure,
                          const MleOptions& options) {
  structure.Validate();
  const Index n = grid.size();
  std::vector<Triplet> trips;
  for (size_t k = 0; k < dataset.size(); ++k) {
    dataset[k].w.CheckRange(grid.b_bar());
    dataset[k].y.CheckRange(grid.b_bar());
    VectorXd p = MassDiff(dataset[k].w, dataset[k].y, grid);
    for (Index j = 0; j < n; ++j) {
      if (p[j] != 0.0) {
        trips.emplace_back(static_cast<Index>(k), j, -dataset[k].z * p[j]);
      }
    }
  }
  SparseRowMatrix rows(static_cast<Index>(dataset.size()), n);
  rows.setFromTriplets(trips.begin(), trips.end());
  return {grid, std::move(rows), structure, options};
}

double LogLikelihood(const VectorXd& theta, const SparseRowMatrix& rows) {
  if (theta.size() != rows.cols() && rows.rows() > 0) {
    throw DomainError("theta length does not match the grid");
  }
  if (rows.rows() == 0) return 0.0;
  VectorXd m = rows * theta;
  double total = 0.0;
  for (Index k = 0; k < m.size(); ++k) total -= Softplus(m[k]);
  return total;
}

VectorXd LogLikelihoodGradient(const VectorXd& theta,
                               const SparseRowMatrix& rows) {
  if (rows.rows() == 0) return VectorXd::Zero(theta.size());
  if (theta.size() != rows.cols()) {
    throw DomainError("theta length does not match the grid");
  }
  VectorXd m = rows * theta;
  for (Index k = 0; k < m.size(); ++k) m[k] = -Sigmoid(m[k]);
  return rows.transpose() * m;
}

std::vector<double> MleSolution::ThetaHat() const {
  if (!utility) return alpha_bar;
  std::vector<double> theta(utility->alpha());
  for (double& v : theta) v *= gamma_star;
  return theta;
}

MleSolution SolveMle(const MleProblem& problem) {
  const BreakpointGrid& grid = problem.grid;
  const StructureParams& sp = problem.structure;
  const MleOptions& opt = problem.options;
  sp.Validate();
  const int n = grid.size();
  if (problem.rows.cols() != n) {
    throw DomainError("problem rows do not match the grid");
  }
  if (problem.rows.rows() < 1) {
    throw DomainError("maximum likelihood needs at least one record");
  }
  const std::vector<double> t = NormalizedPayoffs(grid);
  const StructureParams sp_t = Normalized(sp, grid.b_bar());
  const SparseRowMatrix rows_x = ReducedRows(problem.rows);

  MleSolution sol{grid, sp};
  MleDiagnostics& diag = sol.diagnostics;
  InfoMatrix info = ComputeInfoMatrix(MatrixXd(rows_x));
  diag.k = static_cast<int>(problem.rows.rows());
  diag.rank = info.rank;
  diag.lambda_min = info.lambda_min;
  diag.eigenvalues = info.eigenvalues;
  diag.gamma_zero_tol = opt.gamma_zero_rel_tol * sp.cbar;
  const double box = opt.none_box_rel * sp.cbar;

  InnerSolve inner;
  if (opt.fixed_sigma) {
    double sigma = *opt.fixed_sigma;
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
      throw DomainError("fixed sigma must be positive");
    }
    diag.sigma_fixed = true;
    Parametrization p = MakeParametrization(t, sp_t, Mode::kFixedGamma,
                                            1.0 / sigma, box);
    if (p.empty) throw DomainError("no admissible utility for the structure");
    inner = SolveInner(rows_x, p, opt.ipm);
    inner.theta[n - 1] = 1.0 / sigma;
  } else {
    if (opt.detect_separation) {
      diag.separation_detected =
          DetectSeparation(rows_x, t, sp_t, opt.none_box_rel, opt.ipm);
    }
    if (diag.separation_detected) {
      Parametrization p =
          MakeParametrization(t, sp_t, Mode::kFixedGamma, sp.cbar, box);
      inner = SolveInner(rows_x, p, opt.ipm);
      inner.theta[n - 1] = sp.cbar;
    } else {
      Parametrization p =
          MakeParametrization(t, sp_t, Mode::kFreeGamma, 0.0, box);
      inner = SolveInner(rows_x, p, opt.ipm);
    }
  }
  diag.iterations = inner.iterations;
  diag.gap = inner.gap;
  diag.dual_residual = inner.dual_residual;
  diag.solver_message = inner.message;
  if (sp.level == Structure::kNone) {
    for (int j = 1; j + 1 < n; ++j) {
      if (std::fabs(inner.theta[j]) >= 0.99 * box) diag.box_active = true;
    }
  }

  sol.alpha_bar.assign(inner.theta.data(), inner.theta.data() + n);
  sol.gamma_star = inner.theta[n - 1];
  sol.loglik = LogLikelihood(inner.theta, problem.rows);
  // theta = 0 attains -K ln 2. When the optimum is no better, gamma = 0 is an
  // optimal solution and is the one reported.
  const double k_d = static_cast<double>(problem.rows.rows());
  const double at_zero = -k_d * std::log(2.0);
  if (!diag.sigma_fixed && !diag.separation_detected &&
      sol.loglik <= at_zero + 1e-9 * k_d) {
    std::fill(sol.alpha_bar.begin(), sol.alpha_bar.end(), 0.0);
    sol.gamma_star = 0.0;
    sol.loglik = at_zero;
  }
  const bool positive = diag.sigma_fixed || sol.gamma_star > diag.gamma_zero_tol;
  if (!positive) {
    sol.status = MleStatus::kNotRationalizable;
    return sol;
  }
  Cleaned c = CleanUp(inner.theta, sol.gamma_star, grid, sp);
  sol.utility = std::move(c.utility);
  diag.cleanup_adjustment = c.adjustment;
  sol.sigma_hat = 1.0 / sol.gamma_star;
  if (!diag.sigma_fixed &&
      (diag.separation_detected ||
       sol.gamma_star >= sp.cbar * (1.0 - opt.gamma_zero_rel_tol))) {
    sol.status = MleStatus::kSeparationAtBound;
  } else if (info.rank == n - 1) {
    sol.status = MleStatus::kUnique;
  } else {
    sol.status = MleStatus::kNonUniqueRankDeficient;
  }
  return sol;
}

RationalizabilityResult CheckRationalizability(
    const Dataset& dataset, const BreakpointGrid& grid,
    const StructureParams& structure) {
  structure.Validate();
  if (structure.level == Structure::kNone) {
    throw DomainError(
        "rationalizability test requires a monotone structure level");
  }
  const int n = grid.size();
  RationalizabilityResult out;
  VectorXd p_bar = VectorXd::Zero(n);
  for (const ComparisonRecord& r : dataset) {
    p_bar += r.z * MassDiff(r.w, r.y, grid);
  }
  out.p_bar.assign(p_bar.data(), p_bar.data() + n);
  // alpha_1 = 0, so only the components from y_2 on matter.
  if (p_bar.tail(n - 1).maxCoeff() <= 0.0) {
    out.verdict = Rationalizability::kGammaZero;
    out.by_sufficient_condition = true;
    return out;
  }
  const std::vector<double> t = NormalizedPayoffs(grid);
  Parametrization p = MakeParametrization(
      t, Normalized(structure, grid.b_bar()), Mode::kFixedGamma, 1.0, 0.0);
  if (p.empty) {
    // No admissible normalized utility: only gamma = 0 is feasible.
    out.verdict = Rationalizability::kGammaZero;
    return out;
  }
  VectorXd p_x = p_bar.tail(n - 1);
  VectorXd x;
  if (p.e.cols() == 0) {
    x = p.e0;
  } else {
    VectorXd c = -(p.e.transpose() * p_x);
    IpmResult r = MinimizeIpm(LinearObjective(c), p.restricted.g,
                              p.restricted.h, p.z0);
    if (!AcceptIpm(r)) {
      throw SolverError("rationalizability LP failed: " + r.message);
    }
    x = p.e * r.z + p.e0;
  }
  out.lp_value = p_x.dot(x);
  out.certificate.assign(n, 0.0);
  for (int j = 1; j < n; ++j) out.certificate[j] = x[j - 1];
  const double tol = 1e-9 * std::max(1.0, p_bar.lpNorm<1>());
  out.verdict = out.lp_value > tol ? Rationalizability::kGammaPositive
                                   : Rationalizability::kGammaZero;
  return out;
}

double OptimalSetBand::Upper(double y) const {
  const BreakpointGrid& grid = lower_.grid();
  const auto& a = lower_.alpha();
  const auto& b = lower_.beta();
  const int n = grid.size();
  if (!(y >= 0.0 && y <= grid.b_bar())) {
    throw DomainError("band argument outside [0, b_bar]");
  }
  const int j = grid.Segment(y);
  if (y == grid[j]) return a[j];
  if (y == grid[j + 1]) return a[j + 1];
  double up = a[j + 1];  // monotone
  if (j >= 1) up = std::min(up, a[j] + b[j - 1] * (y - grid[j]));
  if (j + 2 < n) up = std::min(up, a[j + 1] + b[j + 1] * (y - grid[j + 1]));
  if (level_ == Structure::kFull) {
    up = std::min(up, a[j] + lipschitz_ * (y - grid[j]));
  }
  return up;
}

std::vector<std::pair<double, double>> OptimalSetBand::UpperPolyline() const {
  const BreakpointGrid& grid = lower_.grid();
  const auto& a = lower_.alpha();
  const auto& b = lower_.beta();
  const int n = grid.size();
  std::vector<std::pair<double, double>> out;
  for (int j = 0; j + 1 < n; ++j) {
    // Lines (intercept at y_j, slope) bounding the segment from above.
    std::vector<std::pair<double, double>> lines = {{a[j + 1], 0.0}};
    if (j >= 1) lines.emplace_back(a[j], b[j - 1]);
    if (j + 2 < n) {
      lines.emplace_back(a[j + 1] - b[j + 1] * (grid[j + 1] - grid[j]),
                         b[j + 1]);
    }
    if (level_ == Structure::kFull) lines.emplace_back(a[j], lipschitz_);
    std::vector<double> xs = {grid[j]};
    for (size_t p = 0; p < lines.size(); ++p) {
      for (size_t q = p + 1; q < lines.size(); ++q) {
        double ds = lines[p].second - lines[q].second;
        if (ds == 0.0) continue;
        double x = grid[j] + (lines[q].first - lines[p].first) / ds;
        if (x > grid[j] && x < grid[j + 1]) xs.push_back(x);
      }
    }
    std::sort(xs.begin(), xs.end());
    for (double x : xs) out.emplace_back(x, Upper(x));
  }
  out.emplace_back(grid.b_bar(), a[n - 1]);
  return out;
}

OptimalSetBand ComputeOptimalSetBand(const MleSolution& solution) {
  if (solution.status != MleStatus::kUnique || !solution.utility) {
    throw StateError("optimal-set band requires a unique estimate, status is " +
                     MleStatusName(solution.status));
  }
  Structure level = solution.structure.level;
  if (level != Structure::kFull && level != Structure::kNoLipschitz) {
    throw StateError("optimal-set band requires a concave structure level");
  }
  return OptimalSetBand(*solution.utility, level, solution.structure.lipschitz);
}

}  // namespace vnm
