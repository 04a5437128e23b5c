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
#include "vnm/decide/decide.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "vnm/core/errors.h"
#include "vnm/optim/ipm.h"
#include "vnm/simulate/simulate.h"

namespace vnm {
namespace {

constexpr double kWealthTol = 1e-9;

// Extremes of sum_s x_s d_s over 0 <= x_s <= cap_s, sum x_s <= budget.
std::pair<double, double> KnapsackRange(std::vector<std::pair<double, double>> dc,
                                        double budget) {
  std::sort(dc.begin(), dc.end());
  double lo = 0.0, left = budget;
  for (const auto& [d, cap] : dc) {
    if (d >= 0.0 || left <= 0.0) break;
    double take = std::min(cap, left);
    lo += take * d;
    left -= take;
  }
  double hi = 0.0;
  left = budget;
  for (auto it = dc.rbegin(); it != dc.rend(); ++it) {
    if (it->first <= 0.0 || left <= 0.0) break;
    double take = std::min(it->second, left);
    hi += take * it->first;
    left -= take;
  }
  return {lo, hi};
}

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    auto b = cell.find_first_not_of(" \t\r");
    auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

}  // namespace

double Par(const PiecewiseUtility& u, const Lottery& x, double delta,
           double sigma) {
  return u.Expected(x) + GumbelQuantile(delta, sigma);
}

UtilityFamily UtilityFamily::OptimalSet(PiecewiseUtility estimate) {
  if (!estimate.IsConcave(1e-12) || !estimate.IsMonotone(1e-12)) {
    throw DomainError("optimal-set family needs a monotone concave estimate");
  }
  return {Kind::kOptimalSet, {std::move(estimate)}};
}

UtilityFamily UtilityFamily::Singleton(PiecewiseUtility u) {
  return {Kind::kSingleton, {std::move(u)}};
}

UtilityFamily UtilityFamily::Finite(std::vector<PiecewiseUtility> us) {
  if (us.empty()) throw DomainError("finite utility family is empty");
  return {Kind::kFinite, std::move(us)};
}

std::string UtilityFamilyKindName(UtilityFamily::Kind k) {
  switch (k) {
    case UtilityFamily::Kind::kOptimalSet:
      return "optimal_set";
    case UtilityFamily::Kind::kSingleton:
      return "singleton";
    case UtilityFamily::Kind::kFinite:
      return "finite";
  }
  return "";
}

UtilityFamily::Kind ParseUtilityFamilyKind(const std::string& name) {
  if (name == "optimal_set") return UtilityFamily::Kind::kOptimalSet;
  if (name == "singleton") return UtilityFamily::Kind::kSingleton;
  if (name == "finite") return UtilityFamily::Kind::kFinite;
  throw DomainError("unsupported utility family '" + name + "'");
}

double Prar(const UtilityFamily& family, const Lottery& x, double delta,
            double sigma) {
  if (family.members.empty()) throw DomainError("utility family is empty");
  if (family.kind != UtilityFamily::Kind::kFinite &&
      family.members.size() != 1) {
    throw DomainError("optimal-set and singleton families carry one utility");
  }
  // For the optimal set every member lies above the estimate, which is
  // itself a member, so the minimum is attained there.
  double worst = std::numeric_limits<double>::infinity();
  for (const PiecewiseUtility& u : family.members) {
    worst = std::min(worst, Par(u, x, delta, sigma));
  }
  return worst;
}

void PortfolioProblem::Validate() const {
  const int s = assets();
  if (scenarios.rows() < 1 || scenarios.cols() < 1) {
    throw DomainError("portfolio needs at least one scenario and asset 0");
  }
  if (!scenarios.allFinite()) throw DomainError("scenario returns must be finite");
  if (!(budget > 0.0)) throw DomainError("budget must be positive");
  if (static_cast<int>(caps.size()) != s) {
    throw DomainError("expected " + std::to_string(s) + " caps, got " +
                      std::to_string(caps.size()));
  }
  for (double c : caps) {
    if (!(c >= 0.0 && c <= 1.0)) throw DomainError("caps must lie in [0, 1]");
  }
  if (!utility.IsConcave(1e-12)) {
    throw DomainError(
        "portfolio LP needs a concave utility (minimum-of-lines form)");
  }
  const double b_bar = utility.grid().b_bar();
  for (int t = 0; t < scenario_count(); ++t) {
    std::vector<std::pair<double, double>> dc;
    for (int a = 1; a <= s; ++a) {
      dc.emplace_back(scenarios(t, a) - scenarios(t, 0), caps[a - 1] * budget);
    }
    auto [lo, hi] = KnapsackRange(std::move(dc), budget);
    const double base = budget * (1.0 + scenarios(t, 0));
    if (base + lo < -kWealthTol * b_bar || base + hi > b_bar * (1 + kWealthTol)) {
      std::ostringstream msg;
      msg << "scenario " << t << " allows wealth in [" << base + lo << ", "
          << base + hi << "], outside the utility domain [0, " << b_bar << "]";
      throw DomainError(msg.str());
    }
  }
}

Eigen::VectorXd ScenarioWealth(const PortfolioProblem& p,
                               const Eigen::VectorXd& x) {
  if (x.size() != p.scenarios.cols()) {
    throw DomainError("allocation length must be S + 1");
  }
  Eigen::VectorXd w =
      (p.scenarios.array() + 1.0).matrix() * x;
  const double b_bar = p.utility.grid().b_bar();
  return w.cwiseMax(0.0).cwiseMin(b_bar);  // removes round-off only
}

double SaaExpectedUtility(const PortfolioProblem& p, const Eigen::VectorXd& x) {
  Eigen::VectorXd w = ScenarioWealth(p, x);
  double total = 0.0;
  for (Eigen::Index t = 0; t < w.size(); ++t) total += p.utility.Eval(w[t]);
  return total / static_cast<double>(w.size());
}

Lottery WealthLottery(const PortfolioProblem& p, const Eigen::VectorXd& x) {
  Eigen::VectorXd w = ScenarioWealth(p, x);
  std::vector<Outcome> out;
  for (Eigen::Index t = 0; t < w.size(); ++t) {
    out.push_back({w[t], 1.0 / static_cast<double>(w.size())});
  }
  return Lottery::Create(std::move(out));
}

PortfolioSolution OptimizePortfolio(const PortfolioProblem& problem) {
  problem.Validate();
  const int s = problem.assets();
  const int t_count = problem.scenario_count();
  const PiecewiseUtility& u = problem.utility;
  const int pieces = u.grid().size() - 1;
  const double w0 = problem.budget;

  // Decision variables: v = x_a / W0 for assets with a positive cap, then
  // zeta_t. Cash is W0 (1 - sum v).
  std::vector<int> free;
  for (int a = 1; a <= s; ++a) {
    if (problem.caps[a - 1] > 0.0) free.push_back(a);
  }
  const int nv = static_cast<int>(free.size());
  const int nz = nv + t_count;
  std::vector<Eigen::Triplet<double>> trip;
  std::vector<double> h;
  int row = 0;
  for (int t = 0; t < t_count; ++t) {
    const double base = w0 * (1.0 + problem.scenarios(t, 0));
    for (int j = 0; j < pieces; ++j) {
      // zeta_t <= alpha_j + beta_j (wealth - y_j).
      const double beta = u.beta()[j];
      trip.emplace_back(row, nv + t, 1.0);
      for (int i = 0; i < nv; ++i) {
        double d = problem.scenarios(t, free[i]) - problem.scenarios(t, 0);
        if (d != 0.0 && beta != 0.0) trip.emplace_back(row, i, -beta * w0 * d);
      }
      h.push_back(u.alpha()[j] + beta * (base - u.grid()[j]));
      ++row;
    }
  }
  for (int i = 0; i < nv; ++i) {
    trip.emplace_back(row++, i, -1.0);
    h.push_back(0.0);
    trip.emplace_back(row++, i, 1.0);
    h.push_back(problem.caps[free[i] - 1]);
  }
  if (nv > 0) {
    for (int i = 0; i < nv; ++i) trip.emplace_back(row, i, 1.0);
    h.push_back(1.0);
    ++row;
  }
  SparseRowMatrix g(row, nz);
  g.setFromTriplets(trip.begin(), trip.end());
  Eigen::VectorXd hv = Eigen::Map<Eigen::VectorXd>(h.data(), row);

  Eigen::VectorXd z0 = Eigen::VectorXd::Zero(nz);
  for (int i = 0; i < nv; ++i) {
    z0[i] = 0.5 * std::min(problem.caps[free[i] - 1], 1.0 / (nv + 1));
  }
  Eigen::VectorXd slack = hv - g * z0;
  for (int t = 0; t < t_count; ++t) {
    z0[nv + t] = slack.segment(t * pieces, pieces).minCoeff() - 1.0;
  }
  Eigen::VectorXd c = Eigen::VectorXd::Zero(nz);
  c.tail(t_count).setConstant(-1.0 / t_count);
  IpmOptions opt;
  opt.gap_tol = 1e-11;
  IpmResult r = MinimizeIpm(LinearObjective(c), g, hv, z0, opt);
  if (!r.converged && !(r.gap <= 1e-8)) {
    throw SolverError("portfolio LP failed: " + r.message);
  }
  PortfolioSolution sol;
  sol.iterations = r.iterations;
  sol.lp_value = -r.value;
  sol.x = Eigen::VectorXd::Zero(s + 1);
  double invested = 0.0;
  for (int i = 0; i < nv; ++i) {
    double v = std::clamp(r.z[i], 0.0, problem.caps[free[i] - 1]);
    sol.x[free[i]] = v;
    invested += v;
  }
  if (invested > 1.0) sol.x /= invested;
  sol.x[0] = std::max(0.0, 1.0 - std::min(invested, 1.0));
  sol.x *= w0;
  sol.objective = SaaExpectedUtility(problem, sol.x);
  return sol;
}

EquivalenceReport EquivalenceCheck(const PortfolioProblem& problem,
                                   const PortfolioSolution& solution,
                                   double delta, double sigma, double tol) {
  EquivalenceReport r;
  r.quantile = GumbelQuantile(delta, sigma);
  Lottery wealth = WealthLottery(problem, solution.x);
  r.eu_value = problem.utility.Expected(wealth);
  r.par_value = Par(problem.utility, wealth, delta, sigma);
  r.prar_value = Prar(UtilityFamily::OptimalSet(problem.utility), wealth,
                      delta, sigma);
  r.par_offset_error = std::fabs(r.par_value - r.eu_value - r.quantile);
  r.prar_offset_error = std::fabs(r.prar_value - r.eu_value - r.quantile);
  r.equivalent = r.par_offset_error <= tol && r.prar_offset_error <= tol &&
                 std::fabs(r.eu_value - solution.objective) <= tol;
  return r;
}

Eigen::MatrixXd ParseScenarioCsv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    header = SplitCsv(line);
    break;
  }
  if (header.empty()) throw DomainError("scenario CSV is empty");
  for (size_t a = 0; a < header.size(); ++a) {
    if (header[a] != "asset_" + std::to_string(a)) {
      throw DomainError("scenario CSV header must be asset_0,...,asset_S; got '" +
                        header[a] + "' in column " + std::to_string(a));
    }
  }
  std::vector<std::vector<double>> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto cells = SplitCsv(line);
    if (cells.size() != header.size()) {
      throw DomainError("scenario CSV line " + std::to_string(lineno) +
                        " has " + std::to_string(cells.size()) + " cells");
    }
    std::vector<double> r;
    for (const auto& c : cells) {
      size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(c, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != c.size() || !std::isfinite(v)) {
        throw DomainError("scenario CSV line " + std::to_string(lineno) +
                          ": '" + c + "' is not a decimal return");
      }
      r.push_back(v);
    }
    rows.push_back(std::move(r));
  }
  if (rows.empty()) throw DomainError("scenario CSV has no scenarios");
  Eigen::MatrixXd m(rows.size(), header.size());
  for (size_t t = 0; t < rows.size(); ++t) {
    for (size_t a = 0; a < header.size(); ++a) m(t, a) = rows[t][a];
  }
  return m;
}

Eigen::MatrixXd ReadScenarioCsv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DomainError("cannot open scenario file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return ParseScenarioCsv(ss.str());
}

}  // namespace vnm
