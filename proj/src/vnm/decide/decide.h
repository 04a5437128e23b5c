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
#ifndef VNM_DECIDE_DECIDE_H_
#define VNM_DECIDE_DECIDE_H_

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vnm/core/lottery.h"
#include "vnm/core/utility.h"

namespace vnm {

// Preference-at-risk: E[u(X)] + F^{-1}(delta) for Gumbel(0, sigma) noise.
double Par(const PiecewiseUtility& u, const Lottery& x, double delta,
           double sigma);

// Utility ambiguity sets accepted by Prar.
struct UtilityFamily {
  enum class Kind {
    // All shape-feasible utilities through the breakpoint values of
    // `members[0]` (the optimal set of a unique estimate). Its pointwise
    // minimum is members[0] itself.
    kOptimalSet,
    kSingleton,
    kFinite,
  };
  Kind kind = Kind::kSingleton;
  std::vector<PiecewiseUtility> members;

  static UtilityFamily OptimalSet(PiecewiseUtility estimate);
  static UtilityFamily Singleton(PiecewiseUtility u);
  static UtilityFamily Finite(std::vector<PiecewiseUtility> us);
};
std::string UtilityFamilyKindName(UtilityFamily::Kind k);
UtilityFamily::Kind ParseUtilityFamilyKind(const std::string& name);

// Worst-case PaR over the family.
double Prar(const UtilityFamily& family, const Lottery& x, double delta,
            double sigma);

// Scenario returns: row t holds xi^(t) for assets 0..S, asset 0 risk-free.
struct PortfolioProblem {
  Eigen::MatrixXd scenarios;  // T x (S + 1)
  double budget = 1.0;        // W0
  std::vector<double> caps;   // c_1..c_S in [0, 1]
  PiecewiseUtility utility;

  int assets() const { return static_cast<int>(scenarios.cols()) - 1; }
  int scenario_count() const { return static_cast<int>(scenarios.rows()); }
  // Throws DomainError unless every feasible wealth lies in [0, b_bar] and
  // the utility is concave.
  void Validate() const;
};

// Wealth x'(1 + xi^(t)) for each scenario, with x = (x0, x1..xS).
Eigen::VectorXd ScenarioWealth(const PortfolioProblem& p,
                               const Eigen::VectorXd& x);
// (1/T) sum_t u(wealth_t).
double SaaExpectedUtility(const PortfolioProblem& p, const Eigen::VectorXd& x);
// Equally weighted scenario wealths as a lottery.
Lottery WealthLottery(const PortfolioProblem& p, const Eigen::VectorXd& x);

struct PortfolioSolution {
  Eigen::VectorXd x;  // length S + 1, x(0) is cash
  // SAA expected utility of x (direct evaluation).
  double objective = 0.0;
  // Optimal LP value; agrees with `objective` to solver tolerance.
  double lp_value = 0.0;
  int iterations = 0;
};

PortfolioSolution OptimizePortfolio(const PortfolioProblem& problem);

struct EquivalenceReport {
  double quantile = 0.0;  // F^{-1}(delta)
  double eu_value = 0.0;
  double par_value = 0.0;   // PaR of the EU maximizer
  double prar_value = 0.0;  // PRaR over the optimal set at the EU maximizer
  double par_offset_error = 0.0;
  double prar_offset_error = 0.0;
  bool equivalent = false;
};

// Checks that the EU maximizer attains PaR and PRaR optimal values equal to
// the EU value shifted by F^{-1}(delta).
EquivalenceReport EquivalenceCheck(const PortfolioProblem& problem,
                                   const PortfolioSolution& solution,
                                   double delta, double sigma,
                                   double tol = 1e-8);

// CSV with header asset_0,...,asset_S and one row of decimal returns per
// scenario.
Eigen::MatrixXd ParseScenarioCsv(const std::string& text);
Eigen::MatrixXd ReadScenarioCsv(const std::string& path);

}  // namespace vnm

#endif  // VNM_DECIDE_DECIDE_H_
