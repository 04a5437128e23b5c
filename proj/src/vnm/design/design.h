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
#ifndef VNM_DESIGN_DESIGN_H_
#define VNM_DESIGN_DESIGN_H_

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "vnm/core/grid.h"
#include "vnm/core/lottery.h"
#include "vnm/core/rng.h"
#include "vnm/simulate/simulate.h"

namespace vnm {

struct Query {
  Lottery w;
  Lottery y;
};

inline constexpr double kDefaultAmplitude = 0.5;

std::vector<Query> RandomQueries(const BreakpointGrid& grid, int count,
                                 Rng& rng,
                                 LotteryLaw law = LotteryLaw::kZeroAnchored);

// Random queries where the first N-1 accepted ones have linearly independent
// reduced mass differences, so every prefix of length >= N-1 has a full-rank
// information matrix. Throws DomainError for K < N-1.
std::vector<Query> FullRankDesign(const BreakpointGrid& grid, int k, Rng& rng,
                                  LotteryLaw law = LotteryLaw::kZeroAnchored);

// Random queries whose supports use only a fixed subset of the breakpoints:
// 0, b_bar and round(keep_fraction * (N-2)) interior points drawn once. The
// information matrix rank therefore never exceeds the subset size minus one.
struct RankDeficientDesignResult {
  std::vector<Query> queries;
  std::vector<double> support;  // the subset, ascending
};
RankDeficientDesignResult RankDeficientDesign(
    const BreakpointGrid& grid, int k, Rng& rng, double keep_fraction = 0.5,
    LotteryLaw law = LotteryLaw::kZeroAnchored);

// Two lotteries whose reduced mass difference is c * direction with
// c = amplitude / max(|q+|_1, |q-|_1, 1); leftover mass sits at 0.
Query DirectionToQuery(const Eigen::VectorXd& direction,
                       const BreakpointGrid& grid,
                       double amplitude = kDefaultAmplitude);

// Multi-round questionnaire: round r asks the N_r - 1 standard-basis
// directions of the current grid, then one exploration query that compares
// the midpoint of the widest gap with an even mix of the gap's endpoints.
// The midpoint joins the grid for round r + 1.
struct DesignState {
  BreakpointGrid grid;
  int round = 0;  // completed rounds
  double amplitude = kDefaultAmplitude;
  // Reduced rows of all issued queries, each over the grid at issue time.
  std::vector<Eigen::VectorXd> rows;

  static DesignState Start(double b_bar, double quantum = kDefaultQuantum,
                           double amplitude = kDefaultAmplitude);
  int n() const { return grid.size(); }
};

struct RoundPlan {
  int round = 1;  // 1-based index of this round
  int n_r = 2;
  std::vector<Query> queries;  // N_r - 1 orthogonal ones, then exploration
  double new_breakpoint = 0.0;
};

// nullopt when the widest gap cannot be split at the payoff quantum.
std::optional<double> NextBreakpoint(const BreakpointGrid& grid);

// Plans the next round without changing `state`; nullopt when the design is
// complete.
std::optional<RoundPlan> PlanRound(const DesignState& state);

// Plans and commits the next round (grid grows by one, rows are recorded).
std::optional<RoundPlan> MultiRoundStep(DesignState& state);

// K after R complete rounds from N_1: sum of N_1 .. N_1 + R - 1.
inline int MultiRoundQueryCount(int n1, int rounds) {
  return rounds * n1 + rounds * (rounds - 1) / 2;
}

}  // namespace vnm

#endif  // VNM_DESIGN_DESIGN_H_
