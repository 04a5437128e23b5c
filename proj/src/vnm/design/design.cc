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
#include "vnm/design/design.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vnm/core/errors.h"

namespace vnm {

std::vector<Query> RandomQueries(const BreakpointGrid& grid, int count,
                                 Rng& rng, LotteryLaw law) {
  if (count < 0) throw DomainError("query count must be non-negative");
  std::vector<Query> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    Lottery w = RandomLottery(grid, rng, law);
    Lottery y = RandomLottery(grid, rng, law);
    out.push_back({std::move(w), std::move(y)});
  }
  return out;
}

std::vector<Query> FullRankDesign(const BreakpointGrid& grid, int k, Rng& rng,
                                  LotteryLaw law) {
  const int dim = grid.size() - 1;
  if (k < dim) {
    throw DomainError("a full-rank design needs K >= N - 1 queries (K = " +
                      std::to_string(k) + ", N = " +
                      std::to_string(grid.size()) + ")");
  }
  std::vector<Query> out;
  out.reserve(k);
  std::vector<Eigen::VectorXd> basis;  // orthonormal span of accepted rows
  const long max_tries = 2000L * (dim + 1);
  long tries = 0;
  while (static_cast<int>(basis.size()) < dim) {
    if (++tries > max_tries) {
      throw SolverError("full-rank design did not reach rank N - 1");
    }
    Lottery w = RandomLottery(grid, rng, law);
    Lottery y = RandomLottery(grid, rng, law);
    Eigen::VectorXd v = Reduced(MassDiff(w, y, grid));
    const double norm0 = v.norm();
    if (norm0 == 0.0) continue;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) v -= b.dot(v) * b;
    }
    if (v.norm() <= 0.1 * norm0) continue;
    basis.push_back(v / v.norm());
    out.push_back({std::move(w), std::move(y)});
  }
  auto rest = RandomQueries(grid, k - dim, rng, law);
  for (auto& q : rest) out.push_back(std::move(q));
  return out;
}

RankDeficientDesignResult RankDeficientDesign(const BreakpointGrid& grid,
                                              int k, Rng& rng,
                                              double keep_fraction,
                                              LotteryLaw law) {
  if (k < 0) throw DomainError("query count must be non-negative");
  if (!(keep_fraction >= 0.0 && keep_fraction < 1.0)) {
    throw DomainError("keep fraction must lie in [0, 1)");
  }
  const int n = grid.size();
  const int interior = n - 2;
  const int keep = static_cast<int>(std::lround(keep_fraction * interior));
  std::vector<int> idx(interior);
  std::iota(idx.begin(), idx.end(), 1);
  for (int i = 0; i < keep; ++i) {
    int j = i + static_cast<int>(rng.Below(static_cast<uint64_t>(interior - i)));
    std::swap(idx[i], idx[j]);
  }
  std::vector<double> support = {grid[0], grid[n - 1]};
  for (int i = 0; i < keep; ++i) support.push_back(grid[idx[i]]);
  std::sort(support.begin(), support.end());
  BreakpointGrid sub =
      BreakpointGrid::Create(support, grid.b_bar(), grid.quantum());
  RankDeficientDesignResult r;
  r.queries = RandomQueries(sub, k, rng, law);
  r.support = std::move(support);
  return r;
}

Query DirectionToQuery(const Eigen::VectorXd& direction,
                       const BreakpointGrid& grid, double amplitude) {
  const int n = grid.size();
  if (direction.size() != n - 1) {
    throw DomainError("direction length must be N - 1");
  }
  if (!(amplitude > 0.0 && amplitude <= 1.0)) {
    throw DomainError("query amplitude must lie in (0, 1]");
  }
  if (!direction.allFinite() || direction.cwiseAbs().maxCoeff() == 0.0) {
    throw DomainError("direction has no nonzero reduced component");
  }
  double plus = 0.0, minus = 0.0;
  for (Eigen::Index j = 0; j < direction.size(); ++j) {
    if (direction[j] > 0.0) plus += direction[j];
    if (direction[j] < 0.0) minus -= direction[j];
  }
  const double c = amplitude / std::max({plus, minus, 1.0});
  std::vector<Outcome> w, y;
  double w_rest = 1.0, y_rest = 1.0;
  for (Eigen::Index j = 0; j < direction.size(); ++j) {
    double m = c * direction[j];
    if (m > 0.0) {
      w.push_back({grid[static_cast<int>(j) + 1], m});
      w_rest -= m;
    } else if (m < 0.0) {
      y.push_back({grid[static_cast<int>(j) + 1], -m});
      y_rest += m;
    }
  }
  w.push_back({grid[0], std::max(0.0, w_rest)});
  y.push_back({grid[0], std::max(0.0, y_rest)});
  return {Lottery::Create(std::move(w)), Lottery::Create(std::move(y))};
}

DesignState DesignState::Start(double b_bar, double quantum, double amplitude) {
  DesignState s{BreakpointGrid::Create({0.0, b_bar}, b_bar, quantum)};
  s.amplitude = amplitude;
  return s;
}

std::optional<double> NextBreakpoint(const BreakpointGrid& grid) {
  int widest = 0;
  double gap = -1.0;
  for (int j = 0; j + 1 < grid.size(); ++j) {
    double g = grid[j + 1] - grid[j];
    if (g > gap) {
      gap = g;
      widest = j;
    }
  }
  const double q = grid.quantum();
  double mid = std::round(0.5 * (grid[widest] + grid[widest + 1]) / q) * q;
  if (!(mid > grid[widest] && mid < grid[widest + 1]) || grid.Find(mid)) {
    return std::nullopt;
  }
  return mid;
}

std::optional<RoundPlan> PlanRound(const DesignState& state) {
  std::optional<double> mid = NextBreakpoint(state.grid);
  if (!mid) return std::nullopt;
  const BreakpointGrid& grid = state.grid;
  const int n = grid.size();
  RoundPlan plan;
  plan.round = state.round + 1;
  plan.n_r = n;
  plan.new_breakpoint = *mid;
  for (int j = 0; j < n - 1; ++j) {
    plan.queries.push_back(
        DirectionToQuery(Eigen::VectorXd::Unit(n - 1, j), grid, state.amplitude));
  }
  const int seg = grid.Segment(*mid);
  const double s = state.amplitude;
  Lottery w = Lottery::Create({{*mid, s}, {0.0, 1.0 - s}});
  std::vector<Outcome> y = {{grid[seg], 0.5 * s}, {grid[seg + 1], 0.5 * s}};
  y.push_back({0.0, 1.0 - s});
  plan.queries.push_back({std::move(w), Lottery::Create(std::move(y))});
  return plan;
}

std::optional<RoundPlan> MultiRoundStep(DesignState& state) {
  std::optional<RoundPlan> plan = PlanRound(state);
  if (!plan) return std::nullopt;
  for (int i = 0; i + 1 < static_cast<int>(plan->queries.size()); ++i) {
    const Query& q = plan->queries[i];
    state.rows.push_back(Reduced(MassDiff(q.w, q.y, state.grid)));
  }
  state.grid = state.grid.WithPoints({plan->new_breakpoint});
  const Query& e = plan->queries.back();
  state.rows.push_back(Reduced(MassDiff(e.w, e.y, state.grid)));
  ++state.round;
  return plan;
}

}  // namespace vnm
