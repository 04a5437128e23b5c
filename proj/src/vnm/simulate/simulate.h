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

#ifndef VNM_SIMULATE_SIMULATE_H_
#define VNM_SIMULATE_SIMULATE_H_

#include <functional>
#include <string>

#include "vnm/core/grid.h"
#include "vnm/core/lottery.h"
#include "vnm/core/rng.h"
#include "vnm/core/utility.h"

namespace vnm {

double GumbelCdf(double x, double sigma);
double GumbelQuantile(double delta, double sigma);
// Draw by inversion of the CDF.
double SampleGumbel(double sigma, Rng& rng);

// 1 / (1 + exp(-(eu_w - eu_y) / sigma)).
double ChoiceProbability(double eu_w, double eu_y, double sigma);
double ChoiceProbability(const PiecewiseUtility& u, const Lottery& w,
                         const Lottery& y, double sigma);

inline constexpr double kDefaultBBar = 100000.0;

// Normalized CARA utility on [0, 100000] used as ground truth.
double CaraUtility(double y);

using UtilityFn = std::function<double(double)>;

struct SimulatedDM {
  UtilityFn utility;
  double sigma_star = 10.0;
  double b_bar = kDefaultBBar;

  static SimulatedDM Cara(double sigma_star = 10.0);
  void Validate() const;
  double Expected(const Lottery& x) const;
};

// +1 iff E[u(W)] + eps1 >= E[u(Y)] + eps2 with i.i.d. Gumbel errors.
int SampleChoice(const SimulatedDM& dm, const Lottery& w, const Lottery& y,
                 Rng& rng);

// N-2 distinct interior breakpoints drawn uniformly from the multiples of
// `step` in (0, b_bar), plus the endpoints.
struct GridSpec {
  int n = 50;
  double b_bar = kDefaultBBar;
  double step = 100.0;
};
BreakpointGrid RandomGrid(const GridSpec& spec, Rng& rng);

enum class LotteryLaw {
  // One or two distinct positive breakpoints with probabilities from uniform
  // cut points; the remaining mass sits at 0.
  kZeroAnchored,
  // Support size s uniform in {1,2,3} drawn from all breakpoints,
  // probabilities from s-1 uniform cut points.
  kUniformSupport,
};
std::string LotteryLawName(LotteryLaw law);
LotteryLaw ParseLotteryLaw(const std::string& name);

Lottery RandomLottery(const BreakpointGrid& grid, Rng& rng,
                      LotteryLaw law = LotteryLaw::kZeroAnchored);

// K records drawn sequentially from one stream: the dataset for K1 < K2 is a
// prefix of the one for K2 under the same generator state.
Dataset GenerateDataset(const SimulatedDM& dm, const BreakpointGrid& grid,
                        int k, Rng& rng,
                        LotteryLaw law = LotteryLaw::kZeroAnchored);

// Values u(y_j) / sigma_star at the grid, i.e. the adjusted truth theta*.
std::vector<double> TrueTheta(const SimulatedDM& dm,
                              const BreakpointGrid& grid);

}  // namespace vnm

#endif  // VNM_SIMULATE_SIMULATE_H_
