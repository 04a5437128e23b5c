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

#include "vnm/simulate/simulate.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "vnm/core/errors.h"

namespace vnm {
namespace {

void CheckSigma(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw DomainError("scale sigma must be positive, got " +
                      std::to_string(sigma));
  }
}

}  // namespace

double GumbelCdf(double x, double sigma) {
  CheckSigma(sigma);
  return std::exp(-std::exp(-x / sigma));
}

double GumbelQuantile(double delta, double sigma) {
  CheckSigma(sigma);
  if (!(delta > 0.0 && delta < 1.0)) {
    throw DomainError("confidence level delta must lie in (0,1)");
  }
  return -sigma * std::log(-std::log(delta));
}

double SampleGumbel(double sigma, Rng& rng) {
  return -sigma * std::log(-std::log(rng.UniformOpen()));
}

double ChoiceProbability(double eu_w, double eu_y, double sigma) {
  CheckSigma(sigma);
  double x = (eu_w - eu_y) / sigma;
  // The complement keeps P(w over y) + P(y over w) == 1 in floating point.
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  return 1.0 - 1.0 / (1.0 + std::exp(x));
}

double ChoiceProbability(const PiecewiseUtility& u, const Lottery& w,
                         const Lottery& y, double sigma) {
  return ChoiceProbability(u.Expected(w), u.Expected(y), sigma);
}

double CaraUtility(double y) {
  if (!(y >= 0.0 && y <= kDefaultBBar)) {
    throw DomainError("true utility defined on [0, 100000]");
  }
  return -std::expm1(-6e-5 * y) / -std::expm1(-6.0);
}

SimulatedDM SimulatedDM::Cara(double sigma_star) {
  SimulatedDM dm;
  dm.utility = CaraUtility;
  dm.sigma_star = sigma_star;
  dm.b_bar = kDefaultBBar;
  dm.Validate();
  return dm;
}

void SimulatedDM::Validate() const {
  CheckSigma(sigma_star);
  if (!utility) throw DomainError("simulated DM has no utility");
  if (!(b_bar > 0.0)) throw DomainError("b_bar must be positive");
}

double SimulatedDM::Expected(const Lottery& x) const {
  x.CheckRange(b_bar);
  double total = 0.0;
  for (const Outcome& o : x.outcomes()) total += o.prob * utility(o.payoff);
  return total;
}

int SampleChoice(const SimulatedDM& dm, const Lottery& w, const Lottery& y,
                 Rng& rng) {
  double e1 = SampleGumbel(dm.sigma_star, rng);
  double e2 = SampleGumbel(dm.sigma_star, rng);
  return dm.Expected(w) + e1 >= dm.Expected(y) + e2 ? 1 : -1;
}

BreakpointGrid RandomGrid(const GridSpec& spec, Rng& rng) {
  if (spec.n < 2) throw DomainError("grid needs N >= 2");
  if (!(spec.step > 0.0)) throw DomainError("grid step must be positive");
  const auto slots = static_cast<int64_t>(std::ceil(spec.b_bar / spec.step)) - 1;
  if (spec.n - 2 > slots) {
    throw DomainError("not enough multiples of the step for N = " +
                      std::to_string(spec.n));
  }
  // Floyd's algorithm: n-2 distinct draws from {1, ..., slots}.
  std::vector<int64_t> picked;
  for (int64_t j = slots - (spec.n - 2) + 1; j <= slots; ++j) {
    int64_t t = 1 + static_cast<int64_t>(rng.Below(static_cast<uint64_t>(j)));
    if (std::find(picked.begin(), picked.end(), t) != picked.end()) t = j;
    picked.push_back(t);
  }
  std::vector<double> points;
  for (int64_t m : picked) points.push_back(static_cast<double>(m) * spec.step);
  return BreakpointGrid::Create(points, spec.b_bar,
                                std::min(spec.step, kDefaultQuantum));
}

std::string LotteryLawName(LotteryLaw law) {
  return law == LotteryLaw::kZeroAnchored ? "zero" : "uniform";
}

LotteryLaw ParseLotteryLaw(const std::string& name) {
  if (name == "zero") return LotteryLaw::kZeroAnchored;
  if (name == "uniform") return LotteryLaw::kUniformSupport;
  throw DomainError("unknown lottery law '" + name + "' (expected zero|uniform)");
}

Lottery RandomLottery(const BreakpointGrid& grid, Rng& rng, LotteryLaw law) {
  const int n = grid.size();
  const bool anchored = law == LotteryLaw::kZeroAnchored;
  // Candidate breakpoints are [first, n).
  const int first = anchored ? 1 : 0;
  const int avail = n - first;
  int draws = anchored ? 1 + static_cast<int>(rng.Below(2))
                       : 1 + static_cast<int>(rng.Below(3));
  draws = std::min(draws, avail);
  std::vector<int> idx(avail);
  std::iota(idx.begin(), idx.end(), first);
  for (int i = 0; i < draws; ++i) {
    int j = i + static_cast<int>(rng.Below(static_cast<uint64_t>(avail - i)));
    std::swap(idx[i], idx[j]);
  }
  // Spacings of the cut points; an anchored lottery gives the last one to 0.
  const int pieces = anchored ? draws + 1 : draws;
  std::vector<double> cuts = {0.0, 1.0};
  for (int i = 0; i + 1 < pieces; ++i) cuts.push_back(rng.Uniform());
  std::sort(cuts.begin(), cuts.end());
  std::vector<Outcome> outcomes;
  for (int i = 0; i < draws; ++i) {
    outcomes.push_back({grid[idx[i]], cuts[i + 1] - cuts[i]});
  }
  if (anchored) outcomes.push_back({0.0, cuts[pieces] - cuts[pieces - 1]});
  return Lottery::Create(std::move(outcomes));
}

Dataset GenerateDataset(const SimulatedDM& dm, const BreakpointGrid& grid,
                        int k, Rng& rng, LotteryLaw law) {
  if (k <= 0) throw DomainError("dataset size K must be positive");
  dm.Validate();
  Dataset out;
  out.reserve(k);
  for (int i = 0; i < k; ++i) {
    Lottery w = RandomLottery(grid, rng, law);
    Lottery y = RandomLottery(grid, rng, law);
    int z = SampleChoice(dm, w, y, rng);
    out.push_back({std::move(w), std::move(y), z});
  }
  return out;
}

std::vector<double> TrueTheta(const SimulatedDM& dm,
                              const BreakpointGrid& grid) {
  std::vector<double> theta(grid.size());
  for (int j = 0; j < grid.size(); ++j) {
    theta[j] = dm.utility(grid[j]) / dm.sigma_star;
  }
  return theta;
}

}  // namespace vnm
