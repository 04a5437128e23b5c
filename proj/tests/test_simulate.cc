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
#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "vnm/core/errors.h"
#include "vnm/simulate/simulate.h"

namespace vnm {

TEST_SUITE("simulate") {

TEST_CASE("gumbel_cdf examples") {
  CHECK(GumbelCdf(0, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(GumbelCdf(1e6, 1) == 1.0);
  CHECK(GumbelCdf(-50, 1) < 1e-300);
  CHECK(GumbelCdf(-3 * std::log(-std::log(0.9)), 3) == doctest::Approx(0.9).epsilon(1e-14));
  CHECK_THROWS_AS(GumbelCdf(0, 0), DomainError);
}

TEST_CASE("gumbel_quantile examples") {
  CHECK(GumbelQuantile(std::exp(-1.0), 7) == doctest::Approx(0).epsilon(1e-15));
  CHECK(GumbelQuantile(0.5, 10) == doctest::Approx(-10 * std::log(std::log(2.0))));
  CHECK(GumbelQuantile(0.5, 10) == doctest::Approx(3.665).epsilon(1e-3));
  for (double d : {0.01, 0.05, 0.3, 0.5, 0.9, 0.999}) {
    CHECK(std::fabs(GumbelCdf(GumbelQuantile(d, 2.5), 2.5) - d) < 1e-12);
  }
  CHECK_THROWS_AS(GumbelQuantile(0, 1), DomainError);
  CHECK_THROWS_AS(GumbelQuantile(1, 1), DomainError);
}

TEST_CASE("choice_probability examples") {
  CHECK(ChoiceProbability(0.4, 0.4, 3) == 0.5);
  CHECK(ChoiceProbability(2 * std::log(3.0), 0, 2) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(ChoiceProbability(0.3, 0, 10) == doctest::Approx(1 / (1 + std::exp(-0.03))));
  CHECK(ChoiceProbability(0.3, 0, 10) == doctest::Approx(0.50750).epsilon(1e-5));
  CHECK_THROWS_AS(ChoiceProbability(0, 0, -1), DomainError);
  // Complementarity and adjusted-model invariance.
  for (double gap : {-3.0, -0.1, 0.0, 0.2, 5.0}) {
    CHECK(ChoiceProbability(gap, 0, 1.7) + ChoiceProbability(0, gap, 1.7) == 1.0);
    CHECK(ChoiceProbability(gap, 0, 1.7) ==
          doctest::Approx(ChoiceProbability(gap / 1.7, 0, 1)).epsilon(1e-15));
  }
}

TEST_CASE("true utility") {
  CHECK(CaraUtility(0) == 0);
  CHECK(CaraUtility(100000) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(CaraUtility(50000) == doctest::Approx((1 - std::exp(-3.0)) / (1 - std::exp(-6.0))));
  CHECK(CaraUtility(50000) == doctest::Approx(0.952574).epsilon(1e-6));
  CHECK(6e-5 / (1 - std::exp(-6.0)) <= 10);
  CHECK_THROWS_AS(CaraUtility(-1), DomainError);
  CHECK_THROWS_AS(CaraUtility(100001), DomainError);
}

TEST_CASE("gumbel sampler passes Kolmogorov-Smirnov") {
  Rng rng(2024);
  const int m = 100000;
  std::vector<double> xs(m);
  for (double& x : xs) x = SampleGumbel(2.0, rng);
  std::sort(xs.begin(), xs.end());
  double d = 0;
  for (int i = 0; i < m; ++i) {
    double f = GumbelCdf(xs[i], 2.0);
    d = std::max({d, f - static_cast<double>(i) / m, static_cast<double>(i + 1) / m - f});
  }
  CHECK(d < 1.628 / std::sqrt(static_cast<double>(m)));
}

TEST_CASE("sample_choice frequency matches closed form") {
  SimulatedDM dm{[](double y) { return y; }, 10.0, 1.0};
  Lottery w = Lottery::Create({{1.0, 0.3}, {0.0, 0.7}});
  Lottery y = Lottery::Dirac(0.0);
  Rng rng(1);
  const int m = 100000;
  int plus = 0;
  for (int i = 0; i < m; ++i) plus += SampleChoice(dm, w, y, rng) == 1;
  double p = ChoiceProbability(0.3, 0, 10);
  double se = std::sqrt(p * (1 - p) / m);
  CHECK(std::fabs(static_cast<double>(plus) / m - p) < 3 * se);
}

TEST_CASE("sample_choice limits") {
  SimulatedDM sharp{[](double y) { return y; }, 1e-9, 1.0};
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    CHECK(SampleChoice(sharp, Lottery::Dirac(1), Lottery::Dirac(0), rng) == 1);
  }
  SimulatedDM dm = SimulatedDM::Cara(10);
  int plus = 0;
  for (int i = 0; i < 20000; ++i) {
    plus += SampleChoice(dm, Lottery::Dirac(500), Lottery::Dirac(500), rng) == 1;
  }
  CHECK(std::fabs(plus / 20000.0 - 0.5) < 3 * std::sqrt(0.25 / 20000));
}

TEST_CASE("generate_dataset") {
  SimulatedDM dm = SimulatedDM::Cara(10);
  Rng grid_rng(1);
  BreakpointGrid grid = RandomGrid({50, kDefaultBBar, 100}, grid_rng);
  CHECK(grid.size() == 50);
  for (double y : grid.points()) CHECK(std::fmod(y, 100.0) == 0);
  for (LotteryLaw law : {LotteryLaw::kZeroAnchored, LotteryLaw::kUniformSupport}) {
    Rng a(5), b(5);
    Dataset d5 = GenerateDataset(dm, grid, 5, a, law);
    Dataset d5b = GenerateDataset(dm, grid, 5, b, law);
    REQUIRE(d5.size() == 5);
    for (int k = 0; k < 5; ++k) {
      CHECK(d5[k].w == d5b[k].w);
      CHECK(d5[k].z == d5b[k].z);
      for (const Lottery* l : {&d5[k].w, &d5[k].y}) {
        CHECK(l->size() <= 3);
        for (const Outcome& o : l->outcomes()) CHECK(grid.Find(o.payoff).has_value());
      }
    }
    Rng c(5);
    Dataset d20 = GenerateDataset(dm, grid, 20, c, law);
    for (int k = 0; k < 5; ++k) {
      CHECK(d20[k].w == d5[k].w);
      CHECK(d20[k].y == d5[k].y);
      CHECK(d20[k].z == d5[k].z);
    }
  }
  Rng r(1);
  CHECK_THROWS_AS(GenerateDataset(dm, grid, 0, r), DomainError);
  CHECK(ParseLotteryLaw(LotteryLawName(LotteryLaw::kUniformSupport)) ==
        LotteryLaw::kUniformSupport);
}

TEST_CASE("rng streams are reproducible") {
  Rng a(Rng::StreamSeed(7, 1)), b(Rng::StreamSeed(7, 1)), c(Rng::StreamSeed(7, 2));
  uint64_t x = a.Next();
  CHECK(x == b.Next());
  CHECK(x != c.Next());
  Rng d(1);
  for (int i = 0; i < 1000; ++i) {
    CHECK(d.Below(7) < 7);
    double u = d.UniformOpen();
    CHECK(u > 0);
    CHECK(u < 1);
  }
}

}  // TEST_SUITE

}  // namespace vnm
