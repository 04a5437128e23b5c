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
#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.h"
#include "vnm/core/errors.h"
#include "vnm/mle/mle.h"

namespace vnm {
namespace {

StructureParams Params(Structure level, double lip = 10.0, double cbar = 100.0) {
  StructureParams sp;
  sp.level = level;
  sp.lipschitz = lip;
  sp.cbar = cbar;
  return sp;
}

MleSolution Solve(const oracle::SmallInstance& inst, double b_bar,
                  const StructureParams& sp, const MleOptions& opt = {}) {
  BreakpointGrid g = BreakpointGrid::Create(inst.y, b_bar);
  return SolveMle(MakeMleProblem(inst.data, g, sp, opt));
}

std::vector<double> Values(const PiecewiseUtility& u) { return u.alpha(); }

}  // namespace

TEST_SUITE("mle") {

TEST_CASE("log_likelihood examples") {
  BreakpointGrid g = BreakpointGrid::Create({0, 1, 2}, 2);
  Dataset d = {{Lottery::Dirac(2), Lottery::Dirac(0), 1},
               {Lottery::Dirac(1), Lottery::Dirac(2), -1},
               {Lottery::Create({{0, 0.5}, {2, 0.5}}), Lottery::Dirac(1), 1}};
  MleProblem p = MakeMleProblem(d, g, Params(Structure::kFull));
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(3);
  CHECK(LogLikelihood(zero, p.rows) == doctest::Approx(-3 * std::log(2.0)));
  MleProblem empty = MakeMleProblem({}, g, Params(Structure::kFull));
  CHECK(LogLikelihood(zero, empty.rows) == 0.0);
  CHECK(LogLikelihoodGradient(zero, empty.rows).isZero());
  // -Z p . theta = ln 3 for the single record w = Dirac(0), y = Dirac(2).
  Dataset one = {{Lottery::Dirac(0), Lottery::Dirac(2), 1}};
  MleProblem q = MakeMleProblem(one, g, Params(Structure::kFull));
  Eigen::VectorXd theta(3);
  theta << 0, 0.3, std::log(3.0);
  CHECK(LogLikelihood(theta, q.rows) == doctest::Approx(-std::log(4.0)));
  // Large arguments stay finite.
  theta << 0, 0, 1e6;
  CHECK(LogLikelihood(theta, q.rows) == doctest::Approx(-1e6));
}

TEST_CASE("log_likelihood_gradient at zero is Z p / 2") {
  BreakpointGrid g = BreakpointGrid::Create({0, 1, 2}, 2);
  Lottery w = Lottery::Create({{0, 0.25}, {1, 0.75}});
  Lottery y = Lottery::Dirac(2);
  for (int z : {1, -1}) {
    MleProblem p = MakeMleProblem({{w, y, z}}, g, Params(Structure::kFull));
    Eigen::VectorXd grad = LogLikelihoodGradient(Eigen::VectorXd::Zero(3), p.rows);
    Eigen::VectorXd expect = z * MassDiff(w, y, g) / 2;
    CHECK((grad - expect).cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("gradient matches central differences") {
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    auto inst = oracle::RandomSmallInstance(rng, 7, 30, 100);
    BreakpointGrid g = BreakpointGrid::Create(inst.y, 100);
    MleProblem p = MakeMleProblem(inst.data, g, Params(Structure::kFull));
    Eigen::VectorXd theta = Eigen::VectorXd::Random(7) * 3;
    theta[0] = 0;
    Eigen::VectorXd grad = LogLikelihoodGradient(theta, p.rows);
    const double h = 1e-5;
    for (int j = 1; j < 7; ++j) {
      Eigen::VectorXd a = theta, b = theta;
      a[j] += h;
      b[j] -= h;
      double fd = (LogLikelihood(a, p.rows) - LogLikelihood(b, p.rows)) / (2 * h);
      CHECK(std::fabs(fd - grad[j]) < 1e-6);
    }
    auto naive = oracle::NaiveGradient(inst.data, inst.y,
                                       std::vector<double>(theta.data(), theta.data() + 7));
    for (int j = 0; j < 7; ++j) CHECK(std::fabs(naive[j] - grad[j]) < 1e-12);
  }
}

TEST_CASE("Dirac examples") {
  const double b = 100000;
  oracle::SmallInstance bad{{0, b}, {{Lottery::Dirac(0), Lottery::Dirac(b), 1}}};
  MleSolution s = Solve(bad, b, Params(Structure::kFull));
  CHECK(s.status == MleStatus::kNotRationalizable);
  CHECK(s.gamma_star <= s.diagnostics.gamma_zero_tol);
  CHECK_FALSE(s.utility.has_value());
  CHECK(std::isinf(s.sigma_hat));
  CHECK(s.loglik == doctest::Approx(-std::log(2.0)));

  oracle::SmallInstance good{{0, b}, {{Lottery::Dirac(b), Lottery::Dirac(0), 1}}};
  MleSolution t = Solve(good, b, Params(Structure::kFull));
  CHECK(t.status == MleStatus::kSeparationAtBound);
  CHECK(std::fabs(t.gamma_star - 100.0) <= 1e-6 * 100.0);
  REQUIRE(t.utility.has_value());
  CHECK(t.sigma_hat == doctest::Approx(0.01));
  CHECK(t.loglik == doctest::Approx(-std::log1p(std::exp(-100.0))));
}

TEST_CASE("symmetric dataset") {
  const double b = 10;
  Lottery w = Lottery::Create({{0, 0.5}, {10, 0.5}});
  Lottery y = Lottery::Dirac(4);
  oracle::SmallInstance inst{{0, 4, 10}, {{w, y, 1}, {w, y, -1}}};
  for (Structure level : {Structure::kFull, Structure::kNoLipschitz,
                          Structure::kMonotoneOnly}) {
    MleSolution s = Solve(inst, b, Params(level, 1.0));
    CHECK(s.loglik == doctest::Approx(-2 * std::log(2.0)).epsilon(1e-9));
    CHECK(s.status == MleStatus::kNotRationalizable);
    BreakpointGrid g = BreakpointGrid::Create(inst.y, b);
    RationalizabilityResult r = CheckRationalizability(inst.data, g, Params(level, 1.0));
    CHECK(r.verdict == Rationalizability::kGammaZero);
    CHECK(r.by_sufficient_condition);
  }
}

TEST_CASE("rationalizability examples") {
  BreakpointGrid g = BreakpointGrid::Create({0, 5, 10}, 10);
  // p-bar componentwise <= 0 except at y_1: sufficient condition.
  Dataset d = {{Lottery::Dirac(0), Lottery::Dirac(5), 1},
               {Lottery::Dirac(5), Lottery::Dirac(10), 1}};
  RationalizabilityResult r = CheckRationalizability(d, g, Params(Structure::kFull));
  CHECK(r.p_bar[0] == 1);
  // p-bar_1 > 0 is irrelevant because alpha_1 = 0.
  CHECK(r.verdict == Rationalizability::kGammaZero);
  CHECK(r.by_sufficient_condition);
  Dataset e = {{Lottery::Dirac(10), Lottery::Dirac(5), 1}};
  RationalizabilityResult s = CheckRationalizability(e, g, Params(Structure::kFull));
  CHECK(s.verdict == Rationalizability::kGammaPositive);
  CHECK(s.lp_value > 0);
  CHECK(s.certificate.size() == 3);
  Dataset f = {{Lottery::Dirac(5), Lottery::Dirac(0), -1}};
  RationalizabilityResult t = CheckRationalizability(f, g, Params(Structure::kFull));
  CHECK(t.by_sufficient_condition);
  CHECK(t.verdict == Rationalizability::kGammaZero);
  CHECK_THROWS_AS(CheckRationalizability(f, g, Params(Structure::kNone)), DomainError);
}

TEST_CASE("gamma-zero flag agrees with the vertex LP oracle") {
  Rng rng(23);
  int zero = 0, positive = 0;
  for (int trial = 0; trial < 150; ++trial) {
    int n = 2 + static_cast<int>(rng.Below(5));
    int k = 1 + static_cast<int>(rng.Below(8));
    auto inst = oracle::RandomSmallInstance(rng, n, k, 20, -0.2 + 0.4 * rng.Uniform());
    Structure level = trial % 3 == 0   ? Structure::kFull
                      : trial % 3 == 1 ? Structure::kNoLipschitz
                                       : Structure::kMonotoneOnly;
    StructureParams sp = Params(level, 0.2, 5.0);
    double lp = oracle::MaxLinear(oracle::PBar(inst.data, inst.y), inst.y, level, 0.2);
    bool oracle_zero = lp <= 1e-12;
    MleSolution s = Solve(inst, 20, sp);
    BreakpointGrid g = BreakpointGrid::Create(inst.y, 20);
    RationalizabilityResult r = CheckRationalizability(inst.data, g, sp);
    CHECK((s.status == MleStatus::kNotRationalizable) == oracle_zero);
    CHECK((r.verdict == Rationalizability::kGammaZero) == oracle_zero);
    if (!r.by_sufficient_condition) CHECK(r.lp_value == doctest::Approx(lp).epsilon(1e-7));
    (oracle_zero ? zero : positive)++;
  }
  CHECK(zero > 10);
  CHECK(positive > 10);
}

TEST_CASE("solution is optimal by the concavity gap and matches the unadjusted form") {
  Rng rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    int n = 3 + static_cast<int>(rng.Below(6));
    auto inst = oracle::RandomSmallInstance(rng, n, 10 + static_cast<int>(rng.Below(40)),
                                            50, 0.3);
    Structure level = trial % 3 == 0   ? Structure::kFull
                      : trial % 3 == 1 ? Structure::kNoLipschitz
                                       : Structure::kMonotoneOnly;
    StructureParams sp = Params(level, 0.05, 20.0);
    MleSolution s = Solve(inst, 50, sp);
    double upper = oracle::LoglikUpperBound(inst.data, inst.y, s.alpha_bar, level, 0.05, 20.0);
    CHECK(upper - s.loglik < 1e-6);
    CHECK(s.loglik <= upper + 1e-12);
    CHECK(s.loglik < 0);
    double via_utility = s.utility ? oracle::NaiveLoglik(inst.data, inst.y,
                                                         Values(*s.utility), s.sigma_hat)
                                   : -static_cast<double>(inst.data.size()) * std::log(2.0);
    CHECK(std::fabs(via_utility - s.loglik) < 1e-6);
    if (s.utility) {
      CHECK(s.utility->alpha().front() == 0.0);
      CHECK(s.utility->alpha().back() == 1.0);
      CHECK(s.utility->IsMonotone());
      if (level != Structure::kMonotoneOnly) CHECK(s.utility->IsConcave());
      if (level == Structure::kFull) CHECK(s.utility->beta()[0] <= 0.05);
      CHECK(s.sigma_hat == doctest::Approx(1 / s.gamma_star));
    }
  }
}

TEST_CASE("structure monotonicity of the optimum") {
  Rng rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    auto inst = oracle::RandomSmallInstance(rng, 6, 40, 30, 0.2);
    double prev = -1e300;
    for (Structure level : {Structure::kFull, Structure::kNoLipschitz,
                            Structure::kMonotoneOnly, Structure::kNone}) {
      MleSolution s = Solve(inst, 30, Params(level, 0.1, 10.0));
      CHECK(s.loglik >= prev - 1e-7);
      prev = s.loglik;
    }
  }
}

TEST_CASE("unused breakpoints do not change the optimum") {
  Rng rng(43);
  for (int trial = 0; trial < 30; ++trial) {
    auto inst = oracle::RandomSmallInstance(rng, 5, 30, 40, 0.25);
    BreakpointGrid g = BreakpointGrid::Create(inst.y, 40);
    std::vector<double> extra;
    for (double c : {7.0, 13.0, 29.0, 37.0}) {
      if (!g.Find(c)) extra.push_back(c);
    }
    for (Structure level : {Structure::kFull, Structure::kMonotoneOnly}) {
      StructureParams sp = Params(level, 0.2, 10.0);
      MleSolution a = SolveMle(MakeMleProblem(inst.data, g, sp));
      MleSolution b = SolveMle(MakeMleProblem(inst.data, g.WithPoints(extra), sp));
      CHECK(std::fabs(a.loglik - b.loglik) < 1e-7);
    }
  }
}

TEST_CASE("uniqueness follows the information-matrix rank") {
  Rng rng(47);
  auto inst = oracle::RandomSmallInstance(rng, 4, 200, 30, 0.3);
  MleSolution s = Solve(inst, 30, Params(Structure::kFull, 1.0, 100.0));
  CHECK(s.diagnostics.rank == 3);
  CHECK(s.status == MleStatus::kUnique);
  // Add a breakpoint that no lottery uses: rank stays 3 < N - 1.
  double unused = 1;
  while (BreakpointGrid::Create(inst.y, 30).Find(unused)) ++unused;
  BreakpointGrid g = BreakpointGrid::Create(inst.y, 30).WithPoints({unused});
  {
    MleSolution t = SolveMle(MakeMleProblem(inst.data, g, Params(Structure::kFull, 1.0)));
    CHECK(t.diagnostics.rank == 3);
    CHECK(t.status == MleStatus::kNonUniqueRankDeficient);
    CHECK_THROWS_AS(ComputeOptimalSetBand(t), StateError);
  }
}

TEST_CASE("fixed sigma") {
  Rng rng(53);
  auto inst = oracle::RandomSmallInstance(rng, 5, 50, 20, 0.3);
  MleOptions opt;
  opt.fixed_sigma = 4.0;
  MleSolution s = Solve(inst, 20, Params(Structure::kFull, 1.0), opt);
  CHECK(s.gamma_star == 0.25);
  CHECK(s.sigma_hat == 4.0);
  CHECK(s.diagnostics.sigma_fixed);
  MleSolution free = Solve(inst, 20, Params(Structure::kFull, 1.0));
  CHECK(free.loglik >= s.loglik - 1e-9);
  opt.fixed_sigma = -1;
  CHECK_THROWS_AS(Solve(inst, 20, Params(Structure::kFull, 1.0), opt), DomainError);
}

TEST_CASE("optimal set band") {
  Rng rng(59);
  int checked = 0;
  for (int trial = 0; trial < 40 && checked < 15; ++trial) {
    auto inst = oracle::RandomSmallInstance(rng, 5, 150, 40, 0.3);
    for (Structure level : {Structure::kFull, Structure::kNoLipschitz}) {
      StructureParams sp = Params(level, 0.08, 50.0);
      MleSolution s = Solve(inst, 40, sp);
      if (s.status != MleStatus::kUnique) continue;
      ++checked;
      OptimalSetBand band = ComputeOptimalSetBand(s);
      const auto& y = inst.y;
      const auto& a = s.utility->alpha();
      for (size_t j = 0; j < y.size(); ++j) {
        CHECK(band.Lower(y[j]) == a[j]);
        CHECK(band.Upper(y[j]) == a[j]);
      }
      for (size_t j = 0; j + 1 < y.size(); ++j) {
        double x = 0.5 * (y[j] + y[j + 1]);
        CHECK(band.Lower(x) == doctest::Approx(0.5 * (a[j] + a[j + 1])));
        double up = band.Upper(x);
        CHECK(up >= band.Lower(x));
        double search = oracle::UpperEnvelopeSearch(y, a, x, level == Structure::kFull, 0.08);
        CHECK(std::fabs(up - search) <= (a[j + 1] - a[j]) / 20000 + 1e-12);
      }
      for (auto [x, v] : band.UpperPolyline()) CHECK(v == doctest::Approx(band.Upper(x)));
    }
  }
  CHECK(checked >= 5);
  // Two-point grid: the band is the segment itself.
  oracle::SmallInstance two{{0, 10}, {}};
  for (int i = 0; i < 3; ++i) {
    two.data.push_back({Lottery::Create({{0, 0.5}, {10, 0.5}}), Lottery::Dirac(0), 1});
  }
  two.data.push_back({Lottery::Create({{0, 0.5}, {10, 0.5}}), Lottery::Dirac(0), -1});
  MleSolution s = Solve(two, 10, Params(Structure::kFull, 1.0));
  REQUIRE(s.status == MleStatus::kUnique);
  OptimalSetBand band = ComputeOptimalSetBand(s);
  // Concave interpolants through (0, 0) and (10, 1) reach min(L y, 1).
  CHECK(band.Upper(3) == doctest::Approx(1.0));
  CHECK(band.Lower(3) == doctest::Approx(0.3));
  // With L b_bar = 1 only the segment itself remains.
  MleSolution tight = Solve(two, 10, Params(Structure::kFull, 0.1));
  REQUIRE(tight.status == MleStatus::kUnique);
  OptimalSetBand collapsed = ComputeOptimalSetBand(tight);
  for (double x : {1.0, 3.0, 7.5}) {
    CHECK(collapsed.Upper(x) == doctest::Approx(collapsed.Lower(x)));
  }
  // log(3) / 0.5 is the unconstrained optimum of 3 wins and 1 loss.
  CHECK(s.gamma_star == doctest::Approx(2 * std::log(3.0)).epsilon(1e-6));
}

TEST_CASE("input validation") {
  BreakpointGrid g = BreakpointGrid::Create({0, 1}, 1);
  CHECK_THROWS_AS(SolveMle(MakeMleProblem({}, g, Params(Structure::kFull))), DomainError);
  StructureParams bad = Params(Structure::kFull, -1);
  Dataset d = {{Lottery::Dirac(1), Lottery::Dirac(0), 1}};
  CHECK_THROWS_AS(SolveMle(MakeMleProblem(d, g, bad)), DomainError);
  CHECK(ParseMleStatus(MleStatusName(MleStatus::kNonUniqueRankDeficient)) ==
        MleStatus::kNonUniqueRankDeficient);
}

}  // TEST_SUITE

}  // namespace vnm
