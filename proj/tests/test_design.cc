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
#include "vnm/bounds/info_matrix.h"
#include "vnm/core/errors.h"
#include "vnm/design/design.h"

namespace vnm {
namespace {

BreakpointGrid HundredsGrid(int n, double b_bar, uint64_t seed) {
  Rng rng(seed);
  GridSpec spec;
  spec.n = n;
  spec.b_bar = b_bar;
  spec.step = 100;
  return RandomGrid(spec, rng);
}

Eigen::MatrixXd Rows(const std::vector<Query>& qs, const BreakpointGrid& g) {
  Eigen::MatrixXd p(qs.size(), g.size() - 1);
  for (size_t i = 0; i < qs.size(); ++i) {
    p.row(i) = Reduced(MassDiff(qs[i].w, qs[i].y, g)).transpose();
  }
  return p;
}

}  // namespace

TEST_SUITE("design") {

TEST_CASE("random_queries are supported on the grid") {
  BreakpointGrid g = HundredsGrid(20, 100000, 5);
  Rng rng(9);
  auto qs = RandomQueries(g, 200, rng);
  CHECK(qs.size() == 200);
  for (const Query& q : qs) {
    for (const Lottery* l : {&q.w, &q.y}) {
      CHECK(l->outcomes().size() <= 3);
      for (const Outcome& o : l->outcomes()) CHECK(g.Find(o.payoff).has_value());
    }
  }
  Rng a(4), b(4);
  auto q1 = RandomQueries(g, 10, a), q2 = RandomQueries(g, 10, b);
  for (int i = 0; i < 10; ++i) {
    CHECK(q1[i].w == q2[i].w);
    CHECK(q1[i].y == q2[i].y);
  }
  CHECK_THROWS_AS(RandomQueries(g, -1, rng), DomainError);
}

TEST_CASE("full_rank_design") {
  BreakpointGrid g = HundredsGrid(30, 100000, 6);
  Rng rng(10);
  CHECK_THROWS_AS(FullRankDesign(g, 28, rng), DomainError);
  for (LotteryLaw law : {LotteryLaw::kZeroAnchored, LotteryLaw::kUniformSupport}) {
    auto qs = FullRankDesign(g, 29, rng, law);
    InfoMatrix info = ComputeInfoMatrix(Rows(qs, g));
    CHECK(info.rank == 29);
    CHECK(info.lambda_min > 0);
    auto more = FullRankDesign(g, 100, rng, law);
    CHECK(more.size() == 100);
    for (int k = 29; k <= 100; k += 7) {
      std::vector<Query> prefix(more.begin(), more.begin() + k);
      CHECK(ComputeInfoMatrix(Rows(prefix, g)).rank == 29);
    }
  }
}

TEST_CASE("rank_deficient_design caps the rank") {
  BreakpointGrid g = HundredsGrid(40, 100000, 7);
  Rng rng(11);
  auto r = RankDeficientDesign(g, 500, rng, 0.5);
  CHECK(r.support.size() == 2 + 19);
  InfoMatrix info = ComputeInfoMatrix(Rows(r.queries, g));
  CHECK(info.rank == 20);
  CHECK(info.rank < 39);
  CHECK(info.lambda_min == 0.0);
  CHECK_THROWS_AS(RankDeficientDesign(g, 5, rng, 1.0), DomainError);
}

TEST_CASE("direction_to_query realizes the direction") {
  BreakpointGrid g = BreakpointGrid::Create({0, 100, 200, 300, 400}, 400);
  for (int j = 0; j < 4; ++j) {
    Query q = DirectionToQuery(Eigen::VectorXd::Unit(4, j), g);
    Eigen::VectorXd d = Reduced(MassDiff(q.w, q.y, g));
    CHECK((d - 0.5 * Eigen::VectorXd::Unit(4, j)).norm() < 1e-15);
  }
  Eigen::VectorXd ij = Eigen::VectorXd::Unit(4, 1) - Eigen::VectorXd::Unit(4, 3);
  Query q = DirectionToQuery(ij, g, 1.0);
  CHECK((Reduced(MassDiff(q.w, q.y, g)) - ij).norm() < 1e-15);
  CHECK(q.w.outcomes().size() == 1);
  CHECK(q.y.outcomes().size() == 1);

  Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::VectorXd d(4);
    for (int i = 0; i < 4; ++i) d[i] = rng.Uniform() * 6 - 3;
    Query r = DirectionToQuery(d, g, 0.3 + 0.7 * rng.Uniform());
    Eigen::VectorXd got = Reduced(MassDiff(r.w, r.y, g));
    double c = got.dot(d) / d.squaredNorm();
    CHECK(c > 0);
    CHECK((got - c * d).norm() <= 1e-12 * got.norm());
  }
  CHECK_THROWS_AS(DirectionToQuery(Eigen::VectorXd::Zero(4), g), DomainError);
  CHECK_THROWS_AS(DirectionToQuery(Eigen::VectorXd::Ones(3), g), DomainError);
  CHECK_THROWS_AS(DirectionToQuery(Eigen::VectorXd::Ones(4), g, 1.5), DomainError);
}

TEST_CASE("multi_round arithmetic") {
  DesignState s = DesignState::Start(100000);
  std::vector<int> sizes;
  int k = 0;
  for (int r = 1; r <= 3; ++r) {
    auto plan = MultiRoundStep(s);
    REQUIRE(plan);
    CHECK(plan->round == r);
    CHECK(plan->n_r == r + 1);
    sizes.push_back(static_cast<int>(plan->queries.size()));
    k += plan->queries.size();
  }
  CHECK(sizes == std::vector<int>{2, 3, 4});
  CHECK(k == 9);
  CHECK(k == MultiRoundQueryCount(2, 3));
  CHECK(s.rows.size() == 9u);

  DesignState s6 = DesignState::Start(100000);
  int k6 = 0, n_last = 0;
  for (int r = 1; r <= 6; ++r) {
    auto plan = MultiRoundStep(s6);
    REQUIRE(plan);
    k6 += plan->queries.size();
    n_last = plan->n_r;
  }
  CHECK(n_last == 7);
  CHECK(k6 == 27);
  CHECK(MultiRoundQueryCount(2, 6) == 27);
}

TEST_CASE("multi_round orthogonality, rank and midpoint rule") {
  DesignState s = DesignState::Start(100000, 1);
  std::vector<Query> issued;
  for (int r = 1; r <= 10; ++r) {
    BreakpointGrid before = s.grid;
    int widest = 0;
    for (int j = 1; j + 1 < before.size(); ++j) {
      if (before[j + 1] - before[j] > before[widest + 1] - before[widest]) widest = j;
    }
    double expect_mid = std::round(0.5 * (before[widest] + before[widest + 1]));
    auto plan = MultiRoundStep(s);
    REQUIRE(plan);
    CHECK(plan->new_breakpoint == expect_mid);
    CHECK(s.grid.size() == before.size() + 1);
    const int nr = plan->n_r;
    std::vector<Query> batch(plan->queries.begin(), plan->queries.end() - 1);
    Eigen::MatrixXd p = Rows(batch, before);
    Eigen::MatrixXd gram = p * p.transpose();
    for (int a = 0; a < nr - 1; ++a) {
      for (int b = 0; b < nr - 1; ++b) {
        if (a != b) CHECK(std::fabs(gram(a, b)) < 1e-10);
      }
    }
    CHECK(ComputeInfoMatrix(p).rank == nr - 1);
    for (const Query& q : plan->queries) issued.push_back(q);
    // With the exploration query the accumulated rows span the enlarged grid.
    CHECK(ComputeInfoMatrix(Rows(issued, s.grid)).rank == nr);
  }
}

TEST_CASE("multi_round stops when the quantum cannot split a gap") {
  DesignState s = DesignState::Start(4, 1);
  int rounds = 0;
  while (MultiRoundStep(s)) ++rounds;
  CHECK(rounds == 3);
  CHECK(s.grid.size() == 5);
  CHECK_FALSE(PlanRound(s).has_value());
}

}  // TEST_SUITE

}  // namespace vnm
