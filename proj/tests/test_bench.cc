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
#include <string>
#include <vector>

#include "doctest.h"
#include "vnm/bench/bench.h"
#include "vnm/core/errors.h"

namespace vnm {
namespace {

ExperimentSpec Small(Experiment id) {
  ExperimentSpec s = DefaultSpec(id, 2);
  s.n = 8;
  s.k_schedule = {20, 40};
  s.b_bar = 10000;
  s.threads = 1;
  return s;
}

}  // namespace

TEST_SUITE("bench") {

TEST_CASE("defaults") {
  ExperimentSpec s = DefaultSpec(Experiment::kSigmaVariable);
  CHECK(s.lipschitz == 10);
  CHECK(s.cbar == 100);
  CHECK(s.b_bar == 100000);
  CHECK(s.sigma_star == 10);
  CHECK(s.seeds.size() == 30u);
  CHECK(DefaultSpec(Experiment::kRankEffect).n == 200);
  for (Experiment e : {Experiment::kSigmaVariable, Experiment::kStructureLevels,
                       Experiment::kRankEffect}) {
    CHECK(ParseExperiment(ExperimentName(e)) == e);
  }
  CHECK_THROWS_AS(ParseExperiment("fig9"), DomainError);
  CHECK(ExperimentArms(Experiment::kStructureLevels).size() == 4u);
}

TEST_CASE("spec validation") {
  ExperimentSpec s = Small(Experiment::kSigmaVariable);
  s.k_schedule.clear();
  CHECK_THROWS_AS(RunExperiment(s), DomainError);
  s = Small(Experiment::kSigmaVariable);
  s.seeds.clear();
  CHECK_THROWS_AS(RunExperiment(s), DomainError);
  s = Small(Experiment::kSigmaVariable);
  s.sigma_star = 0.001;
  CHECK_THROWS_AS(RunExperiment(s), DomainError);
}

TEST_CASE("runs are deterministic and independent of the thread count") {
  for (Experiment e : {Experiment::kSigmaVariable, Experiment::kStructureLevels,
                       Experiment::kRankEffect}) {
    ExperimentSpec s = Small(e);
    ExperimentResult a = RunExperiment(s);
    s.threads = 2;
    ExperimentResult b = RunExperiment(s);
    CHECK(CellsCsv(a) == CellsCsv(b));
    CHECK(SummaryCsv(a) == SummaryCsv(b));
    const size_t arms = ExperimentArms(e).size();
    CHECK(a.cells.size() == arms * 2 * 2);
    CHECK(a.summary.size() == arms * 2);
    for (const CellResult& c : a.cells) {
      CHECK(c.ok);
      CHECK(c.linf <= c.l2 + 1e-12);
    }
    CHECK(a.metadata["experiment"] == ExperimentName(e));
    CHECK(a.metadata.contains("rank_deficient_construction") ==
          (e == Experiment::kRankEffect));
  }
}

TEST_CASE("a longer schedule extends the same cells") {
  ExperimentSpec s = Small(Experiment::kSigmaVariable);
  ExperimentResult a = RunExperiment(s);
  s.k_schedule = {20, 40, 60};
  ExperimentResult b = RunExperiment(s);
  for (const CellResult& c : a.cells) {
    bool found = false;
    for (const CellResult& d : b.cells) {
      if (d.arm == c.arm && d.k == c.k && d.seed == c.seed) {
        found = true;
        CHECK(d.l2 == c.l2);
        CHECK(d.sigma_hat == c.sigma_hat);
      }
    }
    CHECK(found);
  }
}

TEST_CASE("rank effect arms differ in rank") {
  ExperimentSpec s = Small(Experiment::kRankEffect);
  s.n = 12;
  ExperimentResult r = RunExperiment(s);
  CHECK(ExperimentArms(s.id) == std::vector<std::string>{"rank_deficient", "full_rank"});
  for (const CellResult& c : r.cells) {
    if (c.arm == "full_rank") {
      CHECK(c.rank == 11);
      CHECK(c.lambda_min > 0);
      CHECK(c.gram_lambda_min == doctest::Approx(c.k * c.lambda_min));
    } else {
      CHECK(c.rank < 11);
      CHECK(c.lambda_min == 0);
    }
  }
}

TEST_CASE("summary csv round trip and svg") {
  ExperimentResult r = RunExperiment(Small(Experiment::kStructureLevels));
  std::string csv = SummaryCsv(r);
  CHECK(csv.rfind("experiment,arm,k,runs,failed,mean_l2,mean_linf,", 0) == 0);
  CHECK(CellsCsv(r).rfind("experiment,arm,k,seed,ok,status,l2,linf,", 0) == 0);
  auto rows = ParseSummaryCsv(csv);
  REQUIRE(rows.size() == r.summary.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].arm == r.summary[i].arm);
    CHECK(rows[i].k == r.summary[i].k);
    CHECK(rows[i].runs == r.summary[i].runs);
    CHECK(rows[i].mean_l2 == doctest::Approx(r.summary[i].mean_l2).epsilon(1e-9));
  }
  CHECK(SummaryCsv(r) == csv);
  std::string svg = RenderSvg(r.summary, "l2", "structure levels");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  for (const auto& arm : ExperimentArms(r.spec.id)) CHECK(svg.find(arm) != std::string::npos);
  CHECK_THROWS_AS(r.MeanSeries(r.summary[0].arm, "median"), DomainError);
  CHECK_THROWS_AS(ParseSummaryCsv("nonsense\n1,2\n"), DomainError);
}

TEST_CASE("spearman") {
  CHECK(SpearmanRho({1, 2, 3, 4}, {10, 20, 30, 40}) == doctest::Approx(1));
  CHECK(SpearmanRho({1, 2, 3, 4}, {4, 1, 0.5, 0.1}) == doctest::Approx(-1));
  CHECK(SpearmanRho({1, 2, 3, 4, 5}, {1, 1, 2, 2, 3}) == doctest::Approx(0.9486832980505138));
  CHECK(SpearmanRho({1, 2, 3}, {1, 100, 2}) == doctest::Approx(0.5));
  CHECK_THROWS_AS(SpearmanRho({1, 2}, {1}), DomainError);
}

}  // TEST_SUITE

}  // namespace vnm
