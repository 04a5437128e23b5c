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
#ifndef VNM_BENCH_BENCH_H_
#define VNM_BENCH_BENCH_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "vnm/core/json_io.h"
#include "vnm/simulate/simulate.h"

namespace vnm {

enum class Experiment { kSigmaVariable, kStructureLevels, kRankEffect };
std::string ExperimentName(Experiment e);  // "fig2", "fig3", "table2"
Experiment ParseExperiment(const std::string& name);

struct ExperimentSpec {
  Experiment id = Experiment::kSigmaVariable;
  std::vector<int> k_schedule;
  int n = 50;
  std::vector<uint64_t> seeds;
  double lipschitz = 10.0;
  double cbar = 100.0;
  double b_bar = kDefaultBBar;
  double sigma_star = 10.0;
  double grid_step = 100.0;
  LotteryLaw law = LotteryLaw::kZeroAnchored;
  // Share of interior breakpoints the rank-deficient arm may use.
  double rank_keep_fraction = 0.5;
  int threads = 0;  // 0: hardware concurrency

  void Validate() const;
};

// Default N and K schedule for the experiment, seeds 1..seed_count.
ExperimentSpec DefaultSpec(Experiment id, int seed_count = 30);

std::vector<std::string> ExperimentArms(Experiment id);

struct CellResult {
  std::string arm;
  int k = 0;
  uint64_t seed = 0;
  bool ok = false;
  std::string error;
  std::string status;
  double l2 = 0.0;
  double linf = 0.0;
  double sigma_hat = 0.0;
  int rank = 0;
  double lambda_min = 0.0;       // of Sigma_D
  double gram_lambda_min = 0.0;  // of P'P
  double seconds = 0.0;
};

struct SummaryRow {
  std::string arm;
  int k = 0;
  int runs = 0;
  int failed = 0;
  double mean_l2 = 0.0;
  double mean_linf = 0.0;
  double mean_lambda_min = 0.0;
  double mean_gram_lambda_min = 0.0;
  double mean_rank = 0.0;
};

struct ExperimentResult {
  ExperimentSpec spec;
  std::vector<CellResult> cells;     // ordered by arm, k, seed
  std::vector<SummaryRow> summary;   // ordered by arm, k
  Json metadata;

  const SummaryRow* Find(const std::string& arm, int k) const;
  std::vector<double> MeanSeries(const std::string& arm,
                                 const std::string& metric) const;
  std::vector<int> Ks(const std::string& arm) const;
};

using ProgressFn = std::function<void(const std::string& message)>;
ExperimentResult RunExperiment(const ExperimentSpec& spec,
                               const ProgressFn& progress = nullptr);

// CSV renderings (columns documented in the README). Timing is left out so
// identical specs give identical bytes.
std::string CellsCsv(const ExperimentResult& r);
std::string SummaryCsv(const ExperimentResult& r);

// Spearman rank correlation with average ranks for ties.
double SpearmanRho(const std::vector<double>& x, const std::vector<double>& y);

// Static line chart of the per-arm mean of `metric` ("l2", "linf",
// "lambda_min", "gram_lambda_min", "rank") against K.
std::string RenderSvg(const std::vector<SummaryRow>& summary,
                      const std::string& metric, const std::string& title);

// Parses a summary CSV written by SummaryCsv.
std::vector<SummaryRow> ParseSummaryCsv(const std::string& text);

}  // namespace vnm

#endif  // VNM_BENCH_BENCH_H_
