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
#include "vnm/bench/bench.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "vnm/bounds/bounds.h"
#include "vnm/bounds/info_matrix.h"
#include "vnm/core/errors.h"
#include "vnm/design/design.h"
#include "vnm/mle/mle.h"

namespace vnm {
namespace {

struct Arm {
  std::string name;
  Structure level = Structure::kFull;
  std::optional<double> fixed_sigma;
};

std::vector<Arm> Arms(Experiment id) {
  switch (id) {
    case Experiment::kSigmaVariable:
      return {{"optimized", Structure::kFull, std::nullopt},
              {"sigma_1", Structure::kFull, 1.0},
              {"sigma_100", Structure::kFull, 100.0}};
    case Experiment::kStructureLevels:
      return {{"full", Structure::kFull, std::nullopt},
              {"nolip", Structure::kNoLipschitz, std::nullopt},
              {"mono", Structure::kMonotoneOnly, std::nullopt},
              {"none", Structure::kNone, std::nullopt}};
    case Experiment::kRankEffect:
      return {{"rank_deficient", Structure::kFull, std::nullopt},
              {"full_rank", Structure::kFull, std::nullopt}};
  }
  return {};
}

Dataset Answer(const SimulatedDM& dm, const std::vector<Query>& queries,
               Rng& rng) {
  Dataset out;
  out.reserve(queries.size());
  for (const Query& q : queries) {
    int z = SampleChoice(dm, q.w, q.y, rng);
    out.push_back({q.w, q.y, z});
  }
  return out;
}

CellResult Solve(const ExperimentSpec& spec, const Arm& arm, uint64_t seed,
                 const Dataset& data, int k, const BreakpointGrid& grid,
                 const std::vector<double>& theta_star) {
  CellResult c;
  c.arm = arm.name;
  c.k = k;
  c.seed = seed;
  auto t0 = std::chrono::steady_clock::now();
  try {
    Dataset prefix(data.begin(), data.begin() + k);
    StructureParams sp;
    sp.level = arm.level;
    sp.lipschitz = spec.lipschitz;
    sp.cbar = spec.cbar;
    MleOptions opt;
    opt.fixed_sigma = arm.fixed_sigma;
    MleSolution sol = SolveMle(MakeMleProblem(prefix, grid, sp, opt));
    ErrorNorms e = EmpiricalErrors(sol.ThetaHat(), theta_star);
    c.ok = true;
    c.status = MleStatusName(sol.status);
    c.l2 = e.l2;
    c.linf = e.linf;
    c.sigma_hat = sol.sigma_hat;
    c.rank = sol.diagnostics.rank;
    c.lambda_min = sol.diagnostics.lambda_min;
    c.gram_lambda_min = k * sol.diagnostics.lambda_min;
  } catch (const std::exception& ex) {
    c.ok = false;
    c.error = ex.what();
  }
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                  .count();
  return c;
}

std::vector<CellResult> RunSeed(const ExperimentSpec& spec, uint64_t seed) {
  Rng grid_rng(Rng::StreamSeed(seed, 0));
  BreakpointGrid grid =
      RandomGrid({spec.n, spec.b_bar, spec.grid_step}, grid_rng);
  SimulatedDM dm = SimulatedDM::Cara(spec.sigma_star);
  if (spec.b_bar != kDefaultBBar) {
    const double scale = kDefaultBBar / spec.b_bar;
    dm.utility = [scale](double y) { return CaraUtility(y * scale); };
    dm.b_bar = spec.b_bar;
  }
  const std::vector<double> theta_star = TrueTheta(dm, grid);
  const int kmax = *std::max_element(spec.k_schedule.begin(), spec.k_schedule.end());
  const std::vector<Arm> arms = Arms(spec.id);
  std::vector<CellResult> out;

  if (spec.id != Experiment::kRankEffect) {
    Rng data_rng(Rng::StreamSeed(seed, 1));
    Dataset data = GenerateDataset(dm, grid, kmax, data_rng, spec.law);
    for (const Arm& arm : arms) {
      for (int k : spec.k_schedule) {
        out.push_back(Solve(spec, arm, seed, data, k, grid, theta_star));
      }
    }
    return out;
  }
  Rng q_def(Rng::StreamSeed(seed, 3));
  Rng c_def(Rng::StreamSeed(seed, 4));
  Dataset deficient = Answer(
      dm, RankDeficientDesign(grid, kmax, q_def, spec.rank_keep_fraction, spec.law)
              .queries,
      c_def);
  Dataset full;
  if (kmax >= spec.n - 1) {
    Rng q_full(Rng::StreamSeed(seed, 1));
    Rng c_full(Rng::StreamSeed(seed, 2));
    full = Answer(dm, FullRankDesign(grid, kmax, q_full, spec.law), c_full);
  }
  for (const Arm& arm : arms) {
    const bool is_full = arm.name == "full_rank";
    for (int k : spec.k_schedule) {
      if (is_full && k < spec.n - 1) continue;
      out.push_back(Solve(spec, arm, seed, is_full ? full : deficient, k, grid,
                          theta_star));
    }
  }
  return out;
}

std::string Num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  std::ostringstream s;
  s << std::setprecision(10) << v;
  return s.str();
}

std::string Quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch == '\n' ? ' ' : ch;
  }
  return out + "\"";
}

}  // namespace

std::string ExperimentName(Experiment e) {
  switch (e) {
    case Experiment::kSigmaVariable:
      return "fig2";
    case Experiment::kStructureLevels:
      return "fig3";
    case Experiment::kRankEffect:
      return "table2";
  }
  return "";
}

Experiment ParseExperiment(const std::string& name) {
  if (name == "fig2") return Experiment::kSigmaVariable;
  if (name == "fig3") return Experiment::kStructureLevels;
  if (name == "table2") return Experiment::kRankEffect;
  throw DomainError("unknown experiment '" + name + "' (expected fig2|fig3|table2)");
}

std::vector<std::string> ExperimentArms(Experiment id) {
  std::vector<std::string> out;
  for (const Arm& a : Arms(id)) out.push_back(a.name);
  return out;
}

void ExperimentSpec::Validate() const {
  if (k_schedule.empty()) throw DomainError("K schedule is empty");
  for (int k : k_schedule) {
    if (k <= 0) throw DomainError("K values must be positive");
  }
  if (n < 2) throw DomainError("N must be at least 2");
  if (seeds.empty()) throw DomainError("at least one seed is required");
  if (!(lipschitz > 0.0) || !(cbar > 0.0) || !(b_bar > 0.0) ||
      !(sigma_star > 0.0) || !(grid_step > 0.0)) {
    throw DomainError("L, cbar, b_bar, sigma* and grid step must be positive");
  }
  if (1.0 / sigma_star > cbar) {
    throw DomainError("1/sigma* exceeds cbar; the truth is outside the model");
  }
}

ExperimentSpec DefaultSpec(Experiment id, int seed_count) {
  ExperimentSpec s;
  s.id = id;
  for (int i = 1; i <= seed_count; ++i) s.seeds.push_back(i);
  switch (id) {
    case Experiment::kSigmaVariable:
      s.n = 50;
      s.k_schedule = {50, 100, 200, 400, 600, 800, 1000, 2000, 3000, 4000, 5000};
      break;
    case Experiment::kStructureLevels:
      s.n = 50;
      s.k_schedule = {400, 500, 600, 700, 800, 900, 1000, 2000, 3000, 4000, 5000};
      break;
    case Experiment::kRankEffect:
      s.n = 200;
      s.k_schedule = {50, 100, 150, 200, 250, 300, 400, 500, 600, 700, 800, 900, 1000};
      break;
  }
  return s;
}

const SummaryRow* ExperimentResult::Find(const std::string& arm, int k) const {
  for (const SummaryRow& r : summary) {
    if (r.arm == arm && r.k == k) return &r;
  }
  return nullptr;
}

std::vector<int> ExperimentResult::Ks(const std::string& arm) const {
  std::vector<int> out;
  for (const SummaryRow& r : summary) {
    if (r.arm == arm) out.push_back(r.k);
  }
  return out;
}

std::vector<double> ExperimentResult::MeanSeries(const std::string& arm,
                                                 const std::string& metric) const {
  std::vector<double> out;
  for (const SummaryRow& r : summary) {
    if (r.arm != arm) continue;
    if (metric == "l2") {
      out.push_back(r.mean_l2);
    } else if (metric == "linf") {
      out.push_back(r.mean_linf);
    } else if (metric == "lambda_min") {
      out.push_back(r.mean_lambda_min);
    } else if (metric == "gram_lambda_min") {
      out.push_back(r.mean_gram_lambda_min);
    } else if (metric == "rank") {
      out.push_back(r.mean_rank);
    } else {
      throw DomainError("unknown metric '" + metric + "'");
    }
  }
  return out;
}

ExperimentResult RunExperiment(const ExperimentSpec& spec,
                               const ProgressFn& progress) {
  spec.Validate();
  const size_t seeds = spec.seeds.size();
  std::vector<std::vector<CellResult>> per_seed(seeds);
  unsigned threads = spec.threads > 0 ? spec.threads
                                      : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, seeds);
  std::atomic<size_t> next{0};
  std::mutex progress_mu;
  auto worker = [&]() {
    for (size_t i = next++; i < seeds; i = next++) {
      per_seed[i] = RunSeed(spec, spec.seeds[i]);
      if (progress) {
        std::lock_guard<std::mutex> lock(progress_mu);
        progress(ExperimentName(spec.id) + ": seed " +
                 std::to_string(spec.seeds[i]) + " done");
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  ExperimentResult r;
  r.spec = spec;
  const std::vector<std::string> arms = ExperimentArms(spec.id);
  for (const std::string& arm : arms) {
    for (int k : spec.k_schedule) {
      SummaryRow row;
      row.arm = arm;
      row.k = k;
      for (const auto& cells : per_seed) {
        for (const CellResult& c : cells) {
          if (c.arm != arm || c.k != k) continue;
          r.cells.push_back(c);
          if (!c.ok) {
            ++row.failed;
            continue;
          }
          ++row.runs;
          row.mean_l2 += c.l2;
          row.mean_linf += c.linf;
          row.mean_lambda_min += c.lambda_min;
          row.mean_gram_lambda_min += c.gram_lambda_min;
          row.mean_rank += c.rank;
        }
      }
      if (row.runs + row.failed == 0) continue;
      if (row.runs > 0) {
        row.mean_l2 /= row.runs;
        row.mean_linf /= row.runs;
        row.mean_lambda_min /= row.runs;
        row.mean_gram_lambda_min /= row.runs;
        row.mean_rank /= row.runs;
      }
      r.summary.push_back(row);
    }
  }
  Json meta = {
      {"experiment", ExperimentName(spec.id)},
      {"n", spec.n},
      {"k_schedule", spec.k_schedule},
      {"seeds", spec.seeds},
      {"lipschitz", spec.lipschitz},
      {"cbar", spec.cbar},
      {"b_bar", spec.b_bar},
      {"sigma_star", spec.sigma_star},
      {"grid_step", spec.grid_step},
      {"lottery_law", LotteryLawName(spec.law)},
      {"arms", arms},
      {"error_metric", "theta = alpha / sigma over the grid"},
  };
  if (spec.id == Experiment::kRankEffect) {
    meta["rank_deficient_construction"] =
        "query supports restricted to 0, b_bar and a fixed random subset of "
        "round(rank_keep_fraction * (N - 2)) interior breakpoints per seed";
    meta["rank_keep_fraction"] = spec.rank_keep_fraction;
    meta["full_rank_construction"] =
        "random queries, the first N - 1 accepted only if they raise the rank";
    meta["lambda_min_scales"] =
        "lambda_min is for Sigma_D = P'P / K; gram_lambda_min is for P'P";
  }
  r.metadata = std::move(meta);
  return r;
}

std::string CellsCsv(const ExperimentResult& r) {
  std::ostringstream out;
  out << "experiment,arm,k,seed,ok,status,l2,linf,sigma_hat,rank,lambda_min,"
         "gram_lambda_min,error\n";
  const std::string exp = ExperimentName(r.spec.id);
  for (const CellResult& c : r.cells) {
    out << exp << ',' << c.arm << ',' << c.k << ',' << c.seed << ','
        << (c.ok ? 1 : 0) << ',' << c.status << ',' << Num(c.l2) << ','
        << Num(c.linf) << ',' << Num(c.sigma_hat) << ',' << c.rank << ','
        << Num(c.lambda_min) << ',' << Num(c.gram_lambda_min) << ','
        << Quote(c.error) << '\n';
  }
  return out.str();
}

std::string SummaryCsv(const ExperimentResult& r) {
  std::ostringstream out;
  out << "experiment,arm,k,runs,failed,mean_l2,mean_linf,mean_lambda_min,"
         "mean_gram_lambda_min,mean_rank\n";
  const std::string exp = ExperimentName(r.spec.id);
  for (const SummaryRow& s : r.summary) {
    out << exp << ',' << s.arm << ',' << s.k << ',' << s.runs << ','
        << s.failed << ',' << Num(s.mean_l2) << ',' << Num(s.mean_linf) << ','
        << Num(s.mean_lambda_min) << ',' << Num(s.mean_gram_lambda_min) << ','
        << Num(s.mean_rank) << '\n';
  }
  return out.str();
}

std::vector<SummaryRow> ParseSummaryCsv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("experiment,arm,k,", 0) != 0) {
    throw DomainError("not a bench summary CSV");
  }
  std::vector<SummaryRow> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 10) throw DomainError("malformed summary row: " + line);
    try {
      SummaryRow r;
      r.arm = f[1];
      r.k = std::stoi(f[2]);
      r.runs = std::stoi(f[3]);
      r.failed = std::stoi(f[4]);
      r.mean_l2 = std::stod(f[5]);
      r.mean_linf = std::stod(f[6]);
      r.mean_lambda_min = std::stod(f[7]);
      r.mean_gram_lambda_min = std::stod(f[8]);
      r.mean_rank = std::stod(f[9]);
      out.push_back(r);
    } catch (const std::logic_error&) {
      throw DomainError("malformed summary row: " + line);
    }
  }
  return out;
}

double SpearmanRho(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw DomainError("Spearman correlation needs two equal series of length >= 2");
  }
  auto ranks = [](const std::vector<double>& v) {
    std::vector<size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (size_t i = 0; i < idx.size();) {
      size_t j = i;
      while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
      double avg = 0.5 * (i + j) + 1.0;
      for (size_t m = i; m <= j; ++m) r[idx[m]] = avg;
      i = j + 1;
    }
    return r;
  };
  std::vector<double> rx = ranks(x), ry = ranks(y);
  const double n = static_cast<double>(x.size());
  double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

std::string RenderSvg(const std::vector<SummaryRow>& summary,
                      const std::string& metric, const std::string& title) {
  std::map<std::string, std::vector<std::pair<double, double>>> series;
  std::vector<std::string> order;
  for (const SummaryRow& r : summary) {
    double v = metric == "l2"                ? r.mean_l2
               : metric == "linf"            ? r.mean_linf
               : metric == "lambda_min"      ? r.mean_lambda_min
               : metric == "gram_lambda_min" ? r.mean_gram_lambda_min
               : metric == "rank"            ? r.mean_rank
                                             : std::nan("");
    if (std::isnan(v) && metric != "l2" && metric != "linf" &&
        metric != "lambda_min" && metric != "gram_lambda_min" && metric != "rank") {
      throw DomainError("unknown metric '" + metric + "'");
    }
    if (r.runs == 0 || !std::isfinite(v)) continue;
    if (!series.count(r.arm)) order.push_back(r.arm);
    series[r.arm].emplace_back(r.k, v);
  }
  const double w = 640, h = 420, ml = 70, mr = 150, mt = 40, mb = 50;
  double xmin = 1e300, xmax = -1e300, ymin = 0.0, ymax = -1e300;
  for (const auto& [arm, pts] : series) {
    for (const auto& [x, y] : pts) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (series.empty()) {
    xmin = 0;
    xmax = 1;
    ymax = 1;
  }
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + 1;
  auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (w - ml - mr); };
  auto py = [&](double y) { return h - mb - (y - ymin) / (ymax - ymin) * (h - mt - mb); };
  static const char* kColors[] = {"#1b6ca8", "#d1495b", "#00798c", "#edae49",
                                  "#66a182", "#8d96a3"};
  std::ostringstream s;
  s << std::setprecision(6);
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
    << "\" height=\"" << h << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << ml << "\" y=\"24\" font-size=\"14\">" << title << "</text>\n";
  s << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr
    << "\" y2=\"" << h - mb << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
    << h - mb << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    double yv = ymin + (ymax - ymin) * i / 4.0;
    double xv = xmin + (xmax - xmin) * i / 4.0;
    s << "<text x=\"" << ml - 6 << "\" y=\"" << py(yv) + 4
      << "\" text-anchor=\"end\">" << Num(yv) << "</text>\n";
    s << "<text x=\"" << px(xv) << "\" y=\"" << h - mb + 18
      << "\" text-anchor=\"middle\">" << Num(std::round(xv)) << "</text>\n";
  }
  s << "<text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << h - 12
    << "\" text-anchor=\"middle\">K</text>\n";
  s << "<text x=\"16\" y=\"" << (mt + h - mb) / 2 << "\" transform=\"rotate(-90 16 "
    << (mt + h - mb) / 2 << ")\" text-anchor=\"middle\">mean " << metric
    << "</text>\n";
  for (size_t i = 0; i < order.size(); ++i) {
    const char* color = kColors[i % 6];
    s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (const auto& [x, y] : series[order[i]]) s << px(x) << ',' << py(y) << ' ';
    s << "\"/>\n";
    for (const auto& [x, y] : series[order[i]]) {
      s << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3\" fill=\""
        << color << "\"/>\n";
    }
    s << "<text x=\"" << w - mr + 10 << "\" y=\"" << mt + 16 * (i + 1)
      << "\" fill=\"" << color << "\">" << order[i] << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace vnm
