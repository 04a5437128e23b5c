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
#include "vnm/api/operations.h"

#include <charconv>
#include <cmath>

#include "vnm/api/serialize.h"
#include "vnm/bounds/bounds.h"
#include "vnm/core/errors.h"
#include "vnm/decide/decide.h"
#include "vnm/design/design.h"
#include "vnm/mle/mle.h"

namespace vnm {
namespace {

int GetInt(const Json& j, const std::string& key, int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_integer()) {
    throw DomainError("field '" + key + "' must be an integer");
  }
  return j[key].get<int>();
}

uint64_t GetSeed(const Json& j) {
  if (!j.contains("seed")) return 0;
  if (!j["seed"].is_number_integer()) throw DomainError("'seed' must be an integer");
  return j["seed"].get<uint64_t>();
}

LotteryLaw GetLaw(const Json& j) {
  return ParseLotteryLaw(j.value("lottery_law", std::string("zero")));
}

BreakpointGrid GridFor(const Json& req, Rng* rng) {
  if (req.contains("grid")) return GridFromJson(req["grid"]);
  GridSpec spec;
  spec.n = GetInt(req, "N", spec.n);
  spec.b_bar = GetMoney(req, "b_bar", spec.b_bar);
  spec.step = GetNumber(req, "step", spec.step);
  if (rng == nullptr) throw DomainError("request needs a 'grid'");
  return RandomGrid(spec, *rng);
}

Json QueriesJson(const std::vector<Query>& qs) {
  Json out = Json::array();
  for (const Query& q : qs) out.push_back(ToJson(q));
  return out;
}

const Json& Require(const Json& j, const std::string& key) {
  if (!j.is_object() || !j.contains(key)) {
    throw DomainError("request is missing '" + key + "'");
  }
  return j[key];
}

}  // namespace

double GetMoney(const Json& j, const std::string& key, double fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  const Json& v = j[key];
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string& s = v.get_ref<const std::string&>();
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out)) {
      return out;
    }
  }
  throw DomainError("field '" + key + "' must be a decimal amount");
}

std::string MoneyString(double v) {
  char buf[400];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed);
  return std::string(buf, ptr);
}

namespace {

std::string NumberString(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

Json TruthJson(double sigma_star, double b_bar) {
  return {{"kind", "cara"}, {"sigma_star", sigma_star}, {"b_bar", b_bar}};
}

SimulatedDM TruthFromJson(const Json& j) {
  const std::string kind = j.value("kind", std::string("cara"));
  SimulatedDM dm = SimulatedDM::Cara(GetNumber(j, "sigma_star", 10.0));
  if (kind == "cara") {
    const double b_bar = GetMoney(j, "b_bar", kDefaultBBar);
    if (!(b_bar > 0.0)) throw DomainError("truth b_bar must be positive");
    if (b_bar != kDefaultBBar) {
      const double scale = kDefaultBBar / b_bar;
      dm.utility = [scale](double y) { return CaraUtility(y * scale); };
      dm.b_bar = b_bar;
    }
  } else if (kind == "utility") {
    auto u = std::make_shared<PiecewiseUtility>(UtilityFromJson(Require(j, "utility")));
    dm.utility = [u](double y) { return u->Eval(y); };
    dm.b_bar = u->grid().b_bar();
  } else {
    throw DomainError("unknown truth kind '" + kind + "' (expected cara|utility)");
  }
  dm.Validate();
  return dm;
}

Json OpSimulate(const Json& req) {
  const uint64_t seed = GetSeed(req);
  const int k = GetInt(req, "K", 100);
  const double sigma_star = GetNumber(req, "sigma_star", 10.0);
  const double b_bar = GetMoney(req, "b_bar", kDefaultBBar);
  Json truth = TruthJson(sigma_star, b_bar);
  SimulatedDM dm = TruthFromJson(truth);
  Rng grid_rng(Rng::StreamSeed(seed, 0));
  BreakpointGrid grid = GridFor(req, &grid_rng);
  if (grid.b_bar() != b_bar) throw DomainError("grid b_bar differs from b_bar");
  Rng data_rng(Rng::StreamSeed(seed, 1));
  Dataset data = GenerateDataset(dm, grid, k, data_rng, GetLaw(req));
  return {{"dataset", ToJson(data)},
          {"grid", ToJson(grid)},
          {"truth", truth},
          {"theta_star", TrueTheta(dm, grid)}};
}

Json OpElicit(const Json& req) {
  Dataset data = DatasetFromJson(Require(req, "dataset"));
  BreakpointGrid grid =
      req.contains("grid")
          ? GridFromJson(req["grid"])
          : BuildGrid(data, GetMoney(req, "b_bar", kDefaultBBar),
                      GetNumber(req, "quantum", kDefaultQuantum));
  StructureParams sp = StructureFromJson(req);
  MleOptions opt;
  if (req.contains("fixed_sigma") && !req["fixed_sigma"].is_null()) {
    opt.fixed_sigma = GetNumber(req, "fixed_sigma");
  }
  MleSolution sol = SolveMle(MakeMleProblem(data, grid, sp, opt));
  Json out = ToJson(sol);
  if (sol.status == MleStatus::kUnique &&
      (sp.level == Structure::kFull || sp.level == Structure::kNoLipschitz)) {
    out["band"] = ToJson(ComputeOptimalSetBand(sol));
  } else {
    out["band"] = nullptr;
  }
  if (sp.level != Structure::kNone && req.value("rationalizability", true)) {
    RationalizabilityResult r = CheckRationalizability(data, grid, sp);
    out["rationalizability"] = {
        {"verdict", r.verdict == Rationalizability::kGammaZero ? "gamma_zero"
                                                               : "gamma_positive"},
        {"lp_value", r.lp_value},
        {"by_sufficient_condition", r.by_sufficient_condition}};
  }
  return out;
}

Json OpBounds(const Json& req) {
  MleSolution sol = SolutionFromJson(Require(req, "solution"));
  const int n = sol.grid.size();
  InfoMatrix info;
  info.k = sol.diagnostics.k;
  info.rank = sol.diagnostics.rank;
  info.eigenvalues = sol.diagnostics.eigenvalues;
  info.lambda_min = sol.diagnostics.lambda_min;
  if (info.k < 1 || static_cast<int>(info.eigenvalues.size()) != n - 1) {
    throw DomainError("solution lacks the information-matrix spectrum");
  }
  BoundInputs in;
  in.n = n;
  in.delta = GetNumber(req, "delta", 0.05);
  if (req.contains("lambda") && !(req["lambda"].is_string() &&
                                  req["lambda"].get<std::string>() == "auto")) {
    in.lambda = GetNumber(req, "lambda");
  }
  in.cbar = GetNumber(req, "cbar", sol.structure.cbar);
  in.lipschitz = GetNumber(req, "L", sol.structure.lipschitz);
  in.mesh = sol.grid.Mesh();
  BoundReport rep = TheoreticalBounds(info, in);
  Json out = {{"bounds", ToJson(rep)}};
  std::string header = "k,n,rank,delta,lambda,log_omega,l2_bound,linf_bound,kolmogorov_bound,vacuous";
  std::string row = std::to_string(info.k) + "," + std::to_string(n) + "," +
                    std::to_string(info.rank) + "," + NumberString(rep.delta) +
                    "," + NumberString(rep.lambda) + "," +
                    NumberString(rep.log_omega) + "," + NumberString(rep.l2_bound) +
                    "," + NumberString(rep.linf_bound) + "," +
                    NumberString(rep.kolmogorov_bound) + "," +
                    (rep.vacuous ? "1" : "0");
  if (req.contains("truth") && !req["truth"].is_null()) {
    SimulatedDM dm = TruthFromJson(req["truth"]);
    std::vector<double> theta_star = TrueTheta(dm, sol.grid);
    std::vector<double> theta_hat = sol.ThetaHat();
    ErrorNorms e = EmpiricalErrors(theta_hat, theta_star);
    PiecewiseUtility est = PiecewiseUtility::FromValues(sol.grid, theta_hat, false,
                                                        Structure::kNone);
    PiecewiseUtility tru = PiecewiseUtility::FromValues(sol.grid, theta_star, false,
                                                        Structure::kNone);
    double dk = KolmogorovDistance(est, tru);
    out["errors"] = {{"l2", e.l2},
                     {"linf", e.linf},
                     {"kolmogorov", dk},
                     {"within_l2_bound", e.l2 <= rep.l2_bound}};
    header += ",l2,linf,kolmogorov";
    row += "," + NumberString(e.l2) + "," + NumberString(e.linf) + "," + NumberString(dk);
  }
  out["csv"] = header + "\n" + row + "\n";
  return out;
}

Json OpDesign(const Json& req) {
  const std::string mode = req.value("mode", std::string("random"));
  const uint64_t seed = GetSeed(req);
  const double amplitude = GetNumber(req, "amplitude", kDefaultAmplitude);
  Json out = {{"mode", mode}};
  if (mode == "multiround") {
    const int rounds = GetInt(req, "rounds", 3);
    if (rounds < 0) throw DomainError("rounds must be non-negative");
    DesignState st = DesignState::Start(GetMoney(req, "b_bar", kDefaultBBar),
                                        GetNumber(req, "quantum", kDefaultQuantum),
                                        amplitude);
    Json qs = Json::array();
    Json plans = Json::array();
    bool complete = false;
    for (int r = 0; r < rounds; ++r) {
      std::optional<RoundPlan> plan = MultiRoundStep(st);
      if (!plan) {
        complete = true;
        break;
      }
      for (size_t i = 0; i < plan->queries.size(); ++i) {
        Json q = ToJson(plan->queries[i]);
        q["round"] = plan->round;
        q["kind"] = i + 1 == plan->queries.size() ? "exploration" : "orthogonal";
        qs.push_back(q);
      }
      plans.push_back({{"round", plan->round},
                       {"n_r", plan->n_r},
                       {"queries", plan->queries.size()},
                       {"new_breakpoint", plan->new_breakpoint}});
    }
    out["queries"] = qs;
    out["rounds"] = plans;
    out["grid"] = ToJson(st.grid);
    out["design_complete"] = complete || !NextBreakpoint(st.grid);
    return out;
  }
  Rng grid_rng(Rng::StreamSeed(seed, 0));
  BreakpointGrid grid = GridFor(req, &grid_rng);
  Rng rng(Rng::StreamSeed(seed, 1));
  const int count = GetInt(req, "K", 100);
  if (mode == "random") {
    out["queries"] = QueriesJson(RandomQueries(grid, count, rng, GetLaw(req)));
  } else if (mode == "fullrank") {
    out["queries"] = QueriesJson(FullRankDesign(grid, count, rng, GetLaw(req)));
  } else if (mode == "rankdeficient") {
    auto r = RankDeficientDesign(grid, count, rng,
                                 GetNumber(req, "keep_fraction", 0.5), GetLaw(req));
    out["queries"] = QueriesJson(r.queries);
    out["support"] = r.support;
  } else if (mode == "direction") {
    auto d = Require(req, "direction").get<std::vector<double>>();
    Query q = DirectionToQuery(Eigen::Map<Eigen::VectorXd>(d.data(), d.size()),
                               grid, amplitude);
    out["queries"] = Json::array({ToJson(q)});
  } else {
    throw DomainError("unknown design mode '" + mode +
                      "' (expected random|fullrank|rankdeficient|multiround|direction)");
  }
  out["grid"] = ToJson(grid);
  return out;
}

Json OpPortfolio(const Json& req) {
  double sigma = 0.0;
  std::optional<PiecewiseUtility> u;
  if (req.contains("solution")) {
    MleSolution sol = SolutionFromJson(req["solution"]);
    const bool ok_status = sol.status == MleStatus::kUnique ||
                           sol.status == MleStatus::kSeparationAtBound ||
                           (req.value("allow_nonunique", false) &&
                            sol.status == MleStatus::kNonUniqueRankDeficient);
    if (!ok_status || !sol.utility) {
      throw StateError("estimate status " + MleStatusName(sol.status) +
                       " carries no usable utility; collect more or different "
                       "answers and re-estimate");
    }
    u = *sol.utility;
    sigma = sol.sigma_hat;
  } else {
    u = UtilityFromJson(Require(req, "utility"));
  }
  sigma = GetNumber(req, "sigma", sigma);
  if (!(sigma > 0.0)) throw DomainError("portfolio report needs sigma > 0");
  Eigen::MatrixXd scen;
  if (req.contains("scenarios_csv")) {
    scen = ParseScenarioCsv(req["scenarios_csv"].get<std::string>());
  } else {
    auto rows = Require(req, "scenarios").get<std::vector<std::vector<double>>>();
    if (rows.empty()) throw DomainError("no scenarios");
    scen.resize(rows.size(), rows[0].size());
    for (size_t t = 0; t < rows.size(); ++t) {
      if (rows[t].size() != rows[0].size()) throw DomainError("ragged scenarios");
      for (size_t a = 0; a < rows[t].size(); ++a) scen(t, a) = rows[t][a];
    }
  }
  std::vector<double> caps(scen.cols() - 1, 1.0);
  if (req.contains("caps") && !req["caps"].is_null()) {
    caps = req["caps"].get<std::vector<double>>();
  }
  PortfolioProblem p{scen, GetMoney(req, "budget", 0.0), caps, *u};
  PortfolioSolution s = OptimizePortfolio(p);
  const double delta = GetNumber(req, "delta", 0.05);
  EquivalenceReport eq = EquivalenceCheck(p, s, delta, sigma);
  Json out = ToJson(s);
  out["delta"] = delta;
  out["sigma"] = sigma;
  out["par"] = eq.par_value;
  out["prar"] = eq.prar_value;
  out["equivalence"] = ToJson(eq);
  return out;
}

Json OpBench(const Json& req, const ProgressFn& progress) {
  Experiment id = ParseExperiment(Require(req, "experiment").get<std::string>());
  ExperimentSpec spec = DefaultSpec(id, 30);
  if (req.contains("seeds")) {
    const Json& s = req["seeds"];
    if (s.is_number_integer()) {
      int count = s.get<int>();
      if (count < 1) throw DomainError("seeds must be positive");
      spec.seeds.clear();
      for (int i = 1; i <= count; ++i) spec.seeds.push_back(i);
    } else {
      spec.seeds = s.get<std::vector<uint64_t>>();
    }
  }
  if (req.contains("k_schedule")) spec.k_schedule = req["k_schedule"].get<std::vector<int>>();
  spec.n = GetInt(req, "N", spec.n);
  spec.threads = GetInt(req, "threads", spec.threads);
  spec.lipschitz = GetNumber(req, "L", spec.lipschitz);
  spec.cbar = GetNumber(req, "cbar", spec.cbar);
  spec.sigma_star = GetNumber(req, "sigma_star", spec.sigma_star);
  spec.rank_keep_fraction = GetNumber(req, "rank_keep_fraction", spec.rank_keep_fraction);
  spec.law = GetLaw(req);
  ExperimentResult r = RunExperiment(spec, progress);
  Json summary = Json::array();
  for (const SummaryRow& s : r.summary) {
    summary.push_back({{"arm", s.arm},
                       {"k", s.k},
                       {"runs", s.runs},
                       {"failed", s.failed},
                       {"mean_l2", s.mean_l2},
                       {"mean_linf", s.mean_linf},
                       {"mean_lambda_min", s.mean_lambda_min},
                       {"mean_gram_lambda_min", s.mean_gram_lambda_min},
                       {"mean_rank", s.mean_rank}});
  }
  return {{"metadata", r.metadata},
          {"summary", summary},
          {"summary_csv", SummaryCsv(r)},
          {"cells_csv", CellsCsv(r)}};
}

Json OpPlot(const Json& req) {
  std::vector<SummaryRow> rows =
      ParseSummaryCsv(Require(req, "summary_csv").get<std::string>());
  const std::string metric = req.value("metric", std::string("l2"));
  const std::string title = req.value("title", "mean " + metric + " by K");
  return {{"svg", RenderSvg(rows, metric, title)}};
}

}  // namespace vnm
