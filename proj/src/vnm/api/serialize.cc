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
#include "vnm/api/serialize.h"

#include <cmath>
#include <limits>

#include "vnm/core/errors.h"

namespace vnm {

Json FiniteOrNull(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

Json ToJson(const StructureParams& sp) {
  return {{"structure", StructureName(sp.level)},
          {"L", sp.lipschitz},
          {"cbar", sp.cbar}};
}

StructureParams StructureFromJson(const Json& j) {
  StructureParams sp;
  if (j.is_object()) {
    if (j.contains("structure")) {
      if (!j["structure"].is_string()) {
        throw DomainError("'structure' must be full|nolip|mono|none");
      }
      sp.level = ParseStructure(j["structure"].get<std::string>());
    }
    sp.lipschitz = GetNumber(j, "L", sp.lipschitz);
    sp.cbar = GetNumber(j, "cbar", sp.cbar);
  }
  sp.Validate();
  return sp;
}

Json ToJson(const MleSolution& s) {
  const MleDiagnostics& d = s.diagnostics;
  Json out = {
      {"status", MleStatusName(s.status)},
      {"gamma_star", s.gamma_star},
      {"sigma_hat", FiniteOrNull(s.sigma_hat)},
      {"loglik", s.loglik},
      {"grid", ToJson(s.grid)},
      {"alpha_bar", s.alpha_bar},
      {"theta_hat", s.ThetaHat()},
      {"parameters", ToJson(s.structure)},
      {"diagnostics",
       {{"k", d.k},
        {"rank", d.rank},
        {"lambda_min", d.lambda_min},
        {"gram_lambda_min", d.k * d.lambda_min},
        {"eigenvalues", d.eigenvalues},
        {"gamma_zero_tol", d.gamma_zero_tol},
        {"iterations", d.iterations},
        {"gap", d.gap},
        {"dual_residual", d.dual_residual},
        {"solver_message", d.solver_message},
        {"separation_detected", d.separation_detected},
        {"cleanup_adjustment", d.cleanup_adjustment},
        {"box_active", d.box_active},
        {"sigma_fixed", d.sigma_fixed}}},
  };
  if (s.utility) {
    out["utility"] = ToJson(*s.utility);
    out["alpha"] = s.utility->alpha();
    out["beta"] = s.utility->beta();
  } else {
    out["utility"] = nullptr;
  }
  return out;
}

MleSolution SolutionFromJson(const Json& j) {
  if (!j.is_object() || !j.contains("status") || !j.contains("grid")) {
    throw DomainError("solution JSON needs 'status' and 'grid'");
  }
  MleSolution s{GridFromJson(j["grid"]),
                StructureFromJson(j.value("parameters", Json::object()))};
  s.status = ParseMleStatus(j["status"].get<std::string>());
  s.gamma_star = GetNumber(j, "gamma_star");
  s.sigma_hat = j.contains("sigma_hat") && j["sigma_hat"].is_number()
                    ? j["sigma_hat"].get<double>()
                    : std::numeric_limits<double>::infinity();
  s.loglik = GetNumber(j, "loglik", 0.0);
  if (j.contains("alpha_bar")) {
    s.alpha_bar = j["alpha_bar"].get<std::vector<double>>();
  }
  if (j.contains("utility") && !j["utility"].is_null()) {
    s.utility = UtilityFromJson(j["utility"]);
  }
  if (j.contains("diagnostics")) {
    const Json& d = j["diagnostics"];
    MleDiagnostics& g = s.diagnostics;
    g.k = d.value("k", 0);
    g.rank = d.value("rank", 0);
    g.lambda_min = d.value("lambda_min", 0.0);
    g.eigenvalues = d.value("eigenvalues", std::vector<double>{});
    g.gamma_zero_tol = d.value("gamma_zero_tol", 0.0);
    g.iterations = d.value("iterations", 0);
    g.gap = d.value("gap", 0.0);
    g.dual_residual = d.value("dual_residual", 0.0);
    g.solver_message = d.value("solver_message", std::string());
    g.separation_detected = d.value("separation_detected", false);
    g.cleanup_adjustment = d.value("cleanup_adjustment", 0.0);
    g.box_active = d.value("box_active", false);
    g.sigma_fixed = d.value("sigma_fixed", false);
  }
  return s;
}

Json ToJson(const BoundReport& r) {
  return {{"delta", r.delta},
          {"lambda", r.lambda},
          {"lambda_auto", r.lambda_auto},
          {"regime", RegimeName(r.regime)},
          {"rank", r.rank},
          {"k", r.k},
          {"log_omega", r.log_omega},
          {"omega", r.omega},
          {"weighted_norm_bound", FiniteOrNull(r.weighted_norm_bound)},
          {"log_weighted_norm_bound", r.log_weighted_norm_bound},
          {"l2_bound", FiniteOrNull(r.l2_bound)},
          {"log_l2_bound", r.log_l2_bound},
          {"linf_bound", FiniteOrNull(r.linf_bound)},
          {"kolmogorov_bound", FiniteOrNull(r.kolmogorov_bound)},
          {"log_kolmogorov_bound", r.log_kolmogorov_bound},
          {"lambda_min_regularized", r.lambda_min_regularized},
          {"vacuous", r.vacuous}};
}

Json ToJson(const OptimalSetBand& band) {
  Json lower = Json::array();
  const BreakpointGrid& g = band.lower().grid();
  for (int j = 0; j < g.size(); ++j) lower.push_back({g[j], band.lower().alpha()[j]});
  Json upper = Json::array();
  for (const auto& [x, v] : band.UpperPolyline()) upper.push_back({x, v});
  return {{"lower", lower}, {"upper", upper}};
}

Json ToJson(const Query& q) {
  return {{"w", ToJson(q.w)}, {"y", ToJson(q.y)}};
}

Query QueryFromJson(const Json& j) {
  if (!j.is_object() || !j.contains("w") || !j.contains("y")) {
    throw DomainError("query must have fields w and y");
  }
  return {LotteryFromJson(j["w"]), LotteryFromJson(j["y"])};
}

Json ToJson(const PortfolioSolution& s) {
  return {{"allocation", std::vector<double>(s.x.data(), s.x.data() + s.x.size())},
          {"objective", s.objective},
          {"lp_value", s.lp_value},
          {"iterations", s.iterations}};
}

Json ToJson(const EquivalenceReport& r) {
  return {{"quantile", r.quantile},
          {"eu_value", r.eu_value},
          {"par_value", r.par_value},
          {"prar_value", r.prar_value},
          {"par_offset_error", r.par_offset_error},
          {"prar_offset_error", r.prar_offset_error},
          {"equivalent", r.equivalent}};
}

}  // namespace vnm
