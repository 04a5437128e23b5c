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

#include "vnm/core/json_io.h"

#include <fstream>
#include <sstream>

#include "vnm/core/errors.h"

namespace vnm {

Json ToJson(const Lottery& lottery) {
  Json outcomes = Json::array();
  for (const Outcome& o : lottery.outcomes()) {
    outcomes.push_back({{"payoff", o.payoff}, {"prob", o.prob}});
  }
  return {{"outcomes", outcomes}};
}

Lottery LotteryFromJson(const Json& j) {
  if (!j.is_object() || !j.contains("outcomes") || !j["outcomes"].is_array()) {
    throw DomainError("lottery must be an object with an 'outcomes' array");
  }
  std::vector<Outcome> outcomes;
  for (const Json& o : j["outcomes"]) {
    outcomes.push_back({GetNumber(o, "payoff"), GetNumber(o, "prob")});
  }
  return Lottery::Create(std::move(outcomes));
}

Json ToJson(const ComparisonRecord& record) {
  return {{"w", ToJson(record.w)}, {"y", ToJson(record.y)}, {"z", record.z}};
}

ComparisonRecord RecordFromJson(const Json& j) {
  if (!j.is_object() || !j.contains("w") || !j.contains("y") ||
      !j.contains("z")) {
    throw DomainError("record must have fields w, y, z");
  }
  if (!j["z"].is_number_integer() || (j["z"] != 1 && j["z"] != -1)) {
    throw DomainError("record choice z must be +1 or -1");
  }
  return {LotteryFromJson(j["w"]), LotteryFromJson(j["y"]), j["z"].get<int>()};
}

Json ToJson(const Dataset& dataset) {
  Json out = Json::array();
  for (const ComparisonRecord& r : dataset) out.push_back(ToJson(r));
  return out;
}

Dataset DatasetFromJson(const Json& j) {
  if (!j.is_array()) throw DomainError("dataset must be a JSON array");
  Dataset out;
  out.reserve(j.size());
  for (const Json& r : j) out.push_back(RecordFromJson(r));
  return out;
}

Json ToJson(const BreakpointGrid& grid) {
  return {{"points", grid.points()},
          {"b_bar", grid.b_bar()},
          {"quantum", grid.quantum()}};
}

BreakpointGrid GridFromJson(const Json& j) {
  if (!j.is_object() || !j.contains("points") || !j["points"].is_array()) {
    throw DomainError("grid must have a 'points' array");
  }
  return BreakpointGrid::Create(j["points"].get<std::vector<double>>(),
                                GetNumber(j, "b_bar"),
                                GetNumber(j, "quantum", kDefaultQuantum));
}

Json ToJson(const PiecewiseUtility& u) {
  return {{"grid", ToJson(u.grid())},
          {"alpha", u.alpha()},
          {"beta", u.beta()},
          {"normalized", u.normalized()},
          {"structure", StructureName(u.promise())},
          {"lipschitz", u.lipschitz()}};
}

PiecewiseUtility UtilityFromJson(const Json& j) {
  if (!j.is_object() || !j.contains("grid") || !j.contains("alpha")) {
    throw DomainError("utility must have 'grid' and 'alpha'");
  }
  BreakpointGrid grid = GridFromJson(j["grid"]);
  auto alpha = j["alpha"].get<std::vector<double>>();
  bool normalized = j.value("normalized", false);
  Structure promise = ParseStructure(j.value("structure", std::string("none")));
  double lipschitz = j.value("lipschitz", 0.0);
  if (j.contains("beta")) {
    return PiecewiseUtility::Create(std::move(grid), std::move(alpha),
                                    j["beta"].get<std::vector<double>>(),
                                    normalized, promise, lipschitz);
  }
  return PiecewiseUtility::FromValues(std::move(grid), std::move(alpha),
                                      normalized, promise, lipschitz);
}

Json ParseJson(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw DomainError(std::string("malformed JSON: ") + e.what());
  }
}

Json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseJson(ss.str());
}

void WriteJsonFile(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write " + path);
  out << j.dump(2) << "\n";
}

double GetNumber(const Json& j, const std::string& key) {
  if (!j.is_object() || !j.contains(key) || !j[key].is_number()) {
    throw DomainError("missing or non-numeric field '" + key + "'");
  }
  return j[key].get<double>();
}

double GetNumber(const Json& j, const std::string& key, double fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return GetNumber(j, key);
}

}  // namespace vnm
