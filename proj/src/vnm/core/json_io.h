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

#ifndef VNM_CORE_JSON_IO_H_
#define VNM_CORE_JSON_IO_H_

#include <string>

#include "json.hpp"
#include "vnm/core/grid.h"
#include "vnm/core/lottery.h"
#include "vnm/core/utility.h"

namespace vnm {

using Json = nlohmann::json;

Json ToJson(const Lottery& lottery);
Lottery LotteryFromJson(const Json& j);

Json ToJson(const ComparisonRecord& record);
ComparisonRecord RecordFromJson(const Json& j);

Json ToJson(const Dataset& dataset);
Dataset DatasetFromJson(const Json& j);

Json ToJson(const BreakpointGrid& grid);
BreakpointGrid GridFromJson(const Json& j);

Json ToJson(const PiecewiseUtility& u);
PiecewiseUtility UtilityFromJson(const Json& j);

// Parses text, mapping parse failures to DomainError.
Json ParseJson(const std::string& text);
Json ReadJsonFile(const std::string& path);
void WriteJsonFile(const std::string& path, const Json& j);

// Typed field access with DomainError messages naming the field.
double GetNumber(const Json& j, const std::string& key);
double GetNumber(const Json& j, const std::string& key, double fallback);

}  // namespace vnm

#endif  // VNM_CORE_JSON_IO_H_
