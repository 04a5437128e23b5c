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
#ifndef VNM_API_SERIALIZE_H_
#define VNM_API_SERIALIZE_H_

#include "vnm/bounds/bounds.h"
#include "vnm/core/json_io.h"
#include "vnm/decide/decide.h"
#include "vnm/design/design.h"
#include "vnm/mle/mle.h"

namespace vnm {

Json ToJson(const StructureParams& sp);
// Reads {"structure": name, "L": ..., "cbar": ...} with defaults.
StructureParams StructureFromJson(const Json& j);

// Non-finite numbers become null (JSON has no infinity).
Json FiniteOrNull(double v);

Json ToJson(const MleSolution& s);
MleSolution SolutionFromJson(const Json& j);

Json ToJson(const BoundReport& r);
Json ToJson(const OptimalSetBand& band);

Json ToJson(const Query& q);
Query QueryFromJson(const Json& j);

Json ToJson(const PortfolioSolution& s);
Json ToJson(const EquivalenceReport& r);

}  // namespace vnm

#endif  // VNM_API_SERIALIZE_H_
