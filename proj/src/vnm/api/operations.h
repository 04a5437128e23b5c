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
#ifndef VNM_API_OPERATIONS_H_
#define VNM_API_OPERATIONS_H_

#include "vnm/bench/bench.h"
#include "vnm/core/json_io.h"
#include "vnm/simulate/simulate.h"

namespace vnm {

// JSON request -> JSON response operations shared by the C API and the
// service. Field names are listed in the README; errors surface as the
// exceptions of vnm/core/errors.h.

Json OpSimulate(const Json& req);
Json OpElicit(const Json& req);
Json OpBounds(const Json& req);
Json OpDesign(const Json& req);
Json OpPortfolio(const Json& req);
Json OpBench(const Json& req, const ProgressFn& progress = nullptr);
Json OpPlot(const Json& req);

// Money may be given as a JSON number or a decimal string.
double GetMoney(const Json& j, const std::string& key, double fallback);
// Shortest fixed-notation decimal string that reads back to the same double.
std::string MoneyString(double v);

// {"kind": "cara", "sigma_star": s, "b_bar": b} or
// {"kind": "utility", "utility": {...}, "sigma_star": s}.
Json TruthJson(double sigma_star, double b_bar);
SimulatedDM TruthFromJson(const Json& j);

}  // namespace vnm

#endif  // VNM_API_OPERATIONS_H_
