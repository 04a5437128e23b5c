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

#include "vnm/core/lottery.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "vnm/core/errors.h"

namespace vnm {

Lottery Lottery::Create(std::vector<Outcome> outcomes) {
  if (outcomes.empty()) throw DomainError("lottery has no outcomes");
  double total = 0.0;
  for (const Outcome& o : outcomes) {
    if (!std::isfinite(o.payoff) || o.payoff < 0.0) {
      throw DomainError("lottery payoff must be finite and >= 0, got " +
                        std::to_string(o.payoff));
    }
    if (!std::isfinite(o.prob) || o.prob < -kProbTolerance ||
        o.prob > 1.0 + kProbTolerance) {
      throw DomainError("lottery probability outside [0,1]: " +
                        std::to_string(o.prob));
    }
    total += o.prob;
  }
  if (std::fabs(total - 1.0) > kProbTolerance) {
    throw DomainError("lottery probabilities sum to " + std::to_string(total) +
                      ", not 1");
  }
  std::sort(outcomes.begin(), outcomes.end(),
            [](const Outcome& a, const Outcome& b) {
              return a.payoff < b.payoff;
            });
  Lottery lottery;
  for (const Outcome& o : outcomes) {
    double p = std::clamp(o.prob, 0.0, 1.0) / total;
    if (p <= 0.0) continue;
    if (!lottery.outcomes_.empty() &&
        lottery.outcomes_.back().payoff == o.payoff) {
      lottery.outcomes_.back().prob += p;
    } else {
      lottery.outcomes_.push_back({o.payoff, p});
    }
  }
  if (lottery.outcomes_.empty()) throw DomainError("lottery has zero mass");
  return lottery;
}

Lottery Lottery::Dirac(double payoff) { return Create({{payoff, 1.0}}); }

void Lottery::CheckRange(double b_bar) const {
  if (max_payoff() > b_bar) {
    throw DomainError("payoff " + std::to_string(max_payoff()) +
                      " exceeds upper bound " + std::to_string(b_bar));
  }
}

Lottery Lottery::Mix(const Lottery& a, const Lottery& b, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw DomainError("mixture weight outside [0,1]");
  }
  std::vector<Outcome> out;
  for (const Outcome& o : a.outcomes_) out.push_back({o.payoff, lambda * o.prob});
  for (const Outcome& o : b.outcomes_) {
    out.push_back({o.payoff, (1.0 - lambda) * o.prob});
  }
  double total = 0.0;
  for (const Outcome& o : out) total += o.prob;
  for (Outcome& o : out) o.prob /= total;
  return Create(std::move(out));
}

bool Lottery::operator==(const Lottery& other) const {
  if (outcomes_.size() != other.outcomes_.size()) return false;
  for (size_t i = 0; i < outcomes_.size(); ++i) {
    if (outcomes_[i].payoff != other.outcomes_[i].payoff ||
        outcomes_[i].prob != other.outcomes_[i].prob) {
      return false;
    }
  }
  return true;
}

}  // namespace vnm
