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

#ifndef VNM_CORE_LOTTERY_H_
#define VNM_CORE_LOTTERY_H_

#include <vector>

namespace vnm {

inline constexpr double kProbTolerance = 1e-12;

struct Outcome {
  double payoff = 0.0;
  double prob = 0.0;
};

// Finitely supported distribution over monetary payoffs. Immutable; the
// outcomes are sorted by payoff, distinct, and carry positive probability.
class Lottery {
 public:
  // Sorts, merges equal payoffs and drops zero-mass outcomes. Probabilities
  // summing to 1 within kProbTolerance are renormalized; anything else throws
  // DomainError.
  static Lottery Create(std::vector<Outcome> outcomes);
  static Lottery Dirac(double payoff);

  const std::vector<Outcome>& outcomes() const { return outcomes_; }
  int size() const { return static_cast<int>(outcomes_.size()); }
  double min_payoff() const { return outcomes_.front().payoff; }
  double max_payoff() const { return outcomes_.back().payoff; }

  // Throws DomainError if any payoff exceeds b_bar.
  void CheckRange(double b_bar) const;

  // Two-component mixture lambda*a + (1-lambda)*b.
  static Lottery Mix(const Lottery& a, const Lottery& b, double lambda);

  bool operator==(const Lottery& other) const;

 private:
  Lottery() = default;
  std::vector<Outcome> outcomes_;
};

// z = +1 means w was chosen, z = -1 means y was chosen.
struct ComparisonRecord {
  Lottery w;
  Lottery y;
  int z = 1;
};

using Dataset = std::vector<ComparisonRecord>;

}  // namespace vnm

#endif  // VNM_CORE_LOTTERY_H_
