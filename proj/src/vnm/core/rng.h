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

#ifndef VNM_CORE_RNG_H_
#define VNM_CORE_RNG_H_

#include <cstdint>
#include <random>

namespace vnm {

// Seedable 64-bit generator (std::mt19937_64, whose output sequence is fixed
// by the C++ standard) with portable conversions to uniform reals and
// integers. Substreams are derived by hashing (seed, stream id) with
// SplitMix64, so independent streams never share state.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(Mix(seed)) {}

  // Seed of substream `stream` of a generator seeded with `seed`.
  static uint64_t StreamSeed(uint64_t seed, uint64_t stream) {
    return Mix(seed ^ Mix(stream + 0x632be59bd9b4e019ULL));
  }

  uint64_t Next() { return engine_(); }
  // Uniform on [0, 1), 53 random bits.
  double Uniform() { return static_cast<double>(Next() >> 11) * 0x1.0p-53; }
  // Uniform on (0, 1).
  double UniformOpen() {
    double u;
    do {
      u = Uniform();
    } while (u == 0.0);
    return u;
  }
  // Unbiased integer in [0, n).
  uint64_t Below(uint64_t n);

  static uint64_t Mix(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

 private:
  std::mt19937_64 engine_;
};

inline uint64_t Rng::Below(uint64_t n) {
  if (n <= 1) return 0;
  const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  uint64_t x;
  do {
    x = Next();
  } while (x >= limit);
  return x % n;
}

}  // namespace vnm

#endif  // VNM_CORE_RNG_H_
