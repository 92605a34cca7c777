// Copyright 2026 The pmrlab Authors
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

#ifndef PMRLAB_RNG_HPP_
#define PMRLAB_RNG_HPP_

#include <cstdint>
#include <random>

namespace pmrlab {

inline constexpr uint64_t kGolden64 = 0x9e3779b97f4a7c15ULL;

inline uint64_t splitmix64(uint64_t x) {
  x += kGolden64;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives an independent stream seed from a base seed and a stream index.
// Used everywhere a sub-generator is forked (per episode, per eval grid)
// so that runs are reproducible regardless of evaluation interleaving.
inline uint64_t mix_seed(uint64_t seed, uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream + kGolden64));
}

inline uint64_t mix_seed(uint64_t seed, uint64_t a, uint64_t b) {
  return mix_seed(mix_seed(seed, a), b);
}

// Deterministic random stream over mt19937_64. All randomness in the
// project flows through this class; the standard <random> distributions
// are avoided because their outputs are not pinned across library
// implementations, while the raw engine stream is.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t next_u64() { return gen_(); }

  // Unbiased integer in [0, n). Multiply-shift with rejection.
  uint32_t uniform(uint32_t n) {
    uint64_t x = next_u64() >> 32;
    uint64_t m = x * n;
    auto lo = static_cast<uint32_t>(m);
    if (lo < n) {
      uint32_t threshold = static_cast<uint32_t>(-n) % n;
      while (lo < threshold) {
        x = next_u64() >> 32;
        m = x * n;
        lo = static_cast<uint32_t>(m);
      }
    }
    return static_cast<uint32_t>(m >> 32);
  }

  // Double in [0, 1) with 53 random bits.
  double uniform_real() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform_range(double lo, double hi) {
    return lo + (hi - lo) * uniform_real();
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace pmrlab

#endif  // PMRLAB_RNG_HPP_
