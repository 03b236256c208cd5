// Copyright 2026 The PMGA Authors
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

#ifndef PMGA_RNG_H_
#define PMGA_RNG_H_

#include <cstdint>
#include <span>

namespace pmga {

// 64-bit finalizer (murmur3-style). Used to key independent streams.
inline std::uint64_t HashMix(std::uint64_t z) {
  z ^= z >> 33;
  z *= 0xff51afd7ed558ccdULL;
  z ^= z >> 33;
  z *= 0xc4ceb9fe1a85ec53ULL;
  z ^= z >> 33;
  return z;
}

inline std::uint64_t HashCombine(std::uint64_t a, std::uint64_t b) {
  return HashMix(a ^ (HashMix(b) + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2)));
}

// Stream-domain tags. Distinct tags give independent streams for the same
// (seed, index) pair.
inline constexpr std::uint64_t kDomainPopulation = 0xA1;
inline constexpr std::uint64_t kDomainQuery = 0xA2;
inline constexpr std::uint64_t kDomainValueNoise = 0xA3;
inline constexpr std::uint64_t kDomainRg = 0xA4;
inline constexpr std::uint64_t kDomainTrial = 0xA5;

// Counter-based splittable generator (splitmix64 core). A stream is a pure
// function of its key, so per-user streams derived as
// RngStream::Derive(seed, user_index, domain) are independent of iteration
// order and thread count.
class RngStream {
 public:
  explicit RngStream(std::uint64_t key)
      : state_(HashMix(key ^ 0x853c49e6748fea9bULL)) {}

  static RngStream Derive(std::uint64_t seed, std::uint64_t a,
                          std::uint64_t b = 0) {
    return RngStream(HashCombine(HashCombine(seed, a), b));
  }

  std::uint64_t NextU64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1).
  double NextDouble() {
    return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
  }

  bool Bernoulli(double p) { return NextDouble() < p; }

  // Uniform integer in [0, n). Rejection sampling keeps the draw exact.
  std::uint64_t Below(std::uint64_t n) {
    const std::uint64_t threshold = (-n) % n;
    for (;;) {
      const std::uint64_t r = NextU64();
      if (r >= threshold) return r % n;
    }
  }

  // Index sampled according to `probs` (need not be exactly normalized; the
  // tail index absorbs rounding).
  int SampleDiscrete(std::span<const double> probs) {
    const double u = NextDouble();
    double cum = 0.0;
    for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
      cum += probs[i];
      if (u < cum) return static_cast<int>(i);
    }
    return static_cast<int>(probs.size()) - 1;
  }

 private:
  std::uint64_t state_;
};

}  // namespace pmga

#endif  // PMGA_RNG_H_
