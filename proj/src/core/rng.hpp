// Copyright 2026 The lotdepth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LOTDEPTH_CORE_RNG_HPP_
#define LOTDEPTH_CORE_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace lotdepth {

// splitmix64 finalizer; used to derive child seeds from a parent seed.
inline std::uint64_t MixSeed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed-derivation tree: child = mix(mix(parent) ^ stream). Every stochastic
// step of a run gets its own stream id so that steps stay independent.
inline std::uint64_t DeriveSeed(std::uint64_t parent, std::uint64_t stream) {
  return MixSeed(MixSeed(parent) ^ (stream * 0xd1b54a32d192ed03ULL));
}

// Well-known stream ids.
namespace seed_stream {
inline constexpr std::uint64_t kReference = 1;
inline constexpr std::uint64_t kSynthetic = 2;
inline constexpr std::uint64_t kRepetition = 3;
inline constexpr std::uint64_t kSubsample = 4;
}  // namespace seed_stream

// std::mt19937_64 with portable uniform/normal transforms (the standard
// distributions are implementation-defined, which would break
// cross-platform reproducibility).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextU64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0, 1].
  double UniformOpenLow() { return 1.0 - Uniform(); }

  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Standard normal via Box-Muller; the second variate is cached.
  double Normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    const double r = std::sqrt(-2.0 * std::log(UniformOpenLow()));
    const double theta = 2.0 * std::numbers::pi * Uniform();
    cached_ = r * std::sin(theta);
    has_cached_ = true;
    return r * std::cos(theta);
  }

  // Uniform integer in [0, n).
  std::uint64_t Below(std::uint64_t n) {
    // Rejection sampling keeps this unbiased.
    const std::uint64_t limit = (~std::uint64_t{0}) - (~std::uint64_t{0}) % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace lotdepth

#endif  // LOTDEPTH_CORE_RNG_HPP_
