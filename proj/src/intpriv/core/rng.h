// Copyright 2026 The Interval Privacy Authors.
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

#ifndef INTPRIV_CORE_RNG_H_
#define INTPRIV_CORE_RNG_H_

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace intpriv {

// SplitMix64 finalizer; used to expand seeds and to derive stream keys.
constexpr uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives the seed of an independent stream from a master seed and a path of
// indices (replication, record, round, ...). The result depends only on the
// arguments, never on scheduling, so parallel loops stay reproducible.
inline uint64_t DeriveSeed(uint64_t master, std::initializer_list<uint64_t> path) {
  uint64_t h = SplitMix64(master);
  for (uint64_t p : path) h = SplitMix64(h ^ SplitMix64(p + 0x632be59bd9b4e019ULL));
  return h;
}

// xoshiro256** generator with the handful of variate transforms the library
// needs. All transforms are implemented here rather than through
// <random> distributions so that streams are identical across standard
// library implementations.
class Rng {
 public:
  explicit Rng(uint64_t seed) {
    uint64_t x = seed;
    for (auto& s : s_) {
      x = SplitMix64(x);
      s = x;
    }
  }

  uint64_t NextU64() {
    const uint64_t result = Rotl(s_[1] * 5, 7) * 9;
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = Rotl(s_[3], 45);
    return result;
  }

  // Uniform on the open interval (0, 1); safe to feed to quantile functions.
  double Uniform01() {
    return (static_cast<double>(NextU64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double Uniform(double a, double b) { return a + (b - a) * Uniform01(); }

  bool Bernoulli(double p) { return Uniform01() < p; }

  // Box-Muller; the second variate of each pair is cached.
  double StandardNormal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = Uniform01();
    const double u2 = Uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  double Normal(double mean, double sd) { return mean + sd * StandardNormal(); }

  double Logistic(double loc, double scale) {
    const double u = Uniform01();
    return loc + scale * std::log(u / (1.0 - u));
  }

  // Uniform integer in [0, n).
  uint64_t Below(uint64_t n) {
    return static_cast<uint64_t>(Uniform01() * static_cast<double>(n)) % n;
  }

 private:
  static constexpr uint64_t Rotl(uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  uint64_t s_[4];
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace intpriv

#endif  // INTPRIV_CORE_RNG_H_
