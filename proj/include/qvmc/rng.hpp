// Copyright 2026 The qvmc Authors
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

#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace qvmc {

/// Counter-based stream splitting: a stream is addressed by
/// (master seed, purpose tag, index), so concurrent consumers draw from
/// disjoint, scheduling-independent streams. The generator is xoshiro256**
/// seeded through splitmix64; all variate code is self-contained so output
/// bytes do not depend on the standard library implementation.
class RngStream {
 public:
  RngStream(std::uint64_t master, std::string_view purpose, std::uint64_t index) {
    std::uint64_t x = mix(master ^ 0x5851f42d4c957f2dULL);
    for (char c : purpose) x = mix(x ^ static_cast<std::uint64_t>(static_cast<unsigned char>(c)));
    x = mix(x ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
    std::uint64_t sm = x;
    for (auto& si : s_) {
      sm += 0x9e3779b97f4a7c15ULL;
      si = mix(sm);
    }
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). Requires n >= 1.
  std::uint64_t uniform_int(std::uint64_t n) {
    // rejection to kill modulo bias
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

  /// Standard normal via Box-Muller; one spare cached per stream.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1, u2;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  /// Uniform spin value, +1 or -1.
  int spin() { return (next_u64() >> 63) ? 1 : -1; }

  bool bernoulli(double prob) { return uniform() < prob; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

  std::uint64_t s_[4];
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace qvmc
