// Copyright 2026 the sketchif authors
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

#ifndef SKETCHIF_RNG_HPP
#define SKETCHIF_RNG_HPP

#include <cmath>
#include <cstdint>

namespace sketchif {

// Counter-based random stream built on the SplitMix64 avalanche mix.
// Every random value in the library is a pure function of (key, index),
// so realizations are order-independent and identical under any thread
// schedule. Constants are the standard SplitMix64 ones:
//   increment 0x9e3779b97f4a7c15, multipliers 0xbf58476d1ce4e5b9 and
//   0x94d049bb133111eb, shifts 30/27/31.

inline constexpr std::uint64_t kSplitMixIncrement = 0x9e3779b97f4a7c15ULL;

/// SplitMix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Random 64-bit word at position `index` of the stream keyed by `key`.
inline std::uint64_t rand_u64_at(std::uint64_t key, std::uint64_t index) {
  return mix64(key + (index + 1) * kSplitMixIncrement);
}

/// Derives a child stream key. Used for (seed, column), (seed, probe-id),
/// (probe key, trial) and similar splits; chaining derive_key is the
/// documented seed-mixing contract for parallel trials.
inline std::uint64_t derive_key(std::uint64_t key, std::uint64_t id) {
  return mix64(key ^ rand_u64_at(key, id));
}

/// Uniform double in [0, 1) with 53 random mantissa bits.
inline double uniform01_at(std::uint64_t key, std::uint64_t index) {
  return static_cast<double>(rand_u64_at(key, index) >> 11) * 0x1.0p-53;
}

/// Standard normal from two random words (Box-Muller, cosine branch).
inline double normal_from_words(std::uint64_t w1, std::uint64_t w2) {
  // u1 in (0, 1] so the log is finite.
  const double u1 = (static_cast<double>(w1 >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = static_cast<double>(w2 >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * 3.14159265358979323846 * u2);
}

/// Standard normal at logical position `index`; consumes the counter pair
/// (2*index, 2*index + 1).
inline double normal_at(std::uint64_t key, std::uint64_t index) {
  return normal_from_words(rand_u64_at(key, 2 * index),
                           rand_u64_at(key, 2 * index + 1));
}

/// Uniform integer in [0, bound) via 128-bit multiply-shift.
inline std::uint64_t uniform_below_at(std::uint64_t key, std::uint64_t index,
                                      std::uint64_t bound) {
  const unsigned __int128 wide =
      static_cast<unsigned __int128>(rand_u64_at(key, index)) * bound;
  return static_cast<std::uint64_t>(wide >> 64);
}

/// Sequential view over a counter stream, for call sites that consume a
/// variable number of draws.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  std::uint64_t next_u64() { return rand_u64_at(key_, next_++); }
  double next_uniform01() { return uniform01_at(key_, next_++); }
  double next_normal() {
    const double v = normal_from_words(rand_u64_at(key_, next_),
                                       rand_u64_at(key_, next_ + 1));
    next_ += 2;
    return v;
  }
  std::uint64_t next_below(std::uint64_t bound) {
    return uniform_below_at(key_, next_++, bound);
  }

 private:
  std::uint64_t key_;
  std::uint64_t next_ = 0;
};

}  // namespace sketchif

#endif  // SKETCHIF_RNG_HPP
