/*
 * Copyright 2026 The dfkit Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef DFKIT_RANDOM_HPP_
#define DFKIT_RANDOM_HPP_

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>

namespace dfkit {

// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Folds a seed and any number of indices into one stream key.
constexpr std::uint64_t derive_key(std::uint64_t seed,
                                   std::initializer_list<std::uint64_t> path) noexcept {
  std::uint64_t key = mix64(seed);
  for (std::uint64_t part : path) key = mix64(key ^ mix64(part + 0x632BE59BD9B4E019ULL));
  return key;
}

/// Counter-based random stream. The n-th draw is a pure function of
/// (key, n), so a stream keyed by (seed, sample_index, op_index) yields the
/// same values no matter which thread consumes it or in which order work
/// units are scheduled. Distribution code is local rather than <random> so
/// outputs do not depend on the standard library implementation.
class KeyedRng {
 public:
  explicit constexpr KeyedRng(std::uint64_t key) noexcept : key_(key) {}
  KeyedRng(std::uint64_t seed, std::initializer_list<std::uint64_t> path) noexcept
      : key_(derive_key(seed, path)) {}

  constexpr std::uint64_t next() noexcept {
    return mix64(key_ + 0x9E3779B97F4A7C15ULL * ++counter_);
  }

  // Uniform in [0, 1).
  double uniform01() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) noexcept {
    return lo + (hi - lo) * uniform01();
  }

  // Uniform integer in [lo, hi], unbiased.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) noexcept {
    if (hi <= lo) return lo;
    const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
    if (range == 0) return static_cast<std::int64_t>(next());
    const std::uint64_t limit = (~std::uint64_t{0}) - (~std::uint64_t{0}) % range;
    std::uint64_t r;
    do {
      r = next();
    } while (r >= limit);
    return lo + static_cast<std::int64_t>(r % range);
  }

  bool bernoulli(double p) noexcept { return uniform01() < p; }

  // Standard normal via Box-Muller; consumes two draws.
  double normal() noexcept {
    const double u1 = 1.0 - uniform01();  // (0, 1]
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t draws() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace dfkit

#endif  // DFKIT_RANDOM_HPP_
