/**
 * Copyright 2026 The Blockguard Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <bit>
#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace blockguard {

/// SplitMix64 finalizer. Used to derive independent seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  return splitmix64(a ^ splitmix64(b + 0x632be59bd9b4e019ULL));
}

/// Named random streams inside one simulation. Each stream is seeded
/// independently so, for example, delays can be re-drawn without touching
/// the workload.
enum class Stream : std::uint64_t {
  Workload = 1,
  Adversary = 2,
  Delay = 3,
  Selection = 4,
  Mining = 5,
};

/// Seeded generator: std::mt19937_64 (its output sequence is fixed by the
/// C++ standard) with distributions implemented here, since the standard
/// library's distributions differ between implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : seed_(seed), engine_(seed) {}

  static Rng for_stream(std::uint64_t seed, Stream stream) {
    return Rng(mix_seed(seed, static_cast<std::uint64_t>(stream)));
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound). bound must be non-zero.
  /// Lemire's multiply-and-reject method.
  std::uint64_t below(std::uint64_t bound) {
    __extension__ using u128 = unsigned __int128;
    auto m = static_cast<u128>(next()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<u128>(next()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// Uniform integer in [lo, hi].
  std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }

  /// Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return unit() < p; }

  /// Binomial(trials, 1/2) as the popcount of `trials` fair bits (trials <= 64).
  std::uint32_t binomial_half(std::uint32_t trials) {
    const std::uint64_t mask = trials >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << trials) - 1;
    return static_cast<std::uint32_t>(std::popcount(next() & mask));
  }

  /// Moves a uniform random k-subset of `items` to its front (partial
  /// Fisher-Yates). k is clamped to items.size().
  template <typename T>
  void partial_shuffle(std::span<T> items, std::size_t k) {
    if (k > items.size()) k = items.size();
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j = i + below(items.size() - i);
      std::swap(items[i], items[j]);
    }
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace blockguard
