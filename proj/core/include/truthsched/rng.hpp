// Copyright 2026 The truthsched Authors
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

#include <cstdint>
#include <random>

namespace truthsched {

/// SplitMix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent child seed for a (seed, stream) pair.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

/// Uniform double in the open interval (0, 1) built from the top 53 bits.
constexpr double to_unit_open(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

using Rng = std::mt19937_64;

inline double uniform01(Rng& rng) { return to_unit_open(rng()); }

/// Exponential variate with the given rate by inversion, so that scaling the
/// rate by 1/c scales the draw by c exactly for powers of two.
double exponential(Rng& rng, double rate);

/// Per-slot coin flips that depend only on (gamma, seed, slot). Slot t's coin
/// is a pure function of those three, so rerunning with different job reports,
/// or asking for slots out of order, always yields the same flips.
class CoinSource {
 public:
  CoinSource() = default;
  CoinSource(double gamma, std::uint64_t seed);

  [[nodiscard]] bool heads(std::int64_t slot) const;
  [[nodiscard]] double gamma() const { return gamma_; }
  [[nodiscard]] std::uint64_t seed() const { return seed_; }

  friend bool operator==(const CoinSource&, const CoinSource&) = default;

 private:
  double gamma_ = 0.0;
  std::uint64_t seed_ = 0;
};

}  // namespace truthsched
