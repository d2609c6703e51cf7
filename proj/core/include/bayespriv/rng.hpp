// Copyright 2026 The BayesPriv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BAYESPRIV_RNG_HPP_
#define BAYESPRIV_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string_view>

namespace bayespriv {

// SplitMix64 finalizer. Used for seed derivation and digesting.
inline constexpr std::uint64_t Mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Derives an independent stream seed from a master seed, a task tag, and an
// instance index. Results are order-independent: running instances in any
// order (or in parallel) yields the same per-instance streams.
inline std::uint64_t DeriveSeed(std::uint64_t master, std::string_view tag,
                                std::uint64_t index) {
  std::uint64_t h = Mix64(master);
  for (char c : tag) {
    h = Mix64(h ^ static_cast<std::uint64_t>(static_cast<unsigned char>(c)));
  }
  return Mix64(h ^ Mix64(index + 0x51ed2701d9u));
}

// Deterministic random stream. The engine is the standard-specified
// mt19937_64; real-valued conversions are done explicitly here instead of via
// std::uniform_real_distribution, whose output is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextU64() { return engine_(); }

  // Uniform on [0, 1), 53-bit resolution.
  double Uniform() {
    return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
  }

  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Uniform integer in [0, n). Modulo bias is negligible for the instance
  // sizes used here.
  int UniformInt(int n) {
    return static_cast<int>(NextU64() % static_cast<std::uint64_t>(n));
  }

  // Standard normal via Box-Muller; consumes exactly two uniforms per pair.
  double Normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1 = Uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double u2 = Uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    cached_ = radius * std::sin(angle);
    have_cached_ = true;
    return radius * std::cos(angle);
  }

  bool Bernoulli(double p) { return Uniform() < p; }

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace bayespriv

#endif  // BAYESPRIV_RNG_HPP_
