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

#ifndef BAYESPRIV_DISTRIBUTION_HPP_
#define BAYESPRIV_DISTRIBUTION_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace bayespriv {

class Rng;

// A probability distribution over finitely many labels 0..n-1. Labels may
// carry optional string aliases; the integer index is the identity used
// everywhere. Immutable after construction.
class DiscreteDistribution {
 public:
  static constexpr double kMassTolerance = 1e-12;

  explicit DiscreteDistribution(std::vector<double> mass);
  DiscreteDistribution(std::vector<double> mass,
                       std::vector<std::string> aliases);

  static DiscreteDistribution Uniform(int n);
  static DiscreteDistribution PointMass(int n, int at);
  // Normalized positive random masses, entries bounded below by min_mass.
  static DiscreteDistribution Random(std::uint64_t seed, int n,
                                     double min_mass);

  int size() const { return static_cast<int>(mass_.size()); }
  double operator[](int i) const { return mass_[static_cast<size_t>(i)]; }
  std::span<const double> mass() const { return mass_; }
  const std::vector<std::string>& aliases() const { return aliases_; }

  bool StrictlyPositive() const;
  std::string DigestHex() const;

 private:
  std::vector<double> mass_;
  std::vector<std::string> aliases_;  // empty when unset
};

}  // namespace bayespriv

#endif  // BAYESPRIV_DISTRIBUTION_HPP_
