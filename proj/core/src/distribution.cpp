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

#include "bayespriv/distribution.hpp"

#include <cmath>
#include <set>
#include <string>

#include "bayespriv/digest.hpp"
#include "bayespriv/error.hpp"
#include "bayespriv/rng.hpp"

namespace bayespriv {
namespace {

void ValidateMass(const std::vector<double>& mass) {
  if (mass.empty()) {
    throw ParameterError("distribution needs at least one label");
  }
  double sum = 0.0;
  for (size_t i = 0; i < mass.size(); ++i) {
    const double m = mass[i];
    if (!(m >= 0.0 && m <= 1.0)) {
      throw ParameterError("mass[" + std::to_string(i) + "] = " +
                           std::to_string(m) + " outside [0, 1]");
    }
    sum += m;
  }
  if (std::abs(sum - 1.0) > DiscreteDistribution::kMassTolerance) {
    throw ParameterError("masses sum to " + std::to_string(sum) +
                         ", expected 1 within 1e-12");
  }
}

}  // namespace

DiscreteDistribution::DiscreteDistribution(std::vector<double> mass)
    : mass_(std::move(mass)) {
  ValidateMass(mass_);
}

DiscreteDistribution::DiscreteDistribution(std::vector<double> mass,
                                           std::vector<std::string> aliases)
    : mass_(std::move(mass)), aliases_(std::move(aliases)) {
  ValidateMass(mass_);
  if (aliases_.size() != mass_.size()) {
    throw ParameterError("alias count does not match support size");
  }
  std::set<std::string> seen(aliases_.begin(), aliases_.end());
  if (seen.size() != aliases_.size()) {
    throw ParameterError("label aliases must be unique");
  }
}

DiscreteDistribution DiscreteDistribution::Uniform(int n) {
  if (n < 1) throw ParameterError("support size must be >= 1");
  return DiscreteDistribution(std::vector<double>(n, 1.0 / n));
}

DiscreteDistribution DiscreteDistribution::PointMass(int n, int at) {
  if (n < 1) throw ParameterError("support size must be >= 1");
  if (at < 0 || at >= n) throw ParameterError("point-mass label out of range");
  std::vector<double> mass(n, 0.0);
  mass[static_cast<size_t>(at)] = 1.0;
  return DiscreteDistribution(std::move(mass));
}

DiscreteDistribution DiscreteDistribution::Random(std::uint64_t seed, int n,
                                                  double min_mass) {
  if (n < 1) throw ParameterError("support size must be >= 1");
  if (min_mass < 0.0 || min_mass * n > 1.0) {
    throw ParameterError("min_mass infeasible for support size");
  }
  Rng rng(seed);
  std::vector<double> raw(n);
  double sum = 0.0;
  for (double& r : raw) {
    r = rng.Uniform() + 1e-12;
    sum += r;
  }
  const double free_mass = 1.0 - min_mass * n;
  std::vector<double> mass(n);
  for (int i = 0; i < n; ++i) {
    mass[static_cast<size_t>(i)] = min_mass + free_mass * raw[i] / sum;
  }
  return DiscreteDistribution(std::move(mass));
}

bool DiscreteDistribution::StrictlyPositive() const {
  for (double m : mass_) {
    if (m <= 0.0) return false;
  }
  return true;
}

std::string DiscreteDistribution::DigestHex() const {
  Digest d;
  d.Add(static_cast<std::uint64_t>(mass_.size()));
  d.Add(mass());
  return d.Hex();
}

}  // namespace bayespriv
