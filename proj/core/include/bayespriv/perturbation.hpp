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

#ifndef BAYESPRIV_PERTURBATION_HPP_
#define BAYESPRIV_PERTURBATION_HPP_

#include <cstdint>
#include <optional>
#include <vector>

namespace bayespriv {

enum class PerturbationMode { kFixedDirection, kIsotropicRandom };

// A deliberate gradient-space perturbation of exact norm `magnitude`.
// kFixedDirection uses `direction` (the first coordinate axis when empty);
// kIsotropicRandom draws a uniformly random direction and requires a seed.
struct GradientPerturbation {
  PerturbationMode mode = PerturbationMode::kFixedDirection;
  double magnitude = 0.0;
  std::optional<std::uint64_t> seed;
  std::vector<double> direction;  // fixed-direction mode only
};

// Materializes the perturbation as a vector of the given dimension with
// Euclidean norm exactly equal to magnitude (zero vector when magnitude = 0).
// Deterministic: the same perturbation and dimension always yield the same
// vector.
std::vector<double> MakeDeltaVector(const GradientPerturbation& perturbation,
                                    int dim);

}  // namespace bayespriv

#endif  // BAYESPRIV_PERTURBATION_HPP_
