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

#include "bayespriv/perturbation.hpp"

#include <cmath>

#include "bayespriv/error.hpp"
#include "bayespriv/rng.hpp"

namespace bayespriv {

std::vector<double> MakeDeltaVector(const GradientPerturbation& perturbation,
                                    int dim) {
  if (dim < 1) throw ParameterError("perturbation dimension must be >= 1");
  if (!(perturbation.magnitude >= 0.0)) {
    throw ParameterError("perturbation magnitude must be >= 0");
  }
  std::vector<double> delta(static_cast<size_t>(dim), 0.0);
  if (perturbation.magnitude == 0.0) return delta;

  if (perturbation.mode == PerturbationMode::kFixedDirection) {
    if (perturbation.direction.empty()) {
      delta[0] = perturbation.magnitude;
      return delta;
    }
    if (static_cast<int>(perturbation.direction.size()) != dim) {
      throw ParameterError("perturbation direction has wrong dimension");
    }
    double norm = 0.0;
    for (double v : perturbation.direction) norm += v * v;
    norm = std::sqrt(norm);
    if (norm <= 0.0) {
      throw ParameterError("fixed perturbation direction must be nonzero");
    }
    for (int i = 0; i < dim; ++i) {
      delta[static_cast<size_t>(i)] =
          perturbation.direction[static_cast<size_t>(i)] / norm *
          perturbation.magnitude;
    }
    return delta;
  }

  if (!perturbation.seed.has_value()) {
    throw ParameterError("isotropic perturbation requires a seed");
  }
  Rng rng(*perturbation.seed);
  double norm = 0.0;
  while (norm <= 1e-12) {  // re-draw on the (measure-zero) degenerate draw
    norm = 0.0;
    for (int i = 0; i < dim; ++i) {
      delta[static_cast<size_t>(i)] = rng.Normal();
      norm += delta[static_cast<size_t>(i)] * delta[static_cast<size_t>(i)];
    }
    norm = std::sqrt(norm);
  }
  for (double& v : delta) v = v / norm * perturbation.magnitude;
  return delta;
}

}  // namespace bayespriv
