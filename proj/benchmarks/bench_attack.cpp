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

#include <benchmark/benchmark.h>

#include "bayespriv/attack.hpp"
#include "bayespriv/rng.hpp"
#include "bayespriv/task.hpp"

namespace {

void BM_RunInversion(benchmark::State& state) {
  const int rounds = static_cast<int>(state.range(0));
  const auto task =
      bayespriv::ReconstructionTask::Translation({0.5}, bayespriv::Box::Unit(1));
  bayespriv::Rng rng(17);
  std::vector<std::vector<double>> batch;
  for (int m = 0; m < 8; ++m) batch.push_back(task.domain().Sample(rng));
  bayespriv::GradientPerturbation perturbation;
  perturbation.mode = bayespriv::PerturbationMode::kIsotropicRandom;
  perturbation.magnitude = 0.4;
  perturbation.seed = 3;
  const auto release = bayespriv::ProtectedGradient(task, batch, perturbation);
  const bayespriv::OptimizerConfig optimizer;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        bayespriv::RunInversion(task, release, optimizer, rounds, 23));
  }
}
BENCHMARK(BM_RunInversion)->Arg(100)->Arg(1000);

}  // namespace
