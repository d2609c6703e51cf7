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

#include "bayespriv/distribution.hpp"
#include "bayespriv/kernel.hpp"
#include "bayespriv/metrics.hpp"

namespace {

void BM_MbpXi(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto kernel = bayespriv::RandomKernel(7, n, n, 1e-3);
  const auto prior = bayespriv::DiscreteDistribution::Random(11, n, 1e-3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bayespriv::MbpXi(kernel, prior));
  }
}
BENCHMARK(BM_MbpXi)->Arg(4)->Arg(8)->Arg(16);

void BM_PosteriorMixture(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto kernel = bayespriv::RandomKernel(7, n, n, 1e-3);
  const auto true_prior = bayespriv::DiscreteDistribution::Random(11, n, 1e-3);
  const auto attacker = bayespriv::DiscreteDistribution::Random(13, n, 1e-3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        bayespriv::PosteriorMixture(kernel, true_prior, attacker));
  }
}
BENCHMARK(BM_PosteriorMixture)->Arg(4)->Arg(8)->Arg(16);

void BM_JsDivergence(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto p = bayespriv::DiscreteDistribution::Random(3, n, 1e-4);
  const auto q = bayespriv::DiscreteDistribution::Random(5, n, 1e-4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bayespriv::JsDivergence(p, q));
  }
}
BENCHMARK(BM_JsDivergence)->Arg(8)->Arg(64)->Arg(512);

}  // namespace
