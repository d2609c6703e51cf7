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

#ifndef BAYESPRIV_KERNEL_HPP_
#define BAYESPRIV_KERNEL_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "bayespriv/distribution.hpp"

namespace bayespriv {

class Rng;

// A finite privacy mechanism: a row-stochastic matrix K[d][w] giving the
// probability of releasing output w when the private input is d. Inputs and
// outputs are integer labels 0..n-1. Immutable after construction; safe to
// share across threads.
//
// Entries of exactly zero are legal but make the worst-case log-ratio
// infinite; constructors that take a min_prob only produce zeros when
// min_prob = 0 is explicitly requested.
class StochasticKernel {
 public:
  static constexpr double kRowSumTolerance = 1e-12;

  StochasticKernel(int num_inputs, int num_outputs,
                   std::vector<double> row_major);

  int num_inputs() const { return num_inputs_; }
  int num_outputs() const { return num_outputs_; }

  double operator()(int input, int output) const {
    return p_[static_cast<size_t>(input) * num_outputs_ +
              static_cast<size_t>(output)];
  }
  std::span<const double> row(int input) const {
    return {p_.data() + static_cast<size_t>(input) * num_outputs_,
            static_cast<size_t>(num_outputs_)};
  }

  // Output distribution P_W induced by a prior over inputs.
  DiscreteDistribution OutputMarginal(const DiscreteDistribution& prior) const;

  std::string DigestHex() const;

  // On-disk format: {"inputs": n, "outputs": m, "rows": [[...], ...]}.
  // Loading validates all invariants and reports violations with a
  // line-precise location in the source text.
  std::string ToJsonString() const;
  void SaveJson(const std::filesystem::path& path) const;
  static StochasticKernel ParseJson(std::string_view text,
                                    std::string_view origin);
  static StochasticKernel LoadJson(const std::filesystem::path& path);

 private:
  int num_inputs_;
  int num_outputs_;
  std::vector<double> p_;  // row-major
};

// Canonical k-ary randomized response: stay with probability 1 - flip_prob,
// move to each of the k-1 other labels with probability flip_prob / (k-1).
// Requires k >= 2 and flip_prob in [0, (k-1)/k].
StochasticKernel MakeRandomizedResponse(int k, double flip_prob);

// Zero-leakage reference mechanism: every input releases target_output.
StochasticKernel MakeConstantMechanism(int num_inputs, int target_output);

// The identity release (each input published verbatim).
StochasticKernel MakeIdentityKernel(int n);

// Deterministic random test instance: entries >= min_prob, rows normalized.
// Requires min_prob * num_outputs <= 1.
StochasticKernel RandomKernel(std::uint64_t seed, int num_inputs,
                              int num_outputs, double min_prob);

// Draws one output for the given input, advancing the caller-owned stream.
int SampleOutput(const StochasticKernel& kernel, int input, Rng& rng);

}  // namespace bayespriv

#endif  // BAYESPRIV_KERNEL_HPP_
