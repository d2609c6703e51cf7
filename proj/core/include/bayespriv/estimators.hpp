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

#ifndef BAYESPRIV_ESTIMATORS_HPP_
#define BAYESPRIV_ESTIMATORS_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bayespriv/attack.hpp"
#include "bayespriv/distribution.hpp"
#include "bayespriv/task.hpp"

namespace bayespriv {

struct SgdConfig {
  int steps = 100;
  double eta = 0.1;
  int batch_size = 1;  // mini-batch size per step
  std::uint64_t seed = 0;
};

// Models trained independently on the same dataset from random starts.
struct ModelEnsemble {
  std::vector<std::vector<double>> models;
  std::vector<int> budgets;  // training steps per member
  SgdConfig config;
  std::string dataset_digest;

  // The member standing in for the true parameter: largest training budget,
  // ties broken toward the lowest index.
  int TrueModelIndex() const;
};

// Runs num_models independent SGD runs (random init, `steps` mini-batch
// updates) on the task's loss. Deterministic given config.seed. member_steps
// overrides the per-member budget when nonempty. Throws DivergenceError if a
// run produces non-finite parameters.
ModelEnsemble GenerateEnsemble(const ReconstructionTask& task,
                               const std::vector<std::vector<double>>& dataset,
                               int num_models, const SgdConfig& config,
                               std::vector<int> member_steps = {});

struct AttackConfig {
  OptimizerConfig optimizer;
  int rounds = 80;
};

// Frequency estimate of f(d | w) for one model: the released per-sample
// gradients at `model` are attacked `trials` times from fresh random starts;
// sample d counts as recovered in a trial when the reconstruction lands
// within threshold * diameter of it. Returns M_d / (S * trials) per sample.
// A diverging trial counts as non-recovery for the whole batch.
std::vector<double> EstimateConditionalDensity(
    const ReconstructionTask& task,
    const std::vector<std::vector<double>>& batch,
    const std::vector<double>& model, const AttackConfig& attack, int trials,
    double threshold, std::uint64_t seed,
    std::vector<int>* counts_out = nullptr, int* diverged_out = nullptr);

// Estimates for a whole ensemble plus the observation-averaged belief.
struct DensityEstimate {
  std::vector<std::vector<double>> per_model;  // [model][sample]
  std::vector<std::vector<int>> counts;        // recovery counts M_d^m
  std::vector<double> f_o_hat;                 // column mean over models
  int trials = 0;  // T
  int batch = 0;   // S
  int diverged_trials = 0;

  std::string ToCsv() const;  // model,sample,count,estimate
};

DensityEstimate EstimateDensities(
    const ReconstructionTask& task,
    const std::vector<std::vector<double>>& batch,
    const std::vector<std::vector<double>>& models, const AttackConfig& attack,
    int trials, double threshold, std::uint64_t seed);

// f_o_hat(d) = mean over models of f(d | w_m).
std::vector<double> EstimateFO(
    const std::vector<std::vector<double>>& per_model);

struct MbpEstimate {
  double xi_hat = 0.0;
  double kappa3_hat = 0.0;  // alias of xi_hat
  double c2_hat = 0.0;
  bool floored = false;  // zero estimates were floored at 1/(2 S T)

  std::string ToJsonString() const;
};

// xi_hat = max_d |ln(f_hat(d | w*) / prior(d))|. Zero estimates are floored
// at 1/(2 S T) before the log (visible via `floored`); throws
// EstimationError when every estimate is zero.
MbpEstimate EstimateXi(const std::vector<double>& f_hat_true_model,
                       const DiscreteDistribution& prior, int batch,
                       int trials);

struct EpsTildeEstimate {
  double c1_hat = 0.0;
  double c2 = 0.0;
  double tv = 0.0;
  double eps_tilde_hat = 0.0;  // 2 c1_hat - c2 * tv
  std::vector<double> f_o_hat_raw;
  std::vector<double> f_o_hat_normalized;

  std::string ToJsonString() const;  // echoes every input
};

// C1_hat = sqrt(JS(normalized f_o_hat || f_b)). The raw frequencies are kept
// alongside: only the divergence evaluation renormalizes.
EpsTildeEstimate AssembleEpsTilde(const std::vector<double>& f_o_hat_raw,
                                  const DiscreteDistribution& f_b, double c2,
                                  double tv);

using SimilarityComparator = std::function<double(
    const DiscreteDistribution&, const DiscreteDistribution&)>;

// Distribution-level recovery gate applied after aggregation: recovered when
// the divergence between the normalized recovery profile and the reference
// is at most `threshold` (smaller divergence = more similar). Defaults to
// Jensen-Shannon divergence.
bool DistributionRecovered(const DiscreteDistribution& recovered,
                           const DiscreteDistribution& reference,
                           double threshold,
                           const SimilarityComparator& comparator = nullptr);

struct PipelineConfig {
  int num_models = 3;
  SgdConfig sgd;
  std::vector<int> member_steps;  // optional per-member budgets
  AttackConfig attack;
  int trials = 1000;       // T
  double threshold = 0.5;  // recovery threshold t (normalized distance)
  double tv = 0.0;         // known TV term for the eps_tilde assembly
  std::optional<double> known_c2;     // use instead of C2 from xi_hat
  std::optional<int> w_star_override; // externally supplied true model
};

struct PipelineResult {
  ModelEnsemble ensemble;
  DensityEstimate density;
  MbpEstimate mbp;
  EpsTildeEstimate eps_tilde;
  int w_star = 0;

  std::string ToJsonString() const;  // byte-stable for a fixed master seed
};

// Full appendix pipeline: ensemble, per-model densities, xi_hat at the true
// model, and the assembled leakage bound. Every stage derives its streams
// from master_seed, so the result is bit-reproducible.
PipelineResult RunEstimationPipeline(
    const ReconstructionTask& task,
    const std::vector<std::vector<double>>& dataset,
    const DiscreteDistribution& prior, const PipelineConfig& config,
    std::uint64_t master_seed);

}  // namespace bayespriv

#endif  // BAYESPRIV_ESTIMATORS_HPP_
