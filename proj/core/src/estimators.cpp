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

#include "bayespriv/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"

#include "bayespriv/digest.hpp"
#include "bayespriv/error.hpp"
#include "bayespriv/metrics.hpp"
#include "bayespriv/rng.hpp"
#include "internal/json_util.hpp"

namespace bayespriv {
namespace {

using internal::JsonNumber;

double Distance(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

// Gradient of the task's loss with respect to the model parameter, at
// parameter w and data sample x (the training-side gradient).
std::vector<double> ParameterGradient(const ReconstructionTask& task,
                                      std::span<const double> w,
                                      std::span<const double> x, int sample) {
  std::vector<double> g(w.size());
  if (task.family() == TaskFamily::kTranslation) {
    for (size_t i = 0; i < w.size(); ++i) g[i] = w[i] - x[i];
    return g;
  }
  double dot = 0.0;
  for (size_t i = 0; i < w.size(); ++i) dot += w[i] * x[i];
  const double residual =
      dot - task.y_values()[static_cast<size_t>(sample)];
  for (size_t i = 0; i < w.size(); ++i) g[i] = residual * x[i];
  return g;
}

ReconstructionTask TaskAtParameter(const ReconstructionTask& base,
                                   std::vector<double> parameter) {
  if (base.family() == TaskFamily::kTranslation) {
    return ReconstructionTask::Translation(std::move(parameter),
                                           base.domain());
  }
  return ReconstructionTask::LinearRegression(
      std::move(parameter), base.domain(),
      std::vector<double>(base.y_values().begin(), base.y_values().end()));
}

}  // namespace

int ModelEnsemble::TrueModelIndex() const {
  int best = 0;
  for (int m = 1; m < static_cast<int>(budgets.size()); ++m) {
    if (budgets[static_cast<size_t>(m)] > budgets[static_cast<size_t>(best)]) {
      best = m;
    }
  }
  return best;
}

ModelEnsemble GenerateEnsemble(const ReconstructionTask& task,
                               const std::vector<std::vector<double>>& dataset,
                               int num_models, const SgdConfig& config,
                               std::vector<int> member_steps) {
  if (num_models < 1) throw ParameterError("need at least one model");
  if (dataset.empty()) throw ParameterError("dataset must be nonempty");
  if (config.batch_size < 1 || config.steps < 0 || !(config.eta > 0.0)) {
    throw ParameterError("invalid SGD configuration");
  }
  if (!member_steps.empty() &&
      static_cast<int>(member_steps.size()) != num_models) {
    throw ParameterError("member_steps must cover every model");
  }

  const int dim = task.data_dim();
  ModelEnsemble ensemble;
  ensemble.config = config;
  Digest dataset_digest;
  for (const auto& z : dataset) {
    dataset_digest.Add(std::span<const double>(z));
  }
  ensemble.dataset_digest = dataset_digest.Hex();

  for (int m = 0; m < num_models; ++m) {
    const int steps =
        member_steps.empty() ? config.steps : member_steps[static_cast<size_t>(m)];
    Rng rng(DeriveSeed(config.seed, "ensemble.member",
                       static_cast<std::uint64_t>(m)));
    std::vector<double> w(static_cast<size_t>(dim));
    for (double& v : w) v = rng.Uniform();
    // batch_size >= |dataset| means full-batch steps; otherwise mini-batches
    // are drawn with replacement.
    const bool full_batch =
        config.batch_size >= static_cast<int>(dataset.size());
    const int draws = full_batch ? static_cast<int>(dataset.size())
                                 : config.batch_size;
    for (int step = 0; step < steps; ++step) {
      std::vector<double> grad(static_cast<size_t>(dim), 0.0);
      for (int b = 0; b < draws; ++b) {
        const int pick =
            full_batch ? b : rng.UniformInt(static_cast<int>(dataset.size()));
        const std::vector<double> g = ParameterGradient(
            task, w, dataset[static_cast<size_t>(pick)], pick);
        for (int i = 0; i < dim; ++i) {
          grad[static_cast<size_t>(i)] += g[static_cast<size_t>(i)];
        }
      }
      for (int i = 0; i < dim; ++i) {
        w[static_cast<size_t>(i)] -=
            config.eta * grad[static_cast<size_t>(i)] /
            static_cast<double>(draws);
        if (!std::isfinite(w[static_cast<size_t>(i)])) {
          throw DivergenceError("ensemble member " + std::to_string(m) +
                                " produced non-finite parameters at step " +
                                std::to_string(step));
        }
      }
    }
    ensemble.models.push_back(std::move(w));
    ensemble.budgets.push_back(steps);
  }
  return ensemble;
}

std::vector<double> EstimateConditionalDensity(
    const ReconstructionTask& task,
    const std::vector<std::vector<double>>& batch,
    const std::vector<double>& model, const AttackConfig& attack, int trials,
    double threshold, std::uint64_t seed, std::vector<int>* counts_out,
    int* diverged_out) {
  if (trials < 1) throw ParameterError("need at least one trial");
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw ParameterError("recovery threshold must lie in (0, 1]");
  }
  if (batch.empty()) throw ParameterError("batch must be nonempty");

  const ReconstructionTask attacked = TaskAtParameter(task, model);
  GradientPerturbation no_protection;
  no_protection.magnitude = 0.0;
  const ProtectedRelease release =
      ProtectedGradient(attacked, batch, no_protection);

  const int s = static_cast<int>(batch.size());
  const double diameter = attacked.diameter();
  std::vector<int> counts(static_cast<size_t>(s), 0);
  int diverged = 0;
  for (int trial = 0; trial < trials; ++trial) {
    AttackTrace trace;
    try {
      trace = RunInversion(attacked, release, attack.optimizer, attack.rounds,
                           DeriveSeed(seed, "density.trial",
                                      static_cast<std::uint64_t>(trial)));
    } catch (const DivergenceError&) {
      ++diverged;  // counts as non-recovery for the whole batch
      continue;
    }
    const auto& final_round = trace.iterates.back();
    for (int d = 0; d < s; ++d) {
      const double dist =
          Distance(final_round[static_cast<size_t>(d)],
                   batch[static_cast<size_t>(d)]);
      if (dist / diameter <= threshold) ++counts[static_cast<size_t>(d)];
    }
  }
  std::vector<double> estimates(static_cast<size_t>(s));
  for (int d = 0; d < s; ++d) {
    estimates[static_cast<size_t>(d)] =
        static_cast<double>(counts[static_cast<size_t>(d)]) /
        (static_cast<double>(s) * static_cast<double>(trials));
  }
  if (counts_out != nullptr) *counts_out = std::move(counts);
  if (diverged_out != nullptr) *diverged_out = diverged;
  return estimates;
}

DensityEstimate EstimateDensities(
    const ReconstructionTask& task,
    const std::vector<std::vector<double>>& batch,
    const std::vector<std::vector<double>>& models, const AttackConfig& attack,
    int trials, double threshold, std::uint64_t seed) {
  if (models.empty()) throw ParameterError("need at least one model");
  DensityEstimate density;
  density.trials = trials;
  density.batch = static_cast<int>(batch.size());
  for (size_t m = 0; m < models.size(); ++m) {
    std::vector<int> counts;
    int diverged = 0;
    density.per_model.push_back(EstimateConditionalDensity(
        task, batch, models[m], attack, trials, threshold,
        DeriveSeed(seed, "density.model", static_cast<std::uint64_t>(m)),
        &counts, &diverged));
    density.counts.push_back(std::move(counts));
    density.diverged_trials += diverged;
  }
  density.f_o_hat = EstimateFO(density.per_model);
  return density;
}

std::vector<double> EstimateFO(
    const std::vector<std::vector<double>>& per_model) {
  if (per_model.empty()) throw ParameterError("need at least one model");
  const size_t n = per_model.front().size();
  std::vector<double> mean(n, 0.0);
  for (const auto& row : per_model) {
    if (row.size() != n) {
      throw ParameterError("per-model estimates have mismatched sizes");
    }
    for (size_t d = 0; d < n; ++d) mean[d] += row[d];
  }
  for (double& v : mean) v /= static_cast<double>(per_model.size());
  return mean;
}

std::string DensityEstimate::ToCsv() const {
  std::ostringstream out;
  out.precision(17);
  out << "model,sample,count,estimate\n";
  for (size_t m = 0; m < per_model.size(); ++m) {
    for (size_t d = 0; d < per_model[m].size(); ++d) {
      out << m << ',' << d << ',' << counts[m][d] << ',' << per_model[m][d]
          << '\n';
    }
  }
  return out.str();
}

MbpEstimate EstimateXi(const std::vector<double>& f_hat_true_model,
                       const DiscreteDistribution& prior, int batch,
                       int trials) {
  if (static_cast<int>(f_hat_true_model.size()) != prior.size()) {
    throw ParameterError("estimate and prior supports differ");
  }
  if (!prior.StrictlyPositive()) {
    throw ParameterError("prior must be strictly positive");
  }
  if (batch < 1 || trials < 1) throw ParameterError("batch and trials >= 1");
  bool all_zero = true;
  for (double v : f_hat_true_model) {
    if (v > 0.0) {
      all_zero = false;
      break;
    }
  }
  if (all_zero) {
    throw EstimationError("every density estimate is zero; xi is undefined");
  }
  const double floor =
      1.0 / (2.0 * static_cast<double>(batch) * static_cast<double>(trials));
  MbpEstimate estimate;
  for (int d = 0; d < prior.size(); ++d) {
    double f = f_hat_true_model[static_cast<size_t>(d)];
    if (f <= 0.0) {
      f = floor;
      estimate.floored = true;
    }
    estimate.xi_hat =
        std::max(estimate.xi_hat, std::abs(std::log(f / prior[d])));
  }
  estimate.kappa3_hat = estimate.xi_hat;
  estimate.c2_hat = C2FromXi(estimate.xi_hat);
  return estimate;
}

std::string MbpEstimate::ToJsonString() const {
  nlohmann::json doc;
  doc["xi_hat"] = JsonNumber(xi_hat);
  doc["kappa3_hat"] = JsonNumber(kappa3_hat);
  doc["c2_hat"] = JsonNumber(c2_hat);
  doc["floored"] = floored;
  return doc.dump();
}

EpsTildeEstimate AssembleEpsTilde(const std::vector<double>& f_o_hat_raw,
                                  const DiscreteDistribution& f_b, double c2,
                                  double tv) {
  if (static_cast<int>(f_o_hat_raw.size()) != f_b.size()) {
    throw ParameterError("estimate and belief supports differ");
  }
  if (!(tv >= 0.0 && tv <= 1.0)) throw ParameterError("tv must lie in [0,1]");
  double sum = 0.0;
  for (double v : f_o_hat_raw) {
    if (v < 0.0) throw ParameterError("frequencies must be nonnegative");
    sum += v;
  }
  if (sum <= 0.0) {
    throw EstimationError("cannot normalize an all-zero frequency vector");
  }
  EpsTildeEstimate estimate;
  estimate.f_o_hat_raw = f_o_hat_raw;
  estimate.f_o_hat_normalized = f_o_hat_raw;
  for (double& v : estimate.f_o_hat_normalized) v /= sum;
  estimate.c1_hat =
      C1(DiscreteDistribution(estimate.f_o_hat_normalized), f_b);
  estimate.c2 = c2;
  estimate.tv = tv;
  estimate.eps_tilde_hat = EpsTilde(estimate.c1_hat, c2, tv);
  return estimate;
}

std::string EpsTildeEstimate::ToJsonString() const {
  nlohmann::json doc;
  doc["c1_hat"] = JsonNumber(c1_hat);
  doc["c2"] = JsonNumber(c2);
  doc["tv"] = JsonNumber(tv);
  doc["eps_tilde_hat"] = JsonNumber(eps_tilde_hat);
  doc["f_o_hat_raw"] = f_o_hat_raw;
  doc["f_o_hat_normalized"] = f_o_hat_normalized;
  return doc.dump();
}

bool DistributionRecovered(const DiscreteDistribution& recovered,
                           const DiscreteDistribution& reference,
                           double threshold,
                           const SimilarityComparator& comparator) {
  const double divergence = comparator
                                ? comparator(recovered, reference)
                                : JsDivergence(recovered, reference);
  return divergence <= threshold;
}

PipelineResult RunEstimationPipeline(
    const ReconstructionTask& task,
    const std::vector<std::vector<double>>& dataset,
    const DiscreteDistribution& prior, const PipelineConfig& config,
    std::uint64_t master_seed) {
  if (static_cast<int>(dataset.size()) != prior.size()) {
    throw ParameterError("prior must cover every dataset point");
  }
  PipelineResult result;
  SgdConfig sgd = config.sgd;
  sgd.seed = DeriveSeed(master_seed, "pipeline.sgd", 0);
  result.ensemble = GenerateEnsemble(task, dataset, config.num_models, sgd,
                                     config.member_steps);
  result.w_star = config.w_star_override.value_or(
      result.ensemble.TrueModelIndex());
  if (result.w_star < 0 || result.w_star >= config.num_models) {
    throw ParameterError("w_star override out of range");
  }
  result.density = EstimateDensities(
      task, dataset, result.ensemble.models, config.attack, config.trials,
      config.threshold, DeriveSeed(master_seed, "pipeline.density", 0));
  result.mbp = EstimateXi(
      result.density.per_model[static_cast<size_t>(result.w_star)], prior,
      result.density.batch, result.density.trials);
  const double c2 = config.known_c2.value_or(result.mbp.c2_hat);
  result.eps_tilde =
      AssembleEpsTilde(result.density.f_o_hat, prior, c2, config.tv);
  return result;
}

std::string PipelineResult::ToJsonString() const {
  nlohmann::json doc;
  doc["dataset_digest"] = ensemble.dataset_digest;
  doc["budgets"] = ensemble.budgets;
  doc["models"] = ensemble.models;
  doc["w_star"] = w_star;
  doc["counts"] = density.counts;
  doc["per_model"] = density.per_model;
  doc["f_o_hat"] = density.f_o_hat;
  doc["trials"] = density.trials;
  doc["batch"] = density.batch;
  doc["diverged_trials"] = density.diverged_trials;
  doc["xi_hat"] = JsonNumber(mbp.xi_hat);
  doc["c2_hat"] = JsonNumber(mbp.c2_hat);
  doc["floored"] = mbp.floored;
  doc["c1_hat"] = JsonNumber(eps_tilde.c1_hat);
  doc["eps_tilde_hat"] = JsonNumber(eps_tilde.eps_tilde_hat);
  doc["tv"] = JsonNumber(eps_tilde.tv);
  return doc.dump();
}

}  // namespace bayespriv
