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

#include "bayespriv/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bayespriv/digest.hpp"
#include "bayespriv/error.hpp"
#include "bayespriv/rng.hpp"

namespace bayespriv {
namespace {

double Norm(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

std::vector<double> RandomUnit(int dim, Rng& rng) {
  std::vector<double> u(static_cast<size_t>(dim));
  double norm = 0.0;
  while (norm <= 1e-12) {
    norm = 0.0;
    for (double& v : u) {
      v = rng.Normal();
      norm += v * v;
    }
    norm = std::sqrt(norm);
  }
  for (double& v : u) v /= norm;
  return u;
}

// The probed change measure at the in-domain point nearest x + delta.
// Projection keeps perturbed data inside the data domain and is a
// contraction, so the probe stays within the radius-r ball around x.
double ChangeAt(const ReconstructionTask& task, std::span<const double> x,
                std::span<const double> delta, int sample,
                RobustnessLevel level) {
  std::vector<double> shifted(x.size());
  for (size_t i = 0; i < x.size(); ++i) shifted[i] = x[i] + delta[i];
  shifted = task.domain().Project(std::move(shifted));
  if (level == RobustnessLevel::kOutput) {
    return std::abs(task.Output(shifted, sample) - task.Output(x, sample));
  }
  const std::vector<double> g1 = task.Gradient(shifted, sample);
  const std::vector<double> g0 = task.Gradient(x, sample);
  std::vector<double> diff(g1.size());
  for (size_t i = 0; i < g1.size(); ++i) diff[i] = g1[i] - g0[i];
  return Norm(diff);
}

// A few steps of ascent on the squared gradient change, projected back to
// the sphere ||delta|| = r. Cheap finite differences keep this generic
// across levels.
double RefineProbe(const ReconstructionTask& task, std::span<const double> x,
                   std::vector<double> delta, double radius, int sample,
                   RobustnessLevel level, int steps) {
  const int dim = static_cast<int>(delta.size());
  double best = ChangeAt(task, x, delta, sample, level);
  const double fd = std::max(1e-6, 1e-4 * radius);
  for (int step = 0; step < steps; ++step) {
    std::vector<double> grad(static_cast<size_t>(dim));
    for (int i = 0; i < dim; ++i) {
      std::vector<double> probe = delta;
      probe[static_cast<size_t>(i)] += fd;
      const double up = ChangeAt(task, x, probe, sample, level);
      probe[static_cast<size_t>(i)] -= 2.0 * fd;
      const double down = ChangeAt(task, x, probe, sample, level);
      grad[static_cast<size_t>(i)] = (up - down) / (2.0 * fd);
    }
    const double g_norm = Norm(grad);
    if (g_norm <= 1e-14) break;
    for (int i = 0; i < dim; ++i) {
      delta[static_cast<size_t>(i)] +=
          0.25 * radius * grad[static_cast<size_t>(i)] / g_norm;
    }
    const double d_norm = Norm(delta);
    if (d_norm > 0.0) {
      for (double& v : delta) v *= radius / d_norm;
    }
    best = std::max(best, ChangeAt(task, x, delta, sample, level));
  }
  return best;
}

}  // namespace

RobustnessMeasurement MeasureInputRobustness(const ReconstructionTask& task,
                                             double radius,
                                             const RobustnessBudget& budget,
                                             RobustnessLevel level,
                                             std::uint64_t seed) {
  if (!(radius >= 0.0)) throw ParameterError("radius must be >= 0");
  if (budget.x_samples < 1 || budget.probes < 1) {
    throw ParameterError("budget must be >= 1 sample and >= 1 probe");
  }
  RobustnessMeasurement measurement;
  measurement.radius = radius;
  measurement.level = level;
  measurement.budget = budget.x_samples * budget.probes;
  if (radius == 0.0) return measurement;

  const int dim = task.data_dim();
  const int samples =
      task.family() == TaskFamily::kLinearRegression
          ? static_cast<int>(task.y_values().size())
          : 1;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::int64_t i = 0; i < budget.x_samples; ++i) {
    Rng rng(DeriveSeed(seed, "robustness.x", static_cast<std::uint64_t>(i)));
    const std::vector<double> x = task.domain().Sample(rng);
    const int sample = static_cast<int>(i % samples);
    double inner = 0.0;
    std::vector<double> best_delta(static_cast<size_t>(dim), 0.0);
    auto consider = [&](std::vector<double> delta) {
      const double change = ChangeAt(task, x, delta, sample, level);
      if (change >= inner) {
        inner = change;
        best_delta = std::move(delta);
      }
    };
    // Signed axis probes first: they cover both boundary directions of every
    // coordinate, which the random draws alone can miss at low dimension.
    for (int axis = 0; axis < dim; ++axis) {
      for (double sign : {1.0, -1.0}) {
        std::vector<double> delta(static_cast<size_t>(dim), 0.0);
        delta[static_cast<size_t>(axis)] = sign * radius;
        consider(std::move(delta));
      }
    }
    for (int p = 0; p < budget.probes; ++p) {
      std::vector<double> delta = RandomUnit(dim, rng);
      for (double& v : delta) v *= radius;
      consider(std::move(delta));
    }
    if (budget.ascent_steps > 0) {
      inner = std::max(inner, RefineProbe(task, x, best_delta, radius, sample,
                                          level, budget.ascent_steps));
    }
    sum += inner;
    sum_sq += inner * inner;
  }
  const double n = static_cast<double>(budget.x_samples);
  measurement.measured = sum / n;
  const double variance =
      std::max(0.0, sum_sq / n - measurement.measured * measurement.measured);
  measurement.std_error = std::sqrt(variance / n);
  return measurement;
}

double LipschitzEstimate(const ReconstructionTask& task, std::int64_t samples,
                         std::uint64_t seed) {
  if (samples < 1000) throw ParameterError("need at least 1e3 sample pairs");
  if (task.family() == TaskFamily::kTranslation) return 1.0;
  Rng rng(seed);
  const int per_sample =
      std::max<int>(1, static_cast<int>(task.y_values().size()));
  double worst = 0.0;
  for (std::int64_t i = 0; i < samples; ++i) {
    const int m = static_cast<int>(i % per_sample);
    const std::vector<double> x1 = task.domain().Sample(rng);
    const std::vector<double> x2 = task.domain().Sample(rng);
    std::vector<double> dx(x1.size());
    for (size_t j = 0; j < x1.size(); ++j) dx[j] = x1[j] - x2[j];
    const double nx = Norm(dx);
    if (nx < 1e-12) continue;  // duplicate pair, skip
    const std::vector<double> g1 = task.Gradient(x1, m);
    const std::vector<double> g2 = task.Gradient(x2, m);
    std::vector<double> dg(g1.size());
    for (size_t j = 0; j < g1.size(); ++j) dg[j] = g1[j] - g2[j];
    worst = std::max(worst, Norm(dg) / nx);
  }
  return worst;
}

AlphaPrediction PredictAlpha(double lipschitz, double radius, double diameter,
                             double eps_p, double c_a, double c_b, double c2,
                             int rounds, double p) {
  if (!(c_a > 0.0)) throw ParameterError("c_a must be positive");
  if (rounds < 1) throw ParameterError("need at least one round");
  AlphaPrediction prediction;
  prediction.lipschitz = lipschitz;
  prediction.radius = radius;
  prediction.diameter = diameter;
  prediction.eps_p = eps_p;
  prediction.c_a = c_a;
  prediction.c_b = c_b;
  prediction.c2 = c2;
  prediction.rounds = rounds;
  prediction.p = p;
  const double second =
      (4.0 * diameter * (1.0 - eps_p) - c2 * c_b * std::pow(rounds, p - 1.0)) /
      (2.0 * c_a);
  prediction.second_term_negative = second < 0.0;
  prediction.alpha = 0.5 * lipschitz * radius + second;
  return prediction;
}

std::vector<RobustnessCheck> VerifyPrivacyRobustness(
    const ReconstructionTask& task, const PrivacyRobustnessConfig& config,
    std::uint64_t master_seed) {
  if (config.radii.empty() || config.deltas.empty() || config.seeds < 1) {
    throw ParameterError("robustness sweep needs a nonempty grid");
  }
  const double diameter = task.diameter();
  BiLipschitzEstimate constants{1.0, 1.0, 0};
  double lipschitz = 1.0;
  if (!task.HasExactConstants()) {
    constants = EstimateBiLipschitz(task, config.constant_pairs,
                                    DeriveSeed(master_seed, "constants", 0));
    lipschitz = LipschitzEstimate(task, config.constant_pairs,
                                  DeriveSeed(master_seed, "lipschitz", 0));
  }

  std::vector<RobustnessCheck> cells;
  std::uint64_t index = 0;
  for (double delta : config.deltas) {
    for (int s = 0; s < config.seeds; ++s) {
      const std::uint64_t cell_seed =
          DeriveSeed(master_seed, "robustness.cell", index++);
      // One attack per protection level and seed; eps_p is reused across
      // radii.
      Rng batch_rng(DeriveSeed(cell_seed, "batch", 0));
      std::vector<std::vector<double>> original;
      original.reserve(static_cast<size_t>(config.batch_size));
      for (int m = 0; m < config.batch_size; ++m) {
        original.push_back(task.domain().Sample(batch_rng));
      }
      GradientPerturbation perturbation;
      perturbation.mode = config.mode;
      perturbation.magnitude = delta;
      perturbation.seed = DeriveSeed(cell_seed, "delta", 0);
      const ProtectedRelease release =
          ProtectedGradient(task, original, perturbation);
      const AttackTrace trace =
          RunInversion(task, release, config.optimizer, config.rounds,
                       DeriveSeed(cell_seed, "attack", 0));
      const RegretFit fit = FitRegret(trace, config.p);
      const double eps_p = PrivacyLeakage(trace, original, diameter);

      for (double radius : config.radii) {
        RobustnessCheck cell;
        cell.radius = radius;
        cell.delta = delta;
        cell.seed = cell_seed;
        cell.eps_p = eps_p;
        const RobustnessMeasurement measurement = MeasureInputRobustness(
            task, radius, config.budget, RobustnessLevel::kGradient,
            DeriveSeed(cell_seed, "measure", static_cast<std::uint64_t>(
                                                 radius * 1e6)));
        cell.measured = measurement.measured;
        cell.prediction =
            PredictAlpha(lipschitz, radius, diameter, eps_p, constants.c_a,
                         constants.c_b, fit.c2_hat, config.rounds, config.p);
        Digest digest;
        digest.Add(delta).Add(radius).Add(cell_seed).Add(eps_p);
        const double slack =
            config.estimated_constants_slack * std::abs(cell.prediction.alpha);
        cell.check = BoundCheck::Make("privacy_robustness", cell.measured,
                                      cell.prediction.alpha + slack,
                                      config.tol, digest.Hex());
        cell.unhalved_lipschitz = BoundCheck::Make(
            "privacy_robustness.unhalved_lipschitz", cell.measured,
            lipschitz * radius + slack, config.tol, digest.Hex(),
            /*asserted=*/false, "averaged bound component, reported only");
        const double privacy_side =
            (4.0 * diameter * (1.0 - eps_p) -
             fit.c2_hat * constants.c_b *
                 std::pow(config.rounds, config.p - 1.0)) /
            constants.c_a;
        cell.unhalved_privacy = BoundCheck::Make(
            "privacy_robustness.unhalved_privacy", cell.measured,
            privacy_side + slack, config.tol, digest.Hex(),
            /*asserted=*/false, "averaged bound component, reported only");
        cells.push_back(std::move(cell));
      }
    }
  }
  return cells;
}

}  // namespace bayespriv
