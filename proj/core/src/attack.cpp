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

#include "bayespriv/attack.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
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

double Distance(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

// Adam moment state for one sample.
struct AdamState {
  std::vector<double> m1;
  std::vector<double> m2;
  int t = 0;
};

}  // namespace

ProtectedRelease ProtectedGradient(
    const ReconstructionTask& task,
    const std::vector<std::vector<double>>& data,
    const GradientPerturbation& perturbation) {
  if (data.empty()) throw ParameterError("batch must be nonempty");
  for (const auto& x : data) {
    if (!task.domain().Contains(x, 1e-12)) {
      throw ParameterError("batch contains a point outside the data domain");
    }
  }
  const int dim = task.data_dim();
  ProtectedRelease release;
  release.delta = MakeDeltaVector(perturbation, dim);
  release.distortion = perturbation.magnitude;
  release.mean.assign(static_cast<size_t>(dim), 0.0);
  release.per_sample.reserve(data.size());
  for (size_t m = 0; m < data.size(); ++m) {
    std::vector<double> g = task.Gradient(data[m], static_cast<int>(m));
    for (int i = 0; i < dim; ++i) {
      release.mean[static_cast<size_t>(i)] += g[static_cast<size_t>(i)];
      g[static_cast<size_t>(i)] += release.delta[static_cast<size_t>(i)];
    }
    release.per_sample.push_back(std::move(g));
  }
  for (int i = 0; i < dim; ++i) {
    release.mean[static_cast<size_t>(i)] =
        release.mean[static_cast<size_t>(i)] / static_cast<double>(data.size()) +
        release.delta[static_cast<size_t>(i)];
  }
  return release;
}

std::string OptimizerId(const OptimizerConfig& config) {
  const char* base =
      config.kind == OptimizerKind::kGradientDescent ? "gd" : "adam";
  return std::string(base) + "@" + std::to_string(config.step_scale);
}

AttackTrace RunInversion(const ReconstructionTask& task,
                         const ProtectedRelease& release,
                         const OptimizerConfig& optimizer, int rounds,
                         std::uint64_t seed) {
  if (rounds < 1) throw ParameterError("need at least one round");
  const size_t batch = release.per_sample.size();
  if (batch == 0) throw ParameterError("release carries no samples");
  const int dim = task.data_dim();
  const double step = optimizer.step_scale / task.LipschitzBound();

  Rng start_rng(DeriveSeed(seed, "inversion.start", 0));
  std::vector<std::vector<double>> current(batch);
  std::vector<AdamState> adam(batch);
  for (size_t m = 0; m < batch; ++m) {
    current[m] = task.domain().Sample(start_rng);
    adam[m].m1.assign(static_cast<size_t>(dim), 0.0);
    adam[m].m2.assign(static_cast<size_t>(dim), 0.0);
  }

  auto mean_gap = [&](const std::vector<std::vector<double>>& points) {
    double sum = 0.0;
    for (size_t m = 0; m < batch; ++m) {
      const std::vector<double> g =
          task.Gradient(points[m], static_cast<int>(m));
      sum += Distance(g, release.per_sample[m]);
    }
    return sum / static_cast<double>(batch);
  };

  AttackTrace trace;
  trace.rounds = rounds;
  trace.optimizer_id = OptimizerId(optimizer);
  trace.seed = seed;
  trace.iterates.reserve(static_cast<size_t>(rounds));
  trace.gradient_gaps.reserve(static_cast<size_t>(rounds));

  const double initial_gap = std::max(mean_gap(current), 1e-12);
  int runaway_rounds = 0;

  for (int round = 0; round < rounds; ++round) {
    for (size_t m = 0; m < batch; ++m) {
      std::vector<double> residual =
          task.Gradient(current[m], static_cast<int>(m));
      for (int i = 0; i < dim; ++i) {
        residual[static_cast<size_t>(i)] -=
            release.per_sample[m][static_cast<size_t>(i)];
      }
      const std::vector<double> grad =
          task.JacobianTransposeProduct(current[m], static_cast<int>(m),
                                        residual);
      if (optimizer.kind == OptimizerKind::kGradientDescent) {
        for (int i = 0; i < dim; ++i) {
          current[m][static_cast<size_t>(i)] -=
              step * grad[static_cast<size_t>(i)];
        }
      } else {
        AdamState& st = adam[m];
        ++st.t;
        constexpr double kBeta1 = 0.9;
        constexpr double kBeta2 = 0.999;
        constexpr double kEps = 1e-8;
        const double corr1 = 1.0 - std::pow(kBeta1, st.t);
        const double corr2 = 1.0 - std::pow(kBeta2, st.t);
        for (int i = 0; i < dim; ++i) {
          const size_t j = static_cast<size_t>(i);
          st.m1[j] = kBeta1 * st.m1[j] + (1.0 - kBeta1) * grad[j];
          st.m2[j] = kBeta2 * st.m2[j] + (1.0 - kBeta2) * grad[j] * grad[j];
          current[m][j] -= step * (st.m1[j] / corr1) /
                           (std::sqrt(st.m2[j] / corr2) + kEps);
        }
      }
      current[m] = task.domain().Project(std::move(current[m]));
    }
    const double gap = mean_gap(current);
    trace.iterates.push_back(current);
    trace.gradient_gaps.push_back(gap);
    if (gap > 10.0 * initial_gap) {
      if (++runaway_rounds >= 100) {
        throw DivergenceError("optimizer diverged: gap " +
                              std::to_string(gap) + " vs initial " +
                              std::to_string(initial_gap) +
                              " for 100 consecutive rounds");
      }
    } else {
      runaway_rounds = 0;
    }
  }
  return trace;
}

double PrivacyLeakage(const AttackTrace& trace,
                      const std::vector<std::vector<double>>& original,
                      double diameter) {
  if (!(diameter > 0.0)) throw ParameterError("diameter must be positive");
  if (trace.rounds == 0) return 0.0;
  if (trace.iterates.empty() ||
      trace.iterates.front().size() != original.size()) {
    throw ParameterError("trace and original batch sizes differ");
  }
  double total = 0.0;
  for (const auto& round : trace.iterates) {
    double round_sum = 0.0;
    for (size_t m = 0; m < original.size(); ++m) {
      const double dist = Distance(round[m], original[m]);
      if (dist > diameter + 1e-9) {
        throw ParameterError("reconstruction distance " +
                             std::to_string(dist) +
                             " exceeds the domain bound " +
                             std::to_string(diameter));
      }
      round_sum += dist;
    }
    total += round_sum / static_cast<double>(original.size());
  }
  const double mean_distance = total / static_cast<double>(trace.rounds);
  return std::clamp((diameter - mean_distance) / diameter, 0.0, 1.0);
}

RegretFit FitRegret(const AttackTrace& trace, double p) {
  if (trace.rounds < 10) throw ParameterError("need at least 10 rounds");
  if (!(p > 0.0 && p <= 1.0)) throw ParameterError("p must lie in (0, 1]");
  RegretFit fit;
  fit.p = p;
  fit.prefix_curve.reserve(static_cast<size_t>(trace.rounds));
  double cumulative = 0.0;
  double c2 = 0.0;
  double c0 = std::numeric_limits<double>::infinity();
  for (int i = 0; i < trace.rounds; ++i) {
    cumulative += trace.gradient_gaps[static_cast<size_t>(i)];
    fit.prefix_curve.push_back(cumulative);
    const double ratio = cumulative / std::pow(i + 1.0, p);
    c2 = std::max(c2, ratio);
    if (i + 1 >= 5) c0 = std::min(c0, ratio);
  }
  if (cumulative == 0.0) {
    fit.degenerate = true;
    fit.c0_hat = 0.0;
    fit.c2_hat = 0.0;
    return fit;
  }
  fit.c0_hat = c0;
  fit.c2_hat = c2;
  fit.conforming = c2 <= RegretFit::kNonConformingRatio * c0;
  return fit;
}

std::vector<DistortionCheck> VerifyPrivacyDistortion(
    const ReconstructionTask& task, const PrivacyDistortionConfig& config,
    std::uint64_t master_seed) {
  if (config.deltas.empty() || config.rounds.empty() || config.seeds < 1 ||
      config.batch_size < 1) {
    throw ParameterError("distortion sweep needs a nonempty grid");
  }
  const double diameter = task.diameter();
  BiLipschitzEstimate constants{1.0, 1.0, 0};
  if (!task.HasExactConstants()) {
    constants = EstimateBiLipschitz(task, config.constant_pairs,
                                    DeriveSeed(master_seed, "constants", 0));
  }

  std::vector<DistortionCheck> cells;
  std::uint64_t index = 0;
  for (double delta : config.deltas) {
    for (int rounds : config.rounds) {
      for (int s = 0; s < config.seeds; ++s, ++index) {
        const std::uint64_t cell_seed =
            DeriveSeed(master_seed, "distortion.cell", index);
        DistortionCheck cell;
        cell.delta = delta;
        cell.rounds = rounds;
        cell.seed = cell_seed;
        cell.c_a = constants.c_a;
        cell.c_b = constants.c_b;

        Rng batch_rng(DeriveSeed(cell_seed, "batch", 0));
        cell.original.reserve(static_cast<size_t>(config.batch_size));
        for (int m = 0; m < config.batch_size; ++m) {
          cell.original.push_back(task.domain().Sample(batch_rng));
        }

        GradientPerturbation perturbation;
        perturbation.mode = config.mode;
        perturbation.magnitude = delta;
        perturbation.seed = DeriveSeed(cell_seed, "delta", 0);
        const ProtectedRelease release =
            ProtectedGradient(task, cell.original, perturbation);
        cell.trace = RunInversion(task, release, config.optimizer, rounds,
                                  DeriveSeed(cell_seed, "attack", 0));
        const RegretFit fit = FitRegret(cell.trace, config.p);
        cell.c0_hat = fit.c0_hat;
        cell.c2_hat = fit.c2_hat;

        const double horizon = std::pow(rounds, config.p - 1.0);
        cell.precondition_rhs =
            2.0 * fit.c2_hat * cell.c_b / cell.c_a * horizon;
        cell.eps_p = PrivacyLeakage(cell.trace, cell.original, diameter);

        Digest digest;
        digest.Add(delta).Add(rounds).Add(cell_seed).Add(cell.eps_p);

        if (delta + 1e-12 < cell.precondition_rhs) {
          cell.skipped = true;
          cell.skip_reason = "delta " + std::to_string(delta) +
                             " below precondition " +
                             std::to_string(cell.precondition_rhs);
          cells.push_back(std::move(cell));
          continue;
        }

        const double rhs_appendix =
            1.0 - (cell.c_a * delta + fit.c2_hat * cell.c_b * horizon) /
                      (4.0 * diameter);
        const double rhs_maintext =
            1.0 - (cell.c_a * delta + cell.c_a * fit.c0_hat * horizon) /
                      (4.0 * diameter);
        const double slack =
            config.estimated_constants_slack * std::abs(rhs_appendix);
        cell.appendix = BoundCheck::Make("privacy_distortion.appendix",
                                         cell.eps_p, rhs_appendix + slack,
                                         config.tol, digest.Hex());
        cell.maintext = BoundCheck::Make(
            "privacy_distortion.maintext", cell.eps_p, rhs_maintext + slack,
            config.tol, digest.Hex(), /*asserted=*/false,
            "main-text constant variant, reported only");
        cells.push_back(std::move(cell));
      }
    }
  }
  return cells;
}

void WriteTraceCsv(std::ostream& out, const AttackTrace& trace,
                   const std::vector<std::vector<double>>& original) {
  out << "round,sample,distance,gradient_gap\n";
  out.precision(17);
  for (int i = 0; i < trace.rounds; ++i) {
    for (size_t m = 0; m < original.size(); ++m) {
      out << i << ',' << m << ','
          << Distance(trace.iterates[static_cast<size_t>(i)][m], original[m])
          << ',' << trace.gradient_gaps[static_cast<size_t>(i)] << '\n';
    }
  }
}

}  // namespace bayespriv
