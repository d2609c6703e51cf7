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

#include <cmath>
#include <sstream>

#include "gtest/gtest.h"

#include "bayespriv/digest.hpp"
#include "bayespriv/error.hpp"
#include "bayespriv/rng.hpp"

namespace bayespriv {
namespace {

ReconstructionTask UnitTranslation(double theta = 0.5) {
  return ReconstructionTask::Translation({theta}, Box::Unit(1));
}

TEST(ProtectedGradientTest, CleanReleaseMatchesGradients) {
  const ReconstructionTask task = UnitTranslation();
  const std::vector<std::vector<double>> batch = {{0.2}, {0.9}};
  GradientPerturbation none;
  const ProtectedRelease release = ProtectedGradient(task, batch, none);
  EXPECT_DOUBLE_EQ(release.per_sample[0][0], 0.3);   // 0.5 - 0.2
  EXPECT_DOUBLE_EQ(release.per_sample[1][0], -0.4);  // 0.5 - 0.9
  EXPECT_DOUBLE_EQ(release.mean[0], -0.05);
  EXPECT_DOUBLE_EQ(release.distortion, 0.0);
}

TEST(ProtectedGradientTest, FixedDirectionShiftsEverySample) {
  const ReconstructionTask task = UnitTranslation();
  const std::vector<std::vector<double>> batch = {{0.5}, {0.7}};
  GradientPerturbation perturbation;
  perturbation.magnitude = 0.2;
  const ProtectedRelease release =
      ProtectedGradient(task, batch, perturbation);
  EXPECT_DOUBLE_EQ(release.distortion, 0.2);
  EXPECT_NEAR(release.per_sample[0][0], 0.2, 1e-15);  // (0.5-0.5) + 0.2
  EXPECT_NEAR(release.per_sample[1][0], 0.0, 1e-15);  // (0.5-0.7) + 0.2
}

TEST(ProtectedGradientTest, IsotropicDeterministicAndValidating) {
  const ReconstructionTask task = UnitTranslation();
  const std::vector<std::vector<double>> batch = {{0.4}};
  GradientPerturbation perturbation;
  perturbation.mode = PerturbationMode::kIsotropicRandom;
  perturbation.magnitude = 0.3;
  perturbation.seed = 5;
  const ProtectedRelease a = ProtectedGradient(task, batch, perturbation);
  const ProtectedRelease b = ProtectedGradient(task, batch, perturbation);
  EXPECT_EQ(a.delta, b.delta);

  const std::vector<std::vector<double>> outside = {{1.4}};
  EXPECT_THROW(ProtectedGradient(task, outside, perturbation),
               ParameterError);
  EXPECT_THROW(ProtectedGradient(task, {}, perturbation), ParameterError);
}

TEST(RunInversionTest, CleanTranslationRecoversExactly) {
  const ReconstructionTask task = UnitTranslation();
  const std::vector<std::vector<double>> batch = {{0.15}, {0.62}, {0.88}};
  const ProtectedRelease release =
      ProtectedGradient(task, batch, GradientPerturbation{});
  const AttackTrace trace =
      RunInversion(task, release, OptimizerConfig{}, 400, 11);
  const auto& final_round = trace.iterates.back();
  for (size_t m = 0; m < batch.size(); ++m) {
    EXPECT_NEAR(final_round[m][0], batch[m][0], 1e-8);
  }
}

TEST(RunInversionTest, DistortedTranslationLandsAtAnalyticOptimum) {
  // The matching objective's optimum is the delta-image of each sample, so
  // the terminal distance to the original equals the distortion exactly.
  const ReconstructionTask task = UnitTranslation();
  const std::vector<std::vector<double>> batch = {{0.5}, {0.7}};
  GradientPerturbation perturbation;
  perturbation.magnitude = 0.2;  // +e1: optima at 0.3 and 0.5, inside domain
  const ProtectedRelease release =
      ProtectedGradient(task, batch, perturbation);
  const AttackTrace trace =
      RunInversion(task, release, OptimizerConfig{}, 500, 3);
  const auto& final_round = trace.iterates.back();
  for (size_t m = 0; m < batch.size(); ++m) {
    const double expected = batch[m][0] - 0.2;
    EXPECT_NEAR(final_round[m][0], expected, 1e-9);
    EXPECT_NEAR(std::abs(final_round[m][0] - batch[m][0]), 0.2, 1e-6);
  }
}

TEST(RunInversionTest, RegressionScalarMatchesClosedFormRoot) {
  const ReconstructionTask task = ReconstructionTask::LinearRegression(
      {1.2}, Box::Unit(1), {-0.5});
  const std::vector<std::vector<double>> batch = {{0.6}};
  const ProtectedRelease release =
      ProtectedGradient(task, batch, GradientPerturbation{});
  // Independent quadratic-root oracle for theta x^2 - y x = W.
  const double w = release.per_sample[0][0];
  const double root =
      (-0.5 + std::sqrt(0.25 + 4.0 * 1.2 * w)) / (2.0 * 1.2);
  EXPECT_NEAR(root, 0.6, 1e-12);
  EXPECT_NEAR(task.InvertGradient(release.per_sample[0], 0)[0], root, 1e-12);

  const AttackTrace trace =
      RunInversion(task, release, OptimizerConfig{}, 800, 29);
  EXPECT_NEAR(trace.iterates.back()[0][0], 0.6, 1e-4);
}

TEST(RunInversionTest, AdamAlsoConverges) {
  const ReconstructionTask task = UnitTranslation();
  const std::vector<std::vector<double>> batch = {{0.35}};
  const ProtectedRelease release =
      ProtectedGradient(task, batch, GradientPerturbation{});
  OptimizerConfig adam;
  adam.kind = OptimizerKind::kAdam;
  const AttackTrace trace = RunInversion(task, release, adam, 2000, 17);
  EXPECT_NEAR(trace.iterates.back()[0][0], 0.35, 1e-3);
  EXPECT_EQ(trace.optimizer_id.rfind("adam", 0), 0u);
}

TEST(RunInversionTest, TracesAreBitReproducible) {
  const ReconstructionTask task = UnitTranslation();
  const std::vector<std::vector<double>> batch = {{0.2}, {0.8}};
  GradientPerturbation perturbation;
  perturbation.mode = PerturbationMode::kIsotropicRandom;
  perturbation.magnitude = 0.25;
  perturbation.seed = 9;
  const ProtectedRelease release =
      ProtectedGradient(task, batch, perturbation);
  const AttackTrace a = RunInversion(task, release, OptimizerConfig{}, 50, 4);
  const AttackTrace b = RunInversion(task, release, OptimizerConfig{}, 50, 4);
  Digest da;
  Digest db;
  for (int i = 0; i < a.rounds; ++i) {
    for (size_t m = 0; m < batch.size(); ++m) {
      da.Add(std::span<const double>(a.iterates[i][m]));
      db.Add(std::span<const double>(b.iterates[i][m]));
    }
  }
  EXPECT_EQ(da.Hex(), db.Hex());
  EXPECT_EQ(a.gradient_gaps, b.gradient_gaps);
}

TEST(RunInversionTest, RunawayOptimizerRaisesDivergenceError) {
  const ReconstructionTask task = UnitTranslation();
  // Recover the seeded start so the target can be planted right next to it;
  // an overshooting step then grows the gap beyond ten times its initial
  // value and keeps it there.
  const std::uint64_t seed = 5;
  Rng start_rng(DeriveSeed(seed, "inversion.start", 0));
  const double x0 = task.domain().Sample(start_rng)[0];
  const double target = x0 + (x0 < 0.5 ? 1e-3 : -1e-3);
  ProtectedRelease release;
  release.per_sample = {{0.5 - target}};  // g(target)
  release.mean = release.per_sample[0];
  release.delta = {0.0};
  release.distortion = 0.0;
  OptimizerConfig overshooting;
  overshooting.step_scale = 2.5;
  EXPECT_THROW(RunInversion(task, release, overshooting, 200, seed),
               DivergenceError);
}

TEST(PrivacyLeakageTest, DefinitionBranches) {
  AttackTrace empty;
  empty.rounds = 0;
  EXPECT_DOUBLE_EQ(PrivacyLeakage(empty, {{0.3}}, 1.0), 0.0);

  AttackTrace perfect;
  perfect.rounds = 2;
  perfect.iterates = {{{0.3}}, {{0.3}}};
  perfect.gradient_gaps = {0.0, 0.0};
  EXPECT_DOUBLE_EQ(PrivacyLeakage(perfect, {{0.3}}, 1.0), 1.0);

  AttackTrace maximal;
  maximal.rounds = 2;
  maximal.iterates = {{{1.0}}, {{1.0}}};
  maximal.gradient_gaps = {0.0, 0.0};
  EXPECT_DOUBLE_EQ(PrivacyLeakage(maximal, {{0.0}}, 1.0), 0.0);

  AttackTrace outlier;
  outlier.rounds = 1;
  outlier.iterates = {{{1.0}}};
  outlier.gradient_gaps = {0.0};
  EXPECT_THROW(PrivacyLeakage(outlier, {{0.0}}, 0.5), ParameterError);
}

TEST(FitRegretTest, SqrtGapsMatchHarmonicOracle) {
  const double c = 0.7;
  const int rounds = 10000;
  AttackTrace trace;
  trace.rounds = rounds;
  trace.gradient_gaps.resize(rounds);
  for (int i = 0; i < rounds; ++i) {
    trace.gradient_gaps[i] = c / std::sqrt(i + 1.0);
  }
  const RegretFit fit = FitRegret(trace);

  // Independent prefix-sum oracle.
  double cumulative = 0.0;
  double expected_c2 = 0.0;
  double expected_c0 = 1e300;
  for (int i = 0; i < rounds; ++i) {
    cumulative += trace.gradient_gaps[i];
    const double ratio = cumulative / std::sqrt(i + 1.0);
    expected_c2 = std::max(expected_c2, ratio);
    if (i + 1 >= 5) expected_c0 = std::min(expected_c0, ratio);
  }
  EXPECT_NEAR(fit.c2_hat, expected_c2, 1e-12);
  EXPECT_NEAR(fit.c0_hat, expected_c0, 1e-12);
  // The harmonic sum makes the envelope constant approach 2c.
  EXPECT_NEAR(fit.c2_hat, 2.0 * c, 0.02 * c);
  EXPECT_TRUE(fit.conforming);
  EXPECT_FALSE(fit.degenerate);
}

TEST(FitRegretTest, FlagsDegenerateAndNonConforming) {
  AttackTrace zeros;
  zeros.rounds = 20;
  zeros.gradient_gaps.assign(20, 0.0);
  const RegretFit degenerate = FitRegret(zeros);
  EXPECT_TRUE(degenerate.degenerate);
  EXPECT_DOUBLE_EQ(degenerate.c0_hat, 0.0);
  EXPECT_DOUBLE_EQ(degenerate.c2_hat, 0.0);

  AttackTrace constant;
  constant.rounds = 400;
  constant.gradient_gaps.assign(400, 0.5);
  const RegretFit linear = FitRegret(constant);
  EXPECT_FALSE(linear.conforming);  // Theta(I) growth is not Theta(sqrt I)

  AttackTrace short_trace;
  short_trace.rounds = 5;
  short_trace.gradient_gaps.assign(5, 0.1);
  EXPECT_THROW(FitRegret(short_trace), ParameterError);
}

TEST(FitRegretTest, EnvelopeHoldsOnRecordedPrefixes) {
  Rng rng(123);
  AttackTrace trace;
  trace.rounds = 200;
  trace.gradient_gaps.resize(200);
  for (double& gap : trace.gradient_gaps) gap = rng.Uniform(0.0, 1.0);
  const RegretFit fit = FitRegret(trace);
  double cumulative = 0.0;
  for (int i = 0; i < trace.rounds; ++i) {
    cumulative += trace.gradient_gaps[i];
    const double scale = std::sqrt(i + 1.0);
    EXPECT_LE(cumulative, fit.c2_hat * scale + 1e-12);
    if (i + 1 >= 5) EXPECT_GE(cumulative, fit.c0_hat * scale - 1e-12);
  }
}

TEST(VerifyPrivacyDistortionTest, AppendixBoundHoldsOnMiniGrid) {
  const ReconstructionTask task = UnitTranslation();
  PrivacyDistortionConfig config;
  config.deltas = {0.4, 0.8};
  config.rounds = {100};
  config.seeds = 3;
  config.batch_size = 4;
  const auto cells = VerifyPrivacyDistortion(task, config, 2026);
  int asserted = 0;
  for (const auto& cell : cells) {
    if (cell.skipped) {
      EXPECT_FALSE(cell.skip_reason.empty());
      continue;
    }
    ++asserted;
    EXPECT_TRUE(cell.appendix.holds) << cell.appendix.ToJsonLine();
    EXPECT_TRUE(cell.appendix.asserted);
    EXPECT_FALSE(cell.maintext.asserted);
    EXPECT_GE(cell.delta, cell.precondition_rhs - 1e-12);
  }
  EXPECT_GT(asserted, 0);
}

TEST(VerifyPrivacyDistortionTest, Deterministic) {
  const ReconstructionTask task = UnitTranslation();
  PrivacyDistortionConfig config;
  config.deltas = {0.5};
  config.rounds = {80};
  config.seeds = 2;
  config.batch_size = 3;
  const auto a = VerifyPrivacyDistortion(task, config, 7);
  const auto b = VerifyPrivacyDistortion(task, config, 7);
  ASSERT_EQ(a.size(), b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].appendix.ToJsonLine(), b[i].appendix.ToJsonLine());
    EXPECT_EQ(a[i].eps_p, b[i].eps_p);
  }
}

TEST(WriteTraceCsvTest, RowPerRoundAndSample) {
  const ReconstructionTask task = UnitTranslation();
  const std::vector<std::vector<double>> batch = {{0.2}, {0.6}};
  const ProtectedRelease release =
      ProtectedGradient(task, batch, GradientPerturbation{});
  const AttackTrace trace =
      RunInversion(task, release, OptimizerConfig{}, 10, 1);
  std::ostringstream out;
  WriteTraceCsv(out, trace, batch);
  const std::string csv = out.str();
  EXPECT_EQ(csv.rfind("round,sample,distance,gradient_gap\n", 0), 0u);
  int newlines = 0;
  for (char ch : csv) {
    if (ch == '\n') ++newlines;
  }
  EXPECT_EQ(newlines, 1 + 10 * 2);
}

}  // namespace
}  // namespace bayespriv
