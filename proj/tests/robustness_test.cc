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

#include <cmath>

#include "gtest/gtest.h"

#include "bayespriv/error.hpp"

namespace bayespriv {
namespace {

ReconstructionTask UnitTranslation() {
  return ReconstructionTask::Translation({0.5}, Box::Unit(1));
}

ReconstructionTask UnitRegression() {
  return ReconstructionTask::LinearRegression({1.2}, Box::Unit(1),
                                              {-0.5, -0.75});
}

TEST(MeasureInputRobustnessTest, ZeroRadiusIsZero) {
  const RobustnessMeasurement m = MeasureInputRobustness(
      UnitTranslation(), 0.0, RobustnessBudget{}, RobustnessLevel::kGradient,
      1);
  EXPECT_DOUBLE_EQ(m.measured, 0.0);
}

TEST(MeasureInputRobustnessTest, TranslationGradientChangeEqualsRadius) {
  // For the translation family the gradient change is exactly the probe
  // norm, so the measurement reproduces r; an exact end-to-end oracle for
  // the probing machinery.
  RobustnessBudget budget;
  budget.x_samples = 200;
  budget.probes = 8;
  for (double radius : {0.1, 0.25, 0.5}) {
    const RobustnessMeasurement m = MeasureInputRobustness(
        UnitTranslation(), radius, budget, RobustnessLevel::kGradient, 7);
    EXPECT_NEAR(m.measured, radius, 1e-9);
    EXPECT_LT(m.std_error, 1e-9);
  }
}

TEST(MeasureInputRobustnessTest, RegressionBoundedByLipschitzEstimate) {
  const ReconstructionTask task = UnitRegression();
  const double lipschitz = LipschitzEstimate(task, 5000, 3);
  RobustnessBudget budget;
  budget.x_samples = 400;
  budget.probes = 8;
  for (double radius : {0.1, 0.3}) {
    const RobustnessMeasurement m = MeasureInputRobustness(
        task, radius, budget, RobustnessLevel::kGradient, 11);
    EXPECT_LE(m.measured, lipschitz * radius * 1.001);
    EXPECT_GT(m.measured, 0.0);
  }
}

TEST(MeasureInputRobustnessTest, MonotoneInRadiusAndBudget) {
  const ReconstructionTask task = UnitRegression();
  RobustnessBudget budget;
  budget.x_samples = 100;
  budget.probes = 6;
  budget.ascent_steps = 0;  // keeps probe streams nested across calls
  double previous = -1.0;
  for (double radius : {0.05, 0.1, 0.2, 0.4}) {
    const RobustnessMeasurement m = MeasureInputRobustness(
        task, radius, budget, RobustnessLevel::kGradient, 5);
    EXPECT_GE(m.measured, previous);
    previous = m.measured;
  }
  RobustnessBudget richer = budget;
  richer.probes = 12;
  const double narrow =
      MeasureInputRobustness(task, 0.2, budget, RobustnessLevel::kGradient, 5)
          .measured;
  const double wide =
      MeasureInputRobustness(task, 0.2, richer, RobustnessLevel::kGradient, 5)
          .measured;
  EXPECT_GE(wide, narrow);
}

TEST(MeasureInputRobustnessTest, OutputLevelIsFiniteAndNonnegative) {
  const RobustnessMeasurement m = MeasureInputRobustness(
      UnitRegression(), 0.25, RobustnessBudget{}, RobustnessLevel::kOutput,
      13);
  EXPECT_GE(m.measured, 0.0);
  EXPECT_LE(m.measured, 1.2 * 0.25 * 1.01);  // |theta| r for the linear output
  EXPECT_EQ(m.level, RobustnessLevel::kOutput);
}

TEST(MeasureInputRobustnessTest, Validation) {
  EXPECT_THROW(MeasureInputRobustness(UnitTranslation(), -0.1,
                                      RobustnessBudget{},
                                      RobustnessLevel::kGradient, 1),
               ParameterError);
  RobustnessBudget empty;
  empty.x_samples = 0;
  EXPECT_THROW(MeasureInputRobustness(UnitTranslation(), 0.1, empty,
                                      RobustnessLevel::kGradient, 1),
               ParameterError);
}

TEST(LipschitzEstimateTest, ExactForTranslation) {
  EXPECT_DOUBLE_EQ(LipschitzEstimate(UnitTranslation(), 1000, 1), 1.0);
}

TEST(LipschitzEstimateTest, RegressionBelowAnalyticBound) {
  const ReconstructionTask task = UnitRegression();
  const double estimate = LipschitzEstimate(task, 20000, 2);
  EXPECT_GT(estimate, 1.0);
  EXPECT_LE(estimate, task.LipschitzBound() + 1e-12);
  EXPECT_THROW(LipschitzEstimate(task, 999, 2), ParameterError);
}

TEST(PredictAlphaTest, DirectSubstitution) {
  // C=1, r=0.5, D=1, eps_p=0.5, c_a=c_b=1, negligible regret term.
  const AlphaPrediction p = PredictAlpha(1.0, 0.5, 1.0, 0.5, 1.0, 1.0, 0.0, 1);
  EXPECT_DOUBLE_EQ(p.alpha, 1.25);
  EXPECT_FALSE(p.second_term_negative);

  // Full leakage and no regret term leaves only C r / 2.
  const AlphaPrediction q = PredictAlpha(1.0, 0.4, 1.0, 1.0, 1.0, 1.0, 0.0, 1);
  EXPECT_DOUBLE_EQ(q.alpha, 0.2);

  EXPECT_THROW(PredictAlpha(1.0, 0.1, 1.0, 0.5, 0.0, 1.0, 0.0, 1),
               ParameterError);
  EXPECT_THROW(PredictAlpha(1.0, 0.1, 1.0, 0.5, 1.0, 1.0, 0.0, 0),
               ParameterError);
}

TEST(PredictAlphaTest, AffineInRadiusAntitoneInLeakage) {
  const AlphaPrediction base =
      PredictAlpha(2.0, 0.0, 1.0, 0.3, 0.5, 1.5, 1.0, 100);
  double previous = base.alpha - 1.0;
  for (double r = 0.0; r <= 1.0; r += 0.1) {
    const AlphaPrediction p = PredictAlpha(2.0, r, 1.0, 0.3, 0.5, 1.5, 1.0, 100);
    EXPECT_NEAR(p.alpha, base.alpha + 0.5 * 2.0 * r, 1e-12);
    EXPECT_GT(p.alpha, previous);
    previous = p.alpha;
  }
  double previous_alpha = 1e300;
  for (double eps = 0.0; eps <= 1.0; eps += 0.125) {
    const AlphaPrediction p =
        PredictAlpha(2.0, 0.2, 1.0, eps, 0.5, 1.5, 1.0, 100);
    EXPECT_LT(p.alpha, previous_alpha);
    previous_alpha = p.alpha;
  }
  const AlphaPrediction negative =
      PredictAlpha(1.0, 0.0, 1.0, 1.0, 1.0, 1.0, 5.0, 1);
  EXPECT_TRUE(negative.second_term_negative);
}

TEST(VerifyPrivacyRobustnessTest, TranslationMiniGridHolds) {
  PrivacyRobustnessConfig config;
  config.radii = {0.1, 0.25};
  config.deltas = {0.5};
  config.rounds = 300;
  config.seeds = 2;
  config.batch_size = 4;
  config.budget.x_samples = 200;
  config.budget.probes = 8;
  const auto cells =
      VerifyPrivacyRobustness(UnitTranslation(), config, 2026);
  ASSERT_EQ(cells.size(), 4u);
  for (const auto& cell : cells) {
    EXPECT_TRUE(cell.check.holds) << cell.check.ToJsonLine();
    EXPECT_TRUE(cell.check.asserted);
    EXPECT_FALSE(cell.unhalved_lipschitz.asserted);
    EXPECT_FALSE(cell.unhalved_privacy.asserted);
    EXPECT_NEAR(cell.measured, cell.radius, 1e-9);
  }
}

TEST(VerifyPrivacyRobustnessTest, RegressionWithSlackHolds) {
  PrivacyRobustnessConfig config;
  config.radii = {0.1, 0.25};
  config.deltas = {0.5};
  config.rounds = 300;
  config.seeds = 2;
  config.batch_size = 2;
  config.budget.x_samples = 200;
  config.budget.probes = 8;
  config.estimated_constants_slack = 0.05;
  const auto cells = VerifyPrivacyRobustness(UnitRegression(), config, 11);
  for (const auto& cell : cells) {
    EXPECT_TRUE(cell.check.holds) << cell.check.ToJsonLine();
  }
}

}  // namespace
}  // namespace bayespriv
