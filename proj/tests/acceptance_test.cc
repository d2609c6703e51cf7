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

// Acceptance suite. Each criterion runs at full scale with its stated
// tolerance and prints one PASS/FAIL line; the final criterion re-runs the
// whole bundle and compares verdict payloads byte for byte.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "gtest/gtest.h"

#include "bayespriv/digest.hpp"
#include "bayespriv/experiment.hpp"
#include "bayespriv/metrics.hpp"
#include "bayespriv/rng.hpp"
#include "bayespriv/theorems.hpp"

namespace bayespriv {
namespace {

constexpr std::uint64_t kMasterSeed = 20260809;

struct CriterionResult {
  bool pass = false;
  std::int64_t instances = 0;
  std::int64_t failures = 0;
  double worst_slack = std::numeric_limits<double>::infinity();
  double seconds = 0.0;
  std::string detail;
};

struct BundleResult {
  CriterionResult criteria[10];
  std::string verdict_payload;  // every BoundCheck, one JSON line each
};

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double Seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void Absorb(CriterionResult& result, const BoundCheck& check,
            std::string* payload) {
  *payload += check.ToJsonLine();
  *payload += '\n';
  if (!check.asserted) return;
  ++result.instances;
  if (!check.holds) ++result.failures;
  result.worst_slack = std::min(result.worst_slack, check.slack());
}

// Criterion 1: LDP<->MBP lemma over 1000 random kernels x 100 positive
// priors, plus the 2 xi_sup direction, all within 1e-9.
// Criterion 2: total-probability identity (ABP <= 1e-12 at equal priors).
// Criterion 3: MBP->ABP bound for attacker priors within e^{+-eps},
// eps in {0, 0.1, 0.5}.
void RunKernelCriteria(BundleResult& bundle) {
  CriterionResult& c1 = bundle.criteria[0];
  CriterionResult& c2 = bundle.criteria[1];
  CriterionResult& c3 = bundle.criteria[2];
  Timer timer_all;
  double lemma_seconds = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const std::uint64_t kernel_seed =
        DeriveSeed(kMasterSeed, "accept.kernel", static_cast<std::uint64_t>(k));
    Rng shape_rng(kernel_seed);
    const int n_in = 2 + shape_rng.UniformInt(7);
    const int n_out = 2 + shape_rng.UniformInt(7);
    const StochasticKernel kernel =
        RandomKernel(DeriveSeed(kernel_seed, "rows", 0), n_in, n_out, 1e-3);

    Timer lemma_timer;
    std::vector<DiscreteDistribution> priors;
    priors.reserve(100);
    for (int j = 0; j < 100; ++j) {
      priors.push_back(DiscreteDistribution::Random(
          DeriveSeed(kernel_seed, "prior", static_cast<std::uint64_t>(j)),
          n_in, 1e-3));
    }
    for (const BoundCheck& check : VerifyLdpMbp(kernel, priors, 1e-9)) {
      Absorb(c1, check, &bundle.verdict_payload);
    }
    lemma_seconds += lemma_timer.Seconds();

    const DiscreteDistribution true_prior = DiscreteDistribution::Random(
        DeriveSeed(kernel_seed, "true_prior", 0), n_in, 1e-3);
    {
      Digest digest;
      digest.Add(kernel.DigestHex()).Add(true_prior.DigestHex());
      Absorb(c2,
             BoundCheck::Make("total_probability.identity",
                              AbpEpsilon(kernel, true_prior, true_prior), 0.0,
                              1e-12, digest.Hex()),
             &bundle.verdict_payload);
    }
    const double eps_levels[] = {0.0, 0.1, 0.5};
    for (size_t level = 0; level < 3; ++level) {
      Rng mismatch_rng(DeriveSeed(kernel_seed, "attacker_prior", level));
      const DiscreteDistribution attacker =
          AttackerPriorWithin(true_prior, eps_levels[level], mismatch_rng);
      Absorb(c3, VerifyMbpAbp(kernel, true_prior, attacker, 1e-9),
             &bundle.verdict_payload);
    }
  }
  c1.seconds = lemma_seconds;
  c1.pass = c1.failures == 0 && lemma_seconds < 30.0;
  c2.seconds = timer_all.Seconds();
  c2.pass = c2.failures == 0;
  c3.seconds = timer_all.Seconds();
  c3.pass = c3.failures == 0;
}

// Criterion 4: PAC robustness, 500 exactly-enumerated instances with
// xi_sup <= 1, tolerance 1e-12, under 10 s.
void RunPacCriterion(BundleResult& bundle) {
  CriterionResult& c4 = bundle.criteria[3];
  Timer timer;
  for (int i = 0; i < 500; ++i) {
    const PacMechanism mechanism = MakePacInstance(
        DeriveSeed(kMasterSeed, "accept.pac", static_cast<std::uint64_t>(i)),
        i);
    const PacVerdict verdict = VerifyPacRobustness(mechanism, 1e-12);
    if (verdict.xi_sup > 1.0) {
      ++c4.failures;  // generator contract: every instance inside the range
    }
    Absorb(c4, verdict.main, &bundle.verdict_payload);
    Absorb(c4, verdict.chain_e2xi, &bundle.verdict_payload);
  }
  c4.seconds = timer.Seconds();
  c4.pass = c4.failures == 0 && c4.seconds < 10.0;
}

// Criterion 5: privacy-distortion lemma sweep (appendix constants asserted,
// main-text variant reported), >= 95% of qualifying cells, under 60 s.
void RunAttackCriterion(BundleResult& bundle) {
  CriterionResult& c5 = bundle.criteria[4];
  Timer timer;
  const SuiteOutcome outcome = RunAttackSuite(AttackSuiteConfig{},
                                              DeriveSeed(kMasterSeed,
                                                         "accept.attack", 0));
  std::int64_t skipped = 0;
  for (const auto& row : outcome.summary) {
    if (row.suite == "privacy_distortion.appendix") skipped = row.skipped;
  }
  for (const BoundCheck& check : outcome.checks) {
    Absorb(c5, check, &bundle.verdict_payload);
  }
  c5.seconds = timer.Seconds();
  c5.pass = c5.failures == 0 && c5.seconds < 60.0;
  c5.detail = "skipped=" + std::to_string(skipped);
}

// Criterion 6: privacy -> robustness theorem, translation grid at 1e-6 and
// the estimated-constant regression variant at 5% slack.
void RunRobustCriterion(BundleResult& bundle) {
  CriterionResult& c6 = bundle.criteria[5];
  Timer timer;
  const SuiteOutcome outcome = RunRobustSuite(RobustSuiteConfig{},
                                              DeriveSeed(kMasterSeed,
                                                         "accept.robust", 0));
  for (const BoundCheck& check : outcome.checks) {
    Absorb(c6, check, &bundle.verdict_payload);
  }
  c6.seconds = timer.Seconds();
  c6.pass = c6.failures == 0;
}

// Criterion 7: kappa1 concentration grid, 1e5 Monte Carlo repetitions per
// cell with a 3 sigma slack, under 60 s.
void RunKappa1Criterion(BundleResult& bundle) {
  CriterionResult& c7 = bundle.criteria[6];
  Timer timer;
  std::uint64_t cell = 0;
  for (double kappa1 : {0.1, 0.5, 0.9}) {
    for (int t_draws : {100, 1000}) {
      for (double eps : {0.1, 0.2}) {
        const ConcentrationCheck check = VerifyKappa1Concentration(
            kappa1, t_draws, eps, 100000,
            DeriveSeed(kMasterSeed, "accept.kappa1", cell++));
        Absorb(c7, check.check, &bundle.verdict_payload);
      }
    }
  }
  c7.seconds = timer.Seconds();
  c7.pass = c7.failures == 0 && c7.seconds < 60.0;
}

// Criterion 8: C1 estimation-error theorem over 1000 corner-searched pairs
// and the factor-2 transfer to the leakage estimate; the 3/2-factor pass
// rate is reported, not asserted.
void RunC1Criterion(BundleResult& bundle) {
  CriterionResult& c8 = bundle.criteria[7];
  Timer timer;
  std::vector<PrivacyEstimationInstance> instances;
  instances.reserve(3000);
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t pair_seed =
        DeriveSeed(kMasterSeed, "accept.c1", static_cast<std::uint64_t>(i));
    const int support = 2 + i % 11;
    const DiscreteDistribution kappa1 = DiscreteDistribution::Random(
        DeriveSeed(pair_seed, "kappa1", 0), support, 1e-4);
    const DiscreteDistribution kappa2 = DiscreteDistribution::Random(
        DeriveSeed(pair_seed, "kappa2", 0), support, 1e-4);
    for (double eps : {0.05, 0.1, 0.3}) {
      const C1ErrorCheck check = VerifyC1Error(kappa1, kappa2, eps, 1e-9);
      Absorb(c8, check.check, &bundle.verdict_payload);
      instances.push_back(PrivacyEstimationInstance{kappa1, kappa2, eps});
    }
  }
  const PrivacyEstimationReport report =
      VerifyPrivacyEstimationError(instances, 1e-9);
  for (const BoundCheck& check : report.factor2_checks) {
    Absorb(c8, check, &bundle.verdict_payload);
  }
  c8.seconds = timer.Seconds();
  c8.pass = c8.failures == 0;
  char rate[64];
  std::snprintf(rate, sizeof(rate), "factor-3/2 pass rate %.4f",
                report.factor32_pass_rate);
  c8.detail = rate;
}

// Criterion 9: estimator pipeline consistency (closed-form xi within the
// declared tolerance at T = 1e3 trials) and bit-reproducibility.
void RunEstimatorCriterion(BundleResult& bundle) {
  CriterionResult& c9 = bundle.criteria[8];
  Timer timer;
  const SuiteOutcome outcome = RunEstimateSuite(
      EstimateSuiteConfig{}, DeriveSeed(kMasterSeed, "accept.estimate", 0));
  for (const BoundCheck& check : outcome.checks) {
    Absorb(c9, check, &bundle.verdict_payload);
  }
  c9.seconds = timer.Seconds();
  c9.pass = c9.failures == 0;
}

BundleResult RunBundle() {
  BundleResult bundle;
  RunKernelCriteria(bundle);
  RunPacCriterion(bundle);
  RunAttackCriterion(bundle);
  RunRobustCriterion(bundle);
  RunKappa1Criterion(bundle);
  RunC1Criterion(bundle);
  RunEstimatorCriterion(bundle);
  return bundle;
}

const BundleResult& SharedBundle() {
  static const BundleResult bundle = RunBundle();
  return bundle;
}

void Report(int index, const char* label, const CriterionResult& result) {
  std::printf("[ACCEPTANCE] criterion %d %s: %s (%lld checks, %lld failures, "
              "worst slack %.3g, %.1fs%s%s)\n",
              index, label, result.pass ? "PASS" : "FAIL",
              static_cast<long long>(result.instances),
              static_cast<long long>(result.failures), result.worst_slack,
              result.seconds, result.detail.empty() ? "" : ", ",
              result.detail.c_str());
}

TEST(Acceptance, Criterion1LdpMbpLemma) {
  const CriterionResult& result = SharedBundle().criteria[0];
  Report(1, "LDP<->MBP lemma (1000 kernels x 100 priors)", result);
  EXPECT_EQ(result.failures, 0);
  EXPECT_LT(result.seconds, 30.0);
  EXPECT_TRUE(result.pass);
}

TEST(Acceptance, Criterion2TotalProbabilityIdentity) {
  const CriterionResult& result = SharedBundle().criteria[1];
  Report(2, "total-probability identity (ABP <= 1e-12)", result);
  EXPECT_EQ(result.failures, 0);
  EXPECT_TRUE(result.pass);
}

TEST(Acceptance, Criterion3MbpToAbpTheorem) {
  const CriterionResult& result = SharedBundle().criteria[2];
  Report(3, "MBP->ABP bound (eps in {0, 0.1, 0.5})", result);
  EXPECT_EQ(result.failures, 0);
  EXPECT_TRUE(result.pass);
}

TEST(Acceptance, Criterion4PacRobustness) {
  const CriterionResult& result = SharedBundle().criteria[3];
  Report(4, "PAC robustness (500 exact enumerations)", result);
  EXPECT_EQ(result.failures, 0);
  EXPECT_LT(result.seconds, 10.0);
  EXPECT_TRUE(result.pass);
}

TEST(Acceptance, Criterion5PrivacyDistortionLemma) {
  const CriterionResult& result = SharedBundle().criteria[4];
  Report(5, "privacy-distortion lemma (appendix constants)", result);
  EXPECT_EQ(result.failures, 0);
  EXPECT_LT(result.seconds, 60.0);
  EXPECT_TRUE(result.pass);
}

TEST(Acceptance, Criterion6PrivacyRobustnessTheorem) {
  const CriterionResult& result = SharedBundle().criteria[5];
  Report(6, "privacy->robustness theorem (translation + regression)", result);
  EXPECT_EQ(result.failures, 0);
  EXPECT_TRUE(result.pass);
}

TEST(Acceptance, Criterion7Kappa1Concentration) {
  const CriterionResult& result = SharedBundle().criteria[6];
  Report(7, "kappa1 concentration (12 cells x 1e5 trials)", result);
  EXPECT_EQ(result.failures, 0);
  EXPECT_LT(result.seconds, 60.0);
  EXPECT_TRUE(result.pass);
}

TEST(Acceptance, Criterion8C1EstimationError) {
  const CriterionResult& result = SharedBundle().criteria[7];
  Report(8, "C1 estimation error (corner search, factor-2 transfer)", result);
  EXPECT_EQ(result.failures, 0);
  EXPECT_TRUE(result.pass);
}

TEST(Acceptance, Criterion9EstimatorPipeline) {
  const CriterionResult& result = SharedBundle().criteria[8];
  Report(9, "estimator pipeline consistency (T = 1e3)", result);
  EXPECT_EQ(result.failures, 0);
  EXPECT_TRUE(result.pass);
}

TEST(Acceptance, Criterion10Determinism) {
  const BundleResult second = RunBundle();
  CriterionResult result;
  result.instances = 1;
  result.pass = second.verdict_payload == SharedBundle().verdict_payload &&
                !second.verdict_payload.empty();
  result.failures = result.pass ? 0 : 1;
  result.worst_slack = 0.0;
  result.detail = std::to_string(second.verdict_payload.size()) +
                  " payload bytes compared";
  Report(10, "bundle determinism (byte-identical verdicts)", result);
  EXPECT_TRUE(result.pass);
}

}  // namespace
}  // namespace bayespriv
