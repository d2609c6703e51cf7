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

#include "bayespriv/experiment.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gtest/gtest.h"

namespace bayespriv {
namespace {

namespace fs = std::filesystem;

VerifySuiteConfig TinyVerifyConfig() {
  VerifySuiteConfig config;
  config.kernels = 15;
  config.priors_per_kernel = 5;
  config.pac_instances = 30;
  config.kappa1_values = {0.5};
  config.kappa1_draws = {100};
  config.kappa1_eps = {0.2};
  config.kappa1_trials = 10000;
  config.c1_instances = 15;
  return config;
}

class TempDir {
 public:
  explicit TempDir(const std::string& name)
      : path_(fs::temp_directory_path() / name) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteFile(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

TEST(VerifySuiteTest, TinyRunHoldsAndIsDeterministic) {
  const SuiteOutcome a = RunVerifySuite(TinyVerifyConfig(), 7);
  EXPECT_TRUE(a.AllAssertedHold());
  EXPECT_FALSE(a.checks.empty());
  EXPECT_FALSE(a.summary.empty());
  const SuiteOutcome b = RunVerifySuite(TinyVerifyConfig(), 7);
  EXPECT_EQ(a.VerdictsJsonl(), b.VerdictsJsonl());
  EXPECT_EQ(a.SummaryCsv(), b.SummaryCsv());

  bool found_estimation_report = false;
  for (const auto& [name, payload] : a.artifacts) {
    if (name == "eps_estimation_report.json") {
      found_estimation_report = true;
      EXPECT_NE(payload.find("factor32_pass_rate"), std::string::npos);
    }
  }
  EXPECT_TRUE(found_estimation_report);
}

TEST(VerifySuiteTest, SummaryCoversEveryFamily) {
  const SuiteOutcome outcome = RunVerifySuite(TinyVerifyConfig(), 3);
  std::vector<std::string> families;
  for (const auto& row : outcome.summary) families.push_back(row.suite);
  for (const char* expected :
       {"ldp_mbp", "total_probability", "mbp_abp", "pac_robustness",
        "kappa1_concentration", "c1_error", "eps_estimation"}) {
    EXPECT_NE(std::find(families.begin(), families.end(), expected),
              families.end())
        << expected;
  }
  for (const auto& row : outcome.summary) {
    EXPECT_EQ(row.passes, row.instances) << row.suite;
  }
}

TEST(AttackSuiteTest, TinyRunPassRateHolds) {
  AttackSuiteConfig config;
  config.deltas = {0.4, 0.8};
  config.rounds = {100};
  config.seeds = 4;
  config.batch_size = 4;
  const SuiteOutcome outcome = RunAttackSuite(config, 11);
  EXPECT_TRUE(outcome.AllAssertedHold());
  bool has_table = false;
  for (const auto& [name, payload] : outcome.artifacts) {
    if (name == "attack_table.csv") {
      has_table = true;
      EXPECT_EQ(payload.rfind("delta,rounds,seed,skipped", 0), 0u);
    }
  }
  EXPECT_TRUE(has_table);
  const SuiteOutcome again = RunAttackSuite(config, 11);
  EXPECT_EQ(outcome.VerdictsJsonl(), again.VerdictsJsonl());
}

TEST(RobustSuiteTest, TinyRunHolds) {
  RobustSuiteConfig config;
  config.radii = {0.1, 0.25};
  config.deltas = {0.5};
  config.rounds = 200;
  config.seeds = 1;
  config.batch_size = 3;
  config.x_samples = 100;
  config.probes = 8;
  config.regression_deltas = {0.5};
  const SuiteOutcome outcome = RunRobustSuite(config, 17);
  EXPECT_TRUE(outcome.AllAssertedHold());
  bool has_table = false;
  for (const auto& [name, payload] : outcome.artifacts) {
    if (name == "robust_table.csv") {
      has_table = true;
      EXPECT_EQ(payload.rfind("r,measured,predicted_alpha,slack,holds", 0),
                0u);
    }
  }
  EXPECT_TRUE(has_table);
}

TEST(EstimateSuiteTest, TinyRunHolds) {
  EstimateSuiteConfig config;
  config.trials = 60;
  const SuiteOutcome outcome = RunEstimateSuite(config, 23);
  EXPECT_TRUE(outcome.AllAssertedHold());
  bool has_density = false;
  bool has_mbp = false;
  for (const auto& [name, payload] : outcome.artifacts) {
    if (name == "density.csv") has_density = true;
    if (name == "mbp_estimate.json") {
      has_mbp = true;
      EXPECT_NE(payload.find("xi_hat"), std::string::npos);
    }
  }
  EXPECT_TRUE(has_density);
  EXPECT_TRUE(has_mbp);
}

TEST(RunExperimentTest, VerifySuiteEndToEndAndByteStable) {
  TempDir dir("bayespriv_run_verify");
  const fs::path config_path = dir.path() / "config.json";
  WriteFile(config_path, R"({
    "suite": "verify",
    "seed": 42,
    "verify": {"kernels": 10, "priors_per_kernel": 4, "pac_instances": 10,
               "kappa1_values": [0.5], "kappa1_draws": [100],
               "kappa1_eps": [0.2], "kappa1_trials": 10000,
               "c1_instances": 10}
  })");
  std::ostringstream diag;
  RunOptions options;
  options.out_dir = (dir.path() / "out1").string();
  EXPECT_EQ(RunExperiment(config_path, options, diag), 0) << diag.str();
  EXPECT_TRUE(fs::exists(dir.path() / "out1" / "report.json"));
  EXPECT_TRUE(fs::exists(dir.path() / "out1" / "verdicts.jsonl"));
  EXPECT_TRUE(fs::exists(dir.path() / "out1" / "summary.csv"));

  RunOptions second;
  second.out_dir = (dir.path() / "out2").string();
  EXPECT_EQ(RunExperiment(config_path, second, diag), 0);
  EXPECT_EQ(ReadFile(dir.path() / "out1" / "verdicts.jsonl"),
            ReadFile(dir.path() / "out2" / "verdicts.jsonl"));
}

TEST(RunExperimentTest, MissingSeedNamesField) {
  TempDir dir("bayespriv_run_noseed");
  const fs::path config_path = dir.path() / "config.json";
  WriteFile(config_path, R"({"suite": "verify"})");
  std::ostringstream diag;
  EXPECT_EQ(RunExperiment(config_path, RunOptions{}, diag), 2);
  EXPECT_NE(diag.str().find("\"seed\""), std::string::npos);
}

TEST(RunExperimentTest, UnknownSuiteNamesField) {
  TempDir dir("bayespriv_run_badsuite");
  const fs::path config_path = dir.path() / "config.json";
  WriteFile(config_path, R"({"suite": "frobnicate", "seed": 1})");
  std::ostringstream diag;
  EXPECT_EQ(RunExperiment(config_path, RunOptions{}, diag), 2);
  EXPECT_NE(diag.str().find("\"suite\""), std::string::npos);
}

TEST(RunExperimentTest, BadToleranceNamesField) {
  TempDir dir("bayespriv_run_badtol");
  const fs::path config_path = dir.path() / "config.json";
  WriteFile(config_path,
            R"({"suite": "estimate", "seed": 1, "tolerances": {"mc_xi": -2}})");
  std::ostringstream diag;
  EXPECT_EQ(RunExperiment(config_path, RunOptions{}, diag), 2);
  EXPECT_NE(diag.str().find("tolerances.mc_xi"), std::string::npos);
}

TEST(RunExperimentTest, MissingConfigFileIsExitTwo) {
  std::ostringstream diag;
  EXPECT_EQ(RunExperiment("/nonexistent/config.json", RunOptions{}, diag), 2);
}

TEST(RunExperimentTest, FailingAssertedCheckIsExitOne) {
  TempDir dir("bayespriv_run_fail");
  const fs::path config_path = dir.path() / "config.json";
  // min_pass_rate above 1 cannot be met; the pass-rate check must fail.
  WriteFile(config_path, R"({
    "suite": "attack", "seed": 5,
    "attack": {"deltas": [0.8], "rounds": [60], "seeds": 2,
               "batch_size": 3, "min_pass_rate": 1.5}
  })");
  std::ostringstream diag;
  RunOptions options;
  options.out_dir = (dir.path() / "out").string();
  EXPECT_EQ(RunExperiment(config_path, options, diag), 1);
}

TEST(RunExperimentTest, MechSuiteWritesAndValidatesKernel) {
  TempDir dir("bayespriv_run_mech");
  const fs::path config_path = dir.path() / "config.json";
  WriteFile(config_path, R"({
    "suite": "mech", "seed": 3,
    "mech": {"kind": "randomized_response", "k": 4, "flip_prob": 0.25}
  })");
  std::ostringstream diag;
  RunOptions options;
  options.out_dir = (dir.path() / "out").string();
  EXPECT_EQ(RunExperiment(config_path, options, diag), 0) << diag.str();
  EXPECT_TRUE(fs::exists(dir.path() / "out" / "kernel.json"));
  const std::string report = ReadFile(dir.path() / "out" / "report.json");
  EXPECT_NE(report.find("kernel_digest"), std::string::npos);
}

TEST(RunExperimentTest, MetricsSuiteInlineKernel) {
  TempDir dir("bayespriv_run_metrics");
  const fs::path config_path = dir.path() / "config.json";
  WriteFile(config_path, R"({
    "suite": "metrics", "seed": 1,
    "metrics": {
      "kernel": {"inputs": 2, "outputs": 2, "rows": [[0.75,0.25],[0.25,0.75]]},
      "true_prior": [0.5, 0.5], "attacker_prior": [0.6, 0.4]
    }
  })");
  std::ostringstream diag;
  RunOptions options;
  options.out_dir = (dir.path() / "out").string();
  EXPECT_EQ(RunExperiment(config_path, options, diag), 0) << diag.str();
  const std::string json = ReadFile(dir.path() / "out" / "metrics_report.json");
  EXPECT_NE(json.find("\"eps_abp\""), std::string::npos);
  const std::string csv = ReadFile(dir.path() / "out" / "metrics_report.csv");
  EXPECT_EQ(csv.rfind("kernel_digest,", 0), 0u);

  WriteFile(config_path, R"({"suite": "metrics", "seed": 1, "metrics": {}})");
  std::ostringstream diag2;
  EXPECT_EQ(RunExperiment(config_path, options, diag2), 2);
  EXPECT_NE(diag2.str().find("metrics.kernel"), std::string::npos);
}

TEST(RunExperimentTest, OutputRootEnvOverride) {
  TempDir root("bayespriv_out_root");
  TempDir dir("bayespriv_run_envroot");
  const fs::path config_path = dir.path() / "config.json";
  WriteFile(config_path, R"({
    "suite": "mech", "seed": 3, "out_dir": "nested/run",
    "mech": {"kind": "identity", "n": 2}
  })");
  ::setenv("BAYESPRIV_OUT_ROOT", root.path().c_str(), 1);
  std::ostringstream diag;
  const int exit_code = RunExperiment(config_path, RunOptions{}, diag);
  ::unsetenv("BAYESPRIV_OUT_ROOT");
  EXPECT_EQ(exit_code, 0) << diag.str();
  EXPECT_TRUE(fs::exists(root.path() / "nested" / "run" / "kernel.json"));
}

TEST(EmitPlotDataTest, AttackReportProducesSeries) {
  TempDir dir("bayespriv_emit");
  const fs::path config_path = dir.path() / "config.json";
  WriteFile(config_path, R"({
    "suite": "attack", "seed": 5,
    "attack": {"deltas": [0.5, 0.8], "rounds": [80], "seeds": 2,
               "batch_size": 3}
  })");
  std::ostringstream diag;
  RunOptions options;
  options.out_dir = (dir.path() / "out").string();
  ASSERT_EQ(RunExperiment(config_path, options, diag), 0) << diag.str();

  std::ostringstream csv;
  EXPECT_EQ(EmitPlotData(dir.path() / "out" / "report.json", csv, diag), 0);
  const std::string plot = csv.str();
  EXPECT_EQ(plot.rfind("series,x,y\n", 0), 0u);
  EXPECT_NE(plot.find("eps_p_vs_delta"), std::string::npos);
  EXPECT_NE(plot.find("slack_hist."), std::string::npos);
}

TEST(EmitPlotDataTest, EmptyReportIsHeaderOnly) {
  TempDir dir("bayespriv_emit_empty");
  const fs::path report = dir.path() / "report.json";
  WriteFile(report, R"({"artifacts": []})");
  std::ostringstream csv;
  std::ostringstream diag;
  EXPECT_EQ(EmitPlotData(report, csv, diag), 0);
  EXPECT_EQ(csv.str(), "series,x,y\n");
  EXPECT_EQ(EmitPlotData(dir.path() / "missing.json", csv, diag), 2);
}

}  // namespace
}  // namespace bayespriv
