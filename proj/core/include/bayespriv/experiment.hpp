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

#ifndef BAYESPRIV_EXPERIMENT_HPP_
#define BAYESPRIV_EXPERIMENT_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bayespriv/bound_check.hpp"
#include "bayespriv/distribution.hpp"
#include "bayespriv/theorems.hpp"

namespace bayespriv {

class Rng;

// Deterministic instance generators shared by the suite runners and the
// acceptance tests.
//
// Attacker prior within a multiplicative factor e^{+-eps} of the base prior:
// weights base * exp(u) with u uniform in [-eps/2, eps/2]; normalization can
// at most double the exponent band, so the measured mismatch stays <= eps.
DiscreteDistribution AttackerPriorWithin(const DiscreteDistribution& base,
                                         double eps, Rng& rng);

// A random PAC mechanism instance with xi_sup <= 0.8 (every 25th instance is
// a constant mechanism) and an accuracy threshold that splits the outputs.
PacMechanism MakePacInstance(std::uint64_t seed, int index);

// One row of the suite summary table (suite, instances, pass, worst_slack).
struct SuiteSummaryRow {
  std::string suite;
  std::int64_t instances = 0;
  std::int64_t passes = 0;
  std::int64_t skipped = 0;
  double worst_slack = 0.0;
};

// Everything a suite run produces: one BoundCheck per verdict, summary rows,
// and named auxiliary payloads (tables, traces, JSON blobs). Verdict payloads
// are byte-stable for a fixed master seed.
struct SuiteOutcome {
  std::vector<BoundCheck> checks;
  std::vector<SuiteSummaryRow> summary;
  std::vector<std::pair<std::string, std::string>> artifacts;

  bool AllAssertedHold() const;
  std::string VerdictsJsonl() const;
  std::string SummaryCsv() const;
  void Append(SuiteOutcome other);
};

// Theorem suites over random finite mechanisms. Defaults are the full
// acceptance scales.
struct VerifySuiteConfig {
  int kernels = 1000;
  int priors_per_kernel = 100;
  int min_labels = 2;
  int max_labels = 8;
  double min_prob = 1e-3;
  std::vector<double> abp_eps_levels = {0.0, 0.1, 0.5};
  int pac_instances = 500;
  std::vector<double> kappa1_values = {0.1, 0.5, 0.9};
  std::vector<int> kappa1_draws = {100, 1000};
  std::vector<double> kappa1_eps = {0.1, 0.2};
  std::int64_t kappa1_trials = 100000;
  int c1_instances = 1000;
  std::vector<double> c1_eps = {0.05, 0.1, 0.3};
  int c1_max_support = 12;
  double bound_tol = 1e-9;
  double identity_tol = 1e-12;
  double pac_tol = 1e-12;
};

SuiteOutcome RunVerifySuite(const VerifySuiteConfig& config,
                            std::uint64_t master_seed);

// Privacy-distortion lemma sweep on the translation family.
struct AttackSuiteConfig {
  int dim = 1;
  std::vector<double> deltas = {0.1, 0.2, 0.4, 0.8};
  std::vector<int> rounds = {100, 1000};
  int seeds = 20;
  int batch_size = 8;
  double min_pass_rate = 0.95;
  double tol = 1e-9;
};

SuiteOutcome RunAttackSuite(const AttackSuiteConfig& config,
                            std::uint64_t master_seed);

// Privacy -> robustness sweep: exact translation grid plus a
// linear-regression variant with estimated constants and 5% slack.
struct RobustSuiteConfig {
  std::vector<double> radii = {0.1, 0.25, 0.5};
  std::vector<double> deltas = {0.4, 0.8};
  int rounds = 1000;
  int seeds = 3;
  int batch_size = 8;
  std::int64_t x_samples = 1000;
  int probes = 16;
  bool include_regression = true;
  std::vector<double> regression_deltas = {0.5, 0.8};
  double regression_slack = 0.05;
  double tol = 1e-6;
};

SuiteOutcome RunRobustSuite(const RobustSuiteConfig& config,
                            std::uint64_t master_seed);

// Estimation pipeline consistency on the translation family: closed-form
// match of xi_hat and bit-reproducibility under the master seed.
struct EstimateSuiteConfig {
  int dataset_size = 8;
  int models = 3;
  int trials = 1000;
  int attack_rounds = 60;
  double threshold = 0.5;
  double mc_tol = 0.05;
};

SuiteOutcome RunEstimateSuite(const EstimateSuiteConfig& config,
                              std::uint64_t master_seed);

// Command line overrides for `run`; each one replaces the matching config
// field.
struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> suite;
  std::optional<std::string> out_dir;
  std::optional<std::int64_t> trials;
};

// Executes the configured suite and writes report.json, verdicts.jsonl and
// the CSV tables into the output directory. Returns the process exit code:
// 0 when every asserted check holds, 1 on a check failure, 2 on config or IO
// errors (with a diagnostic naming the offending field).
int RunExperiment(const std::filesystem::path& config_path,
                  const RunOptions& options, std::ostream& diagnostics);

// Reshapes a run report's tables into one long-format CSV (series,x,y).
int EmitPlotData(const std::filesystem::path& report_path, std::ostream& out,
                 std::ostream& diagnostics);

}  // namespace bayespriv

#endif  // BAYESPRIV_EXPERIMENT_HPP_
