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
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "bayespriv/attack.hpp"
#include "bayespriv/digest.hpp"
#include "bayespriv/error.hpp"
#include "bayespriv/estimators.hpp"
#include "bayespriv/metrics.hpp"
#include "bayespriv/robustness.hpp"
#include "bayespriv/rng.hpp"
#include "bayespriv/theorems.hpp"
#include "bayespriv/version.hpp"
#include "internal/json_util.hpp"

namespace bayespriv {
namespace {

using internal::CsvNumber;
using internal::JsonNumber;
using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string EnvironmentFingerprint() {
  std::string env = "compiler=" __VERSION__;
#if defined(__linux__)
  env += "; platform=linux";
#elif defined(__APPLE__)
  env += "; platform=darwin";
#else
  env += "; platform=other";
#endif
  return env;
}

}  // namespace

DiscreteDistribution AttackerPriorWithin(const DiscreteDistribution& base,
                                         double eps, Rng& rng) {
  if (eps == 0.0) return base;
  std::vector<double> mass(static_cast<size_t>(base.size()));
  double sum = 0.0;
  for (int d = 0; d < base.size(); ++d) {
    mass[static_cast<size_t>(d)] =
        base[d] * std::exp(rng.Uniform(-eps / 2.0, eps / 2.0));
    sum += mass[static_cast<size_t>(d)];
  }
  for (double& v : mass) v /= sum;
  return DiscreteDistribution(std::move(mass));
}

PacMechanism MakePacInstance(std::uint64_t seed, int index) {
  Rng rng(seed);
  PacMechanism mechanism{MakeConstantMechanism(2, 0), {}, {}, 0.0, 0.0};
  if (index % 25 == 24) {
    const int n = 2 + rng.UniformInt(5);
    mechanism.kernel = MakeConstantMechanism(n, rng.UniformInt(n));
  } else {
    const int n_in = 2 + rng.UniformInt(5);   // 2..6
    const int n_out = 2 + rng.UniformInt(7);  // 2..8
    std::vector<double> p(static_cast<size_t>(n_in) * n_out);
    for (int d = 0; d < n_in; ++d) {
      double sum = 0.0;
      for (int w = 0; w < n_out; ++w) {
        // exp(U(0, 0.4)) entries keep xi_sup <= 0.8, inside the proof range.
        p[static_cast<size_t>(d) * n_out + w] =
            std::exp(0.4 * rng.Uniform());
        sum += p[static_cast<size_t>(d) * n_out + w];
      }
      for (int w = 0; w < n_out; ++w) {
        p[static_cast<size_t>(d) * n_out + w] /= sum;
      }
    }
    mechanism.kernel = StochasticKernel(n_in, n_out, std::move(p));
  }
  const int n_out = mechanism.kernel.num_outputs();
  constexpr int kEstimateDim = 2;
  mechanism.target.assign(kEstimateDim, 0.0);
  for (int w = 0; w < n_out; ++w) {
    std::vector<double> e(kEstimateDim);
    for (double& v : e) v = rng.Uniform();
    for (int j = 0; j < kEstimateDim; ++j) {
      mechanism.target[static_cast<size_t>(j)] += e[static_cast<size_t>(j)];
    }
    mechanism.estimates.push_back(std::move(e));
  }
  for (double& v : mechanism.target) v /= static_cast<double>(n_out);
  std::vector<double> distances(static_cast<size_t>(n_out));
  for (int w = 0; w < n_out; ++w) {
    double sum = 0.0;
    for (int j = 0; j < kEstimateDim; ++j) {
      const double diff = mechanism.estimates[static_cast<size_t>(w)]
                                             [static_cast<size_t>(j)] -
                          mechanism.target[static_cast<size_t>(j)];
      sum += diff * diff;
    }
    distances[static_cast<size_t>(w)] = std::sqrt(sum);
  }
  std::sort(distances.begin(), distances.end());
  // Lower median splits the outputs so the failure set is usually nonempty.
  mechanism.alpha = distances[static_cast<size_t>((n_out - 1) / 2)];
  return mechanism;
}

namespace {

SuiteSummaryRow Summarize(const std::string& family,
                          const std::vector<BoundCheck>& checks,
                          std::int64_t skipped = 0) {
  SuiteSummaryRow row;
  row.suite = family;
  row.skipped = skipped;
  row.worst_slack = kInf;
  for (const auto& check : checks) {
    if (check.name.rfind(family, 0) != 0) continue;
    ++row.instances;
    if (check.holds) ++row.passes;
    row.worst_slack = std::min(row.worst_slack, check.slack());
  }
  if (row.instances == 0) row.worst_slack = 0.0;
  return row;
}

}  // namespace

bool SuiteOutcome::AllAssertedHold() const {
  for (const auto& check : checks) {
    if (check.asserted && !check.holds) return false;
  }
  return true;
}

std::string SuiteOutcome::VerdictsJsonl() const {
  std::string out;
  out.reserve(checks.size() * 192);
  for (const auto& check : checks) {
    out += check.ToJsonLine();
    out += '\n';
  }
  return out;
}

std::string SuiteOutcome::SummaryCsv() const {
  std::ostringstream out;
  out << "suite,instances,pass,skipped,worst_slack\n";
  for (const auto& row : summary) {
    out << row.suite << ',' << row.instances << ',' << row.passes << ','
        << row.skipped << ',' << CsvNumber(row.worst_slack) << '\n';
  }
  return out.str();
}

void SuiteOutcome::Append(SuiteOutcome other) {
  checks.insert(checks.end(), std::make_move_iterator(other.checks.begin()),
                std::make_move_iterator(other.checks.end()));
  summary.insert(summary.end(),
                 std::make_move_iterator(other.summary.begin()),
                 std::make_move_iterator(other.summary.end()));
  artifacts.insert(artifacts.end(),
                   std::make_move_iterator(other.artifacts.begin()),
                   std::make_move_iterator(other.artifacts.end()));
}

SuiteOutcome RunVerifySuite(const VerifySuiteConfig& config,
                            std::uint64_t master_seed) {
  if (config.kernels < 1 || config.priors_per_kernel < 1 ||
      config.min_labels < 2 || config.max_labels < config.min_labels) {
    throw ParameterError("invalid verify suite configuration");
  }
  SuiteOutcome outcome;

  // LDP<->MBP lemma, total-probability identity, and the MBP->ABP theorem
  // share one stream of random kernels.
  const int label_span = config.max_labels - config.min_labels + 1;
  for (int k = 0; k < config.kernels; ++k) {
    const std::uint64_t kernel_seed =
        DeriveSeed(master_seed, "verify.kernel", static_cast<std::uint64_t>(k));
    Rng shape_rng(kernel_seed);
    const int n_in = config.min_labels + shape_rng.UniformInt(label_span);
    const int n_out = config.min_labels + shape_rng.UniformInt(label_span);
    const StochasticKernel kernel =
        RandomKernel(DeriveSeed(kernel_seed, "rows", 0), n_in, n_out,
                     config.min_prob);

    std::vector<DiscreteDistribution> priors;
    priors.reserve(static_cast<size_t>(config.priors_per_kernel));
    for (int j = 0; j < config.priors_per_kernel; ++j) {
      priors.push_back(DiscreteDistribution::Random(
          DeriveSeed(kernel_seed, "prior", static_cast<std::uint64_t>(j)),
          n_in, 1e-3));
    }
    auto lemma_checks = VerifyLdpMbp(kernel, priors, config.bound_tol);
    outcome.checks.insert(outcome.checks.end(),
                          std::make_move_iterator(lemma_checks.begin()),
                          std::make_move_iterator(lemma_checks.end()));

    const DiscreteDistribution true_prior = DiscreteDistribution::Random(
        DeriveSeed(kernel_seed, "true_prior", 0), n_in, 1e-3);
    {
      Digest digest;
      digest.Add(kernel.DigestHex()).Add(true_prior.DigestHex());
      outcome.checks.push_back(BoundCheck::Make(
          "total_probability.identity",
          AbpEpsilon(kernel, true_prior, true_prior), 0.0,
          config.identity_tol, digest.Hex()));
    }
    for (size_t level = 0; level < config.abp_eps_levels.size(); ++level) {
      Rng mismatch_rng(DeriveSeed(kernel_seed, "attacker_prior", level));
      const DiscreteDistribution attacker = AttackerPriorWithin(
          true_prior, config.abp_eps_levels[level], mismatch_rng);
      outcome.checks.push_back(
          VerifyMbpAbp(kernel, true_prior, attacker, config.bound_tol));
    }
  }

  // PAC robustness, exact enumeration.
  for (int i = 0; i < config.pac_instances; ++i) {
    const PacMechanism mechanism = MakePacInstance(
        DeriveSeed(master_seed, "verify.pac", static_cast<std::uint64_t>(i)),
        i);
    PacVerdict verdict = VerifyPacRobustness(mechanism, config.pac_tol);
    outcome.checks.push_back(std::move(verdict.main));
    outcome.checks.push_back(std::move(verdict.chain_e2xi));
  }

  // kappa1 concentration grid.
  std::uint64_t cell = 0;
  for (double kappa1 : config.kappa1_values) {
    for (int t_draws : config.kappa1_draws) {
      for (double eps : config.kappa1_eps) {
        const ConcentrationCheck check = VerifyKappa1Concentration(
            kappa1, t_draws, eps, config.kappa1_trials,
            DeriveSeed(master_seed, "verify.kappa1", cell++));
        outcome.checks.push_back(check.check);
      }
    }
  }

  // C1 estimation error plus the assembled-leakage error transfer.
  std::vector<PrivacyEstimationInstance> instances;
  instances.reserve(static_cast<size_t>(config.c1_instances) *
                    config.c1_eps.size());
  for (int i = 0; i < config.c1_instances; ++i) {
    const std::uint64_t pair_seed =
        DeriveSeed(master_seed, "verify.c1", static_cast<std::uint64_t>(i));
    const int support = 2 + i % (config.c1_max_support - 1);
    const DiscreteDistribution kappa1 = DiscreteDistribution::Random(
        DeriveSeed(pair_seed, "kappa1", 0), support, 1e-4);
    const DiscreteDistribution kappa2 = DiscreteDistribution::Random(
        DeriveSeed(pair_seed, "kappa2", 0), support, 1e-4);
    for (double eps : config.c1_eps) {
      const C1ErrorCheck check =
          VerifyC1Error(kappa1, kappa2, eps, config.bound_tol);
      outcome.checks.push_back(check.check);
      instances.push_back(PrivacyEstimationInstance{kappa1, kappa2, eps});
    }
  }
  PrivacyEstimationReport estimation =
      VerifyPrivacyEstimationError(instances, config.bound_tol);
  outcome.checks.insert(
      outcome.checks.end(),
      std::make_move_iterator(estimation.factor2_checks.begin()),
      std::make_move_iterator(estimation.factor2_checks.end()));
  {
    json report;
    report["instances"] = estimation.instances;
    report["factor2_all_hold"] = estimation.factor2_all_hold;
    report["factor32_pass_rate"] = JsonNumber(estimation.factor32_pass_rate);
    report["worst_deviation"] = JsonNumber(estimation.worst_deviation);
    outcome.artifacts.emplace_back("eps_estimation_report.json",
                                   report.dump(2) + "\n");
  }

  for (const char* family :
       {"ldp_mbp", "total_probability", "mbp_abp", "pac_robustness",
        "kappa1_concentration", "c1_error", "eps_estimation"}) {
    outcome.summary.push_back(Summarize(family, outcome.checks));
  }
  return outcome;
}

SuiteOutcome RunAttackSuite(const AttackSuiteConfig& config,
                            std::uint64_t master_seed) {
  const ReconstructionTask task = ReconstructionTask::Translation(
      std::vector<double>(static_cast<size_t>(config.dim), 0.5),
      Box::Unit(config.dim));
  PrivacyDistortionConfig sweep;
  sweep.deltas = config.deltas;
  sweep.rounds = config.rounds;
  sweep.seeds = config.seeds;
  sweep.batch_size = config.batch_size;
  sweep.tol = config.tol;
  const std::vector<DistortionCheck> cells =
      VerifyPrivacyDistortion(task, sweep, master_seed);

  SuiteOutcome outcome;
  std::ostringstream table;
  table.precision(17);
  table << "delta,rounds,seed,skipped,skip_reason,eps_p,c0_hat,c2_hat,"
           "precondition_rhs,rhs_appendix,rhs_maintext,holds\n";
  std::int64_t skipped = 0;
  std::int64_t asserted = 0;
  std::int64_t passed = 0;
  for (const auto& cell : cells) {
    table << cell.delta << ',' << cell.rounds << ',' << cell.seed << ','
          << (cell.skipped ? 1 : 0) << ',' << '"' << cell.skip_reason << '"'
          << ',' << cell.eps_p << ',' << cell.c0_hat << ',' << cell.c2_hat
          << ',' << cell.precondition_rhs << ',';
    if (cell.skipped) {
      ++skipped;
      table << ",,\n";
      continue;
    }
    table << CsvNumber(cell.appendix.rhs) << ','
          << CsvNumber(cell.maintext.rhs) << ','
          << (cell.appendix.holds ? 1 : 0) << '\n';
    ++asserted;
    if (cell.appendix.holds) {
      ++passed;
    } else {
      // Violations keep their full trace alongside the verdict.
      std::ostringstream name;
      name << "violation_delta" << cell.delta << "_I" << cell.rounds
           << "_seed" << cell.seed << ".csv";
      std::ostringstream trace;
      WriteTraceCsv(trace, cell.trace, cell.original);
      outcome.artifacts.emplace_back(name.str(), trace.str());
    }
    outcome.checks.push_back(cell.appendix);
    outcome.checks.push_back(cell.maintext);
  }
  outcome.artifacts.emplace_back("attack_table.csv", table.str());

  const double rate =
      asserted == 0 ? 0.0
                    : static_cast<double>(passed) /
                          static_cast<double>(asserted);
  Digest digest;
  digest.Add(master_seed).Add(static_cast<std::uint64_t>(asserted));
  outcome.checks.push_back(BoundCheck::Make(
      "privacy_distortion.pass_rate", config.min_pass_rate, rate, 0.0,
      digest.Hex(), true,
      asserted == 0 ? "no configuration met the precondition" : ""));

  outcome.summary.push_back(
      Summarize("privacy_distortion.appendix", outcome.checks, skipped));
  outcome.summary.push_back(
      Summarize("privacy_distortion.maintext", outcome.checks));
  outcome.summary.push_back(
      Summarize("privacy_distortion.pass_rate", outcome.checks));
  return outcome;
}

SuiteOutcome RunRobustSuite(const RobustSuiteConfig& config,
                            std::uint64_t master_seed) {
  SuiteOutcome outcome;
  std::ostringstream table;
  table.precision(17);
  table << "r,measured,predicted_alpha,slack,holds\n";
  std::ostringstream cells_table;
  cells_table.precision(17);
  cells_table << "family,delta,seed,r,eps_p,measured,predicted_alpha,slack,"
                 "holds\n";

  auto run_family = [&](const ReconstructionTask& task, const char* family,
                        const std::vector<double>& deltas, double slack_frac,
                        std::uint64_t seed) {
    PrivacyRobustnessConfig sweep;
    sweep.radii = config.radii;
    sweep.deltas = deltas;
    sweep.rounds = config.rounds;
    sweep.seeds = config.seeds;
    sweep.batch_size = config.batch_size;
    sweep.budget.x_samples = config.x_samples;
    sweep.budget.probes = config.probes;
    sweep.estimated_constants_slack = slack_frac;
    sweep.tol = config.tol;
    const std::vector<RobustnessCheck> cells =
        VerifyPrivacyRobustness(task, sweep, seed);
    for (const auto& cell : cells) {
      table << cell.radius << ',' << cell.measured << ','
            << cell.prediction.alpha << ',' << CsvNumber(cell.check.slack())
            << ',' << (cell.check.holds ? 1 : 0) << '\n';
      cells_table << family << ',' << cell.delta << ',' << cell.seed << ','
                  << cell.radius << ',' << cell.eps_p << ',' << cell.measured
                  << ',' << cell.prediction.alpha << ','
                  << CsvNumber(cell.check.slack()) << ','
                  << (cell.check.holds ? 1 : 0) << '\n';
      outcome.checks.push_back(cell.check);
      outcome.checks.push_back(cell.unhalved_lipschitz);
      outcome.checks.push_back(cell.unhalved_privacy);
    }
  };

  const ReconstructionTask translation =
      ReconstructionTask::Translation({0.5}, Box::Unit(1));
  run_family(translation, "translation", config.deltas, 0.0,
             DeriveSeed(master_seed, "robust.translation", 0));
  if (config.include_regression) {
    std::vector<double> labels(static_cast<size_t>(config.batch_size));
    for (int m = 0; m < config.batch_size; ++m) {
      labels[static_cast<size_t>(m)] = -0.4 - 0.05 * m;
    }
    const ReconstructionTask regression = ReconstructionTask::LinearRegression(
        {1.2}, Box::Unit(1), std::move(labels));
    run_family(regression, "linear_regression", config.regression_deltas,
               config.regression_slack,
               DeriveSeed(master_seed, "robust.regression", 0));
  }
  outcome.artifacts.emplace_back("robust_table.csv", table.str());
  outcome.artifacts.emplace_back("robust_cells.csv", cells_table.str());
  outcome.summary.push_back(Summarize("privacy_robustness", outcome.checks));
  return outcome;
}

SuiteOutcome RunEstimateSuite(const EstimateSuiteConfig& config,
                              std::uint64_t master_seed) {
  if (config.dataset_size < 2) {
    throw ParameterError("estimate suite needs at least two dataset points");
  }
  const ReconstructionTask task =
      ReconstructionTask::Translation({0.5}, Box::Unit(1));
  std::vector<std::vector<double>> dataset;
  dataset.reserve(static_cast<size_t>(config.dataset_size));
  for (int i = 0; i < config.dataset_size; ++i) {
    dataset.push_back({(i + 0.5) / static_cast<double>(config.dataset_size)});
  }
  const DiscreteDistribution prior =
      DiscreteDistribution::Uniform(config.dataset_size);

  PipelineConfig pipeline;
  pipeline.num_models = config.models;
  pipeline.sgd.steps = 80;
  pipeline.sgd.eta = 0.2;
  pipeline.sgd.batch_size = config.dataset_size;
  pipeline.member_steps.assign(static_cast<size_t>(config.models), 80);
  pipeline.member_steps.back() = 240;  // the largest budget marks w*
  pipeline.attack.rounds = config.attack_rounds;
  pipeline.trials = config.trials;
  pipeline.threshold = config.threshold;
  pipeline.tv = 0.0;

  const PipelineResult first =
      RunEstimationPipeline(task, dataset, prior, pipeline, master_seed);
  const PipelineResult second =
      RunEstimationPipeline(task, dataset, prior, pipeline, master_seed);

  // Closed form for the lossless regime: every trial recovers every sample,
  // the recovery profile is uniform, and the induced release is
  // uninformative, so xi vanishes.
  const double xi_closed = MbpXi(
      MakeConstantMechanism(config.dataset_size, 0),
      DiscreteDistribution::Uniform(config.dataset_size));

  SuiteOutcome outcome;
  Digest digest;
  digest.Add(master_seed).Add(first.mbp.xi_hat).Add(xi_closed);
  outcome.checks.push_back(BoundCheck::Make(
      "estimator.xi_matches_closed_form",
      std::abs(first.mbp.xi_hat - xi_closed), config.mc_tol, 0.0,
      digest.Hex()));
  const bool reproducible = first.ToJsonString() == second.ToJsonString();
  outcome.checks.push_back(BoundCheck::Make("estimator.reproducible",
                                            reproducible ? 0.0 : 1.0, 0.0,
                                            0.0, digest.Hex()));
  outcome.artifacts.emplace_back("pipeline.json",
                                 first.ToJsonString() + "\n");
  outcome.artifacts.emplace_back("density.csv", first.density.ToCsv());
  outcome.artifacts.emplace_back("mbp_estimate.json",
                                 first.mbp.ToJsonString() + "\n");
  outcome.artifacts.emplace_back("eps_tilde.json",
                                 first.eps_tilde.ToJsonString() + "\n");
  outcome.summary.push_back(Summarize("estimator", outcome.checks));
  return outcome;
}

namespace {

// ---- configuration plumbing for the CLI ----------------------------------

struct ConfigError {
  std::string message;
};

json ParseConfigFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError{"cannot open config file " + path.string()};
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw ConfigError{"config " + path.string() + ": " + e.what()};
  }
}

template <typename T>
T FieldOr(const json& obj, const char* field, T fallback) {
  if (!obj.contains(field)) return fallback;
  try {
    return obj.at(field).get<T>();
  } catch (const json::exception&) {
    throw ConfigError{std::string("config field \"") + field +
                      "\": wrong type"};
  }
}

std::vector<double> VectorFieldOr(const json& obj, const char* field,
                                  std::vector<double> fallback) {
  if (!obj.contains(field)) return fallback;
  try {
    return obj.at(field).get<std::vector<double>>();
  } catch (const json::exception&) {
    throw ConfigError{std::string("config field \"") + field +
                      "\": expected an array of numbers"};
  }
}

std::vector<int> IntVectorFieldOr(const json& obj, const char* field,
                                  std::vector<int> fallback) {
  if (!obj.contains(field)) return fallback;
  try {
    return obj.at(field).get<std::vector<int>>();
  } catch (const json::exception&) {
    throw ConfigError{std::string("config field \"") + field +
                      "\": expected an array of integers"};
  }
}

std::filesystem::path ResolveOutDir(const std::string& out_dir) {
  std::filesystem::path path(out_dir);
  if (const char* root = std::getenv("BAYESPRIV_OUT_ROOT");
      root != nullptr && *root != '\0' && path.is_relative()) {
    path = std::filesystem::path(root) / path;
  }
  return path;
}

void WriteFileOrThrow(const std::filesystem::path& path,
                      const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError{"cannot write " + path.string()};
  out << content;
}

int WriteSuiteOutputs(const std::filesystem::path& out_dir,
                      const std::string& suite, std::uint64_t seed,
                      const json& effective_config,
                      const SuiteOutcome& outcome, double wall_ms,
                      std::ostream& diagnostics) {
  WriteFileOrThrow(out_dir / "verdicts.jsonl", outcome.VerdictsJsonl());
  WriteFileOrThrow(out_dir / "summary.csv", outcome.SummaryCsv());
  json artifact_names = json::array();
  artifact_names.push_back("verdicts.jsonl");
  artifact_names.push_back("summary.csv");
  for (const auto& [name, payload] : outcome.artifacts) {
    WriteFileOrThrow(out_dir / name, payload);
    artifact_names.push_back(name);
  }
  const bool ok = outcome.AllAssertedHold();
  json report;
  Digest digest;
  digest.Add(effective_config.dump());
  report["config_digest"] = digest.Hex();
  report["version"] = kVersion;
  report["suite"] = suite;
  report["seed"] = seed;
  report["environment"] = EnvironmentFingerprint();
  report["wall_time_ms"] = wall_ms;
  report["artifacts"] = artifact_names;
  report["all_asserted_hold"] = ok;
  json summary = json::array();
  for (const auto& row : outcome.summary) {
    json entry;
    entry["suite"] = row.suite;
    entry["instances"] = row.instances;
    entry["pass"] = row.passes;
    entry["skipped"] = row.skipped;
    entry["worst_slack"] = JsonNumber(row.worst_slack);
    summary.push_back(std::move(entry));
  }
  report["summary"] = std::move(summary);
  WriteFileOrThrow(out_dir / "report.json", report.dump(2) + "\n");
  if (!ok) {
    diagnostics << "asserted checks failed; see "
                << (out_dir / "verdicts.jsonl").string() << "\n";
  }
  return ok ? 0 : 1;
}

int RunMechSuite(const json& config, const std::filesystem::path& out_dir,
                 std::uint64_t seed, std::ostream& diagnostics) {
  const json mech = config.value("mech", json::object());
  const std::string kind = FieldOr<std::string>(mech, "kind", "");
  if (kind.empty()) {
    throw ConfigError{"config field \"mech.kind\": required"};
  }
  StochasticKernel kernel = MakeConstantMechanism(1, 0);
  if (kind == "randomized_response") {
    kernel = MakeRandomizedResponse(FieldOr<int>(mech, "k", 2),
                                    FieldOr<double>(mech, "flip_prob", 0.25));
  } else if (kind == "constant") {
    kernel = MakeConstantMechanism(FieldOr<int>(mech, "n", 2),
                                   FieldOr<int>(mech, "target", 0));
  } else if (kind == "identity") {
    kernel = MakeIdentityKernel(FieldOr<int>(mech, "n", 2));
  } else if (kind == "random") {
    kernel = RandomKernel(seed, FieldOr<int>(mech, "n_in", 2),
                          FieldOr<int>(mech, "n_out", 2),
                          FieldOr<double>(mech, "min_prob", 1e-3));
  } else {
    throw ConfigError{"config field \"mech.kind\": unknown kind " + kind};
  }
  const std::string out_file =
      FieldOr<std::string>(mech, "out_file", "kernel.json");
  kernel.SaveJson(out_dir / out_file);
  // Round trip validates the written file against every invariant.
  const StochasticKernel reloaded =
      StochasticKernel::LoadJson(out_dir / out_file);
  if (reloaded.DigestHex() != kernel.DigestHex()) {
    diagnostics << "round-trip digest mismatch for " << out_file << "\n";
    return 2;
  }
  json report;
  report["suite"] = "mech";
  report["kernel_digest"] = kernel.DigestHex();
  report["kernel_file"] = out_file;
  report["eps_ldp"] = JsonNumber(LdpEpsilon(kernel));
  WriteFileOrThrow(out_dir / "report.json", report.dump(2) + "\n");
  return 0;
}

DiscreteDistribution PriorFromConfig(const json& metrics, const char* field,
                                     int n) {
  if (!metrics.contains(field)) return DiscreteDistribution::Uniform(n);
  try {
    return DiscreteDistribution(
        metrics.at(field).get<std::vector<double>>());
  } catch (const json::exception&) {
    throw ConfigError{std::string("config field \"metrics.") + field +
                      "\": expected an array of masses"};
  } catch (const ParameterError& e) {
    throw ConfigError{std::string("config field \"metrics.") + field +
                      "\": " + e.what()};
  }
}

int RunMetricsSuite(const json& config, const std::filesystem::path& out_dir,
                    std::ostream& diagnostics) {
  const json metrics = config.value("metrics", json::object());
  StochasticKernel kernel = MakeConstantMechanism(1, 0);
  if (metrics.contains("kernel_file")) {
    kernel = StochasticKernel::LoadJson(
        FieldOr<std::string>(metrics, "kernel_file", ""));
  } else if (metrics.contains("kernel")) {
    kernel = StochasticKernel::ParseJson(metrics.at("kernel").dump(),
                                         "config.metrics.kernel");
  } else {
    throw ConfigError{
        "config field \"metrics.kernel\" or \"metrics.kernel_file\": one is "
        "required"};
  }
  const DiscreteDistribution true_prior =
      PriorFromConfig(metrics, "true_prior", kernel.num_inputs());
  const DiscreteDistribution attacker_prior =
      metrics.contains("attacker_prior")
          ? PriorFromConfig(metrics, "attacker_prior", kernel.num_inputs())
          : true_prior;
  const PrivacyReport report =
      ComputePrivacyReport(kernel, true_prior, attacker_prior);
  WriteFileOrThrow(out_dir / "metrics_report.json",
                   report.ToJsonString() + "\n");
  WriteFileOrThrow(out_dir / "metrics_report.csv",
                   PrivacyReport::CsvHeader() + "\n" + report.ToCsvRow() +
                       "\n");
  (void)diagnostics;
  return 0;
}

}  // namespace

int RunExperiment(const std::filesystem::path& config_path,
                  const RunOptions& options, std::ostream& diagnostics) {
  const auto started = std::chrono::steady_clock::now();
  try {
    const json config = ParseConfigFile(config_path);

    const std::string suite =
        options.suite.value_or(FieldOr<std::string>(config, "suite", ""));
    const bool known_suite =
        suite == "mech" || suite == "metrics" || suite == "verify" ||
        suite == "attack" || suite == "robust" || suite == "estimate";
    if (!known_suite) {
      diagnostics << "config field \"suite\": must be one of mech, metrics, "
                     "verify, attack, robust, estimate\n";
      return 2;
    }
    if (!options.seed.has_value() &&
        (!config.contains("seed") || !config.at("seed").is_number_integer())) {
      diagnostics << "config field \"seed\": required integer\n";
      return 2;
    }
    const std::uint64_t seed =
        options.seed.has_value()
            ? *options.seed
            : static_cast<std::uint64_t>(config.at("seed").get<std::int64_t>());

    if (config.contains("tolerances")) {
      for (const auto& [key, value] : config.at("tolerances").items()) {
        if (!value.is_number() || !(value.get<double>() > 0.0)) {
          diagnostics << "config field \"tolerances." << key
                      << "\": must be a positive number\n";
          return 2;
        }
      }
    }

    const std::string out_name = options.out_dir.value_or(
        FieldOr<std::string>(config, "out_dir", "out"));
    const std::filesystem::path out_dir = ResolveOutDir(out_name);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
      diagnostics << "cannot create output directory " << out_dir.string()
                  << ": " << ec.message() << "\n";
      return 2;
    }

    const json tolerances = config.value("tolerances", json::object());

    if (suite == "mech") {
      return RunMechSuite(config, out_dir, seed, diagnostics);
    }
    if (suite == "metrics") {
      return RunMetricsSuite(config, out_dir, diagnostics);
    }

    SuiteOutcome outcome;
    json effective;
    effective["suite"] = suite;
    effective["seed"] = seed;
    if (suite == "verify") {
      VerifySuiteConfig vc;
      const json vj = config.value("verify", json::object());
      vc.kernels = FieldOr<int>(vj, "kernels", vc.kernels);
      vc.priors_per_kernel =
          FieldOr<int>(vj, "priors_per_kernel", vc.priors_per_kernel);
      vc.min_labels = FieldOr<int>(vj, "min_labels", vc.min_labels);
      vc.max_labels = FieldOr<int>(vj, "max_labels", vc.max_labels);
      vc.min_prob = FieldOr<double>(vj, "min_prob", vc.min_prob);
      vc.abp_eps_levels =
          VectorFieldOr(vj, "abp_eps_levels", vc.abp_eps_levels);
      vc.pac_instances = FieldOr<int>(vj, "pac_instances", vc.pac_instances);
      vc.kappa1_values = VectorFieldOr(vj, "kappa1_values", vc.kappa1_values);
      vc.kappa1_draws = IntVectorFieldOr(vj, "kappa1_draws", vc.kappa1_draws);
      vc.kappa1_eps = VectorFieldOr(vj, "kappa1_eps", vc.kappa1_eps);
      vc.kappa1_trials = options.trials.value_or(
          FieldOr<std::int64_t>(vj, "kappa1_trials", vc.kappa1_trials));
      vc.c1_instances = FieldOr<int>(vj, "c1_instances", vc.c1_instances);
      vc.c1_eps = VectorFieldOr(vj, "c1_eps", vc.c1_eps);
      vc.c1_max_support =
          FieldOr<int>(vj, "c1_max_support", vc.c1_max_support);
      vc.bound_tol = FieldOr<double>(tolerances, "bound", vc.bound_tol);
      vc.identity_tol =
          FieldOr<double>(tolerances, "identity", vc.identity_tol);
      vc.pac_tol = FieldOr<double>(tolerances, "pac", vc.pac_tol);
      effective["verify"] = {
          {"kernels", vc.kernels},
          {"priors_per_kernel", vc.priors_per_kernel},
          {"min_labels", vc.min_labels},
          {"max_labels", vc.max_labels},
          {"min_prob", vc.min_prob},
          {"abp_eps_levels", vc.abp_eps_levels},
          {"pac_instances", vc.pac_instances},
          {"kappa1_values", vc.kappa1_values},
          {"kappa1_draws", vc.kappa1_draws},
          {"kappa1_eps", vc.kappa1_eps},
          {"kappa1_trials", vc.kappa1_trials},
          {"c1_instances", vc.c1_instances},
          {"c1_eps", vc.c1_eps},
          {"c1_max_support", vc.c1_max_support},
          {"bound_tol", vc.bound_tol},
          {"identity_tol", vc.identity_tol},
          {"pac_tol", vc.pac_tol}};
      outcome = RunVerifySuite(vc, seed);
    } else if (suite == "attack") {
      AttackSuiteConfig ac;
      const json aj = config.value("attack", json::object());
      ac.dim = FieldOr<int>(aj, "dim", ac.dim);
      ac.deltas = VectorFieldOr(aj, "deltas", ac.deltas);
      ac.rounds = IntVectorFieldOr(aj, "rounds", ac.rounds);
      ac.seeds = static_cast<int>(options.trials.value_or(
          FieldOr<int>(aj, "seeds", ac.seeds)));
      ac.batch_size = FieldOr<int>(aj, "batch_size", ac.batch_size);
      ac.min_pass_rate =
          FieldOr<double>(aj, "min_pass_rate", ac.min_pass_rate);
      ac.tol = FieldOr<double>(tolerances, "bound", ac.tol);
      effective["attack"] = {{"dim", ac.dim},
                             {"deltas", ac.deltas},
                             {"rounds", ac.rounds},
                             {"seeds", ac.seeds},
                             {"batch_size", ac.batch_size},
                             {"min_pass_rate", ac.min_pass_rate},
                             {"tol", ac.tol}};
      outcome = RunAttackSuite(ac, seed);
    } else if (suite == "robust") {
      RobustSuiteConfig rc;
      const json rj = config.value("robust", json::object());
      rc.radii = VectorFieldOr(rj, "radii", rc.radii);
      rc.deltas = VectorFieldOr(rj, "deltas", rc.deltas);
      rc.rounds = FieldOr<int>(rj, "rounds", rc.rounds);
      rc.seeds = FieldOr<int>(rj, "seeds", rc.seeds);
      rc.batch_size = FieldOr<int>(rj, "batch_size", rc.batch_size);
      rc.x_samples = options.trials.value_or(
          FieldOr<std::int64_t>(rj, "x_samples", rc.x_samples));
      rc.probes = FieldOr<int>(rj, "probes", rc.probes);
      rc.include_regression =
          FieldOr<bool>(rj, "include_regression", rc.include_regression);
      rc.regression_deltas =
          VectorFieldOr(rj, "regression_deltas", rc.regression_deltas);
      rc.regression_slack =
          FieldOr<double>(rj, "regression_slack", rc.regression_slack);
      rc.tol = FieldOr<double>(tolerances, "robustness", rc.tol);
      effective["robust"] = {{"radii", rc.radii},
                             {"deltas", rc.deltas},
                             {"rounds", rc.rounds},
                             {"seeds", rc.seeds},
                             {"batch_size", rc.batch_size},
                             {"x_samples", rc.x_samples},
                             {"probes", rc.probes},
                             {"include_regression", rc.include_regression},
                             {"regression_deltas", rc.regression_deltas},
                             {"regression_slack", rc.regression_slack},
                             {"tol", rc.tol}};
      outcome = RunRobustSuite(rc, seed);
    } else {  // estimate
      EstimateSuiteConfig ec2;
      const json ej = config.value("estimate", json::object());
      ec2.dataset_size = FieldOr<int>(ej, "dataset_size", ec2.dataset_size);
      ec2.models = FieldOr<int>(ej, "models", ec2.models);
      ec2.trials = static_cast<int>(options.trials.value_or(
          FieldOr<int>(ej, "trials", ec2.trials)));
      ec2.attack_rounds =
          FieldOr<int>(ej, "attack_rounds", ec2.attack_rounds);
      ec2.threshold = FieldOr<double>(ej, "threshold", ec2.threshold);
      ec2.mc_tol = FieldOr<double>(tolerances, "mc_xi", ec2.mc_tol);
      effective["estimate"] = {{"dataset_size", ec2.dataset_size},
                               {"models", ec2.models},
                               {"trials", ec2.trials},
                               {"attack_rounds", ec2.attack_rounds},
                               {"threshold", ec2.threshold},
                               {"mc_tol", ec2.mc_tol}};
      outcome = RunEstimateSuite(ec2, seed);
    }

    const double wall_ms =
        std::chrono::duration<double, std::milli>(
            std::chrono::steady_clock::now() - started)
            .count();
    return WriteSuiteOutputs(out_dir, suite, seed, effective, outcome,
                             wall_ms, diagnostics);
  } catch (const ConfigError& e) {
    diagnostics << e.message << "\n";
    return 2;
  } catch (const std::exception& e) {
    diagnostics << e.what() << "\n";
    return 2;
  }
}

namespace {

std::vector<std::vector<std::string>> ReadCsv(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError{"cannot open " + path.string()};
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream row(line);
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

void EmitSeries(std::ostream& out, const std::string& series,
                const std::string& x, const std::string& y) {
  out << series << ',' << x << ',' << y << '\n';
}

}  // namespace

int EmitPlotData(const std::filesystem::path& report_path, std::ostream& out,
                 std::ostream& diagnostics) {
  try {
    std::ifstream in(report_path);
    if (!in) {
      diagnostics << "cannot open report " << report_path.string() << "\n";
      return 2;
    }
    json report;
    try {
      report = json::parse(in);
    } catch (const json::parse_error& e) {
      diagnostics << "report " << report_path.string() << ": " << e.what()
                  << "\n";
      return 2;
    }
    const std::filesystem::path dir = report_path.parent_path();
    out << "series,x,y\n";
    if (!report.contains("artifacts")) return 0;

    for (const auto& artifact : report.at("artifacts")) {
      const std::string name = artifact.get<std::string>();
      if (name == "attack_table.csv") {
        const auto rows = ReadCsv(dir / name);
        for (size_t i = 1; i < rows.size(); ++i) {
          const auto& row = rows[i];
          if (row.size() < 12 || row[3] == "1") continue;  // skipped cell
          EmitSeries(out, "eps_p_vs_delta", row[0], row[5]);
          EmitSeries(out, "appendix_rhs_vs_delta", row[0], row[9]);
        }
      } else if (name == "robust_cells.csv") {
        const auto rows = ReadCsv(dir / name);
        for (size_t i = 1; i < rows.size(); ++i) {
          const auto& row = rows[i];
          if (row.size() < 9) continue;
          EmitSeries(out, row[0] + ".measured_vs_r", row[3], row[5]);
          EmitSeries(out, row[0] + ".alpha_vs_r", row[3], row[6]);
        }
      } else if (name == "verdicts.jsonl") {
        // Slack histogram per check family.
        std::ifstream verdicts(dir / name);
        if (!verdicts) continue;
        std::map<std::string, std::vector<double>> slacks;
        std::string line;
        while (std::getline(verdicts, line)) {
          if (line.empty()) continue;
          const json check = json::parse(line);
          if (!check.contains("slack") || !check.at("slack").is_number()) {
            continue;  // infinite slack is reported as a string
          }
          std::string family = check.value("name", "");
          if (const size_t dot = family.find('.');
              dot != std::string::npos) {
            family.resize(dot);
          }
          slacks[family].push_back(check.at("slack").get<double>());
        }
        for (const auto& [family, values] : slacks) {
          const auto [lo_it, hi_it] =
              std::minmax_element(values.begin(), values.end());
          const double lo = *lo_it;
          const double span = std::max(*hi_it - lo, 1e-12);
          constexpr int kBins = 20;
          std::vector<int> bins(kBins, 0);
          for (double v : values) {
            int b = static_cast<int>((v - lo) / span * kBins);
            b = std::clamp(b, 0, kBins - 1);
            ++bins[static_cast<size_t>(b)];
          }
          for (int b = 0; b < kBins; ++b) {
            std::ostringstream x;
            x.precision(17);
            x << lo + (b + 0.5) * span / kBins;
            EmitSeries(out, "slack_hist." + family, x.str(),
                       std::to_string(bins[static_cast<size_t>(b)]));
          }
        }
      }
    }
    return 0;
  } catch (const ConfigError& e) {
    diagnostics << e.message << "\n";
    return 2;
  } catch (const std::exception& e) {
    diagnostics << e.what() << "\n";
    return 2;
  }
}

}  // namespace bayespriv
