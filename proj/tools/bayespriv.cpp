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

#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "bayespriv/experiment.hpp"
#include "bayespriv/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Bayesian privacy metrics and bound-verification toolkit"};
  app.set_version_flag("--version", bayespriv::kVersion);
  app.require_subcommand(1);

  // run
  std::string config_path;
  std::string out_dir;
  std::string suite;
  std::int64_t seed = 0;
  std::int64_t trials = 0;
  CLI::App* run = app.add_subcommand("run", "Execute a configured suite");
  run->add_option("--config", config_path, "Experiment config (JSON)")
      ->required();
  CLI::Option* seed_opt =
      run->add_option("--seed", seed, "Override the master seed");
  CLI::Option* out_opt =
      run->add_option("--out", out_dir, "Override the output directory");
  CLI::Option* suite_opt =
      run->add_option("--suite", suite, "Override the suite name");
  CLI::Option* trials_opt =
      run->add_option("--trials", trials, "Override the suite trial count");

  // emit-plots
  std::string report_path;
  std::string plot_out;
  CLI::App* emit = app.add_subcommand(
      "emit-plots", "Reshape a run report into long-format CSV series");
  emit->add_option("--report", report_path, "report.json of a finished run")
      ->required();
  emit->add_option("--out", plot_out, "Output CSV path (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    bayespriv::RunOptions options;
    if (*seed_opt) options.seed = static_cast<std::uint64_t>(seed);
    if (*out_opt) options.out_dir = out_dir;
    if (*suite_opt) options.suite = suite;
    if (*trials_opt) options.trials = trials;
    return bayespriv::RunExperiment(config_path, options, std::cerr);
  }

  if (plot_out.empty()) {
    return bayespriv::EmitPlotData(report_path, std::cout, std::cerr);
  }
  std::ofstream out(plot_out);
  if (!out) {
    std::cerr << "cannot open " << plot_out << " for writing\n";
    return 2;
  }
  return bayespriv::EmitPlotData(report_path, out, std::cerr);
}
