// Copyright 2026 The LP-MBD Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: one verb per experiment plus compare and validate.
// Settings come from built-in defaults, then an optional --config file, then
// command-line flags (flags win).

#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lpmbd/common.h"
#include "lpmbd/experiment.h"

namespace {

constexpr int kUsageError = 2;

struct VerbOptions {
  std::string config_path;
  std::map<std::string, std::string> flags;  // config key -> raw flag value
  bool no_timing = false;
  bool quiet = false;
};

void AddConfigOptions(CLI::App* cmd, VerbOptions& opts, bool fixed_experiment) {
  cmd->add_option("--config", opts.config_path, "config file ([section] key = value)")
      ->check(CLI::ExistingFile);
  for (const auto& key : lpmbd::ConfigKeys()) {
    if (fixed_experiment && key.key == "experiment") continue;
    const lpmbd::ExperimentConfig defaults;
    cmd->add_option_function<std::string>(
           key.flag,
           [&opts, k = key.key](const std::string& v) { opts.flags[k] = v; },
           key.help + " [" + key.key + ", default " + key.get(defaults) + "]")
        ->type_name("VALUE");
  }
  cmd->add_flag("--no-timing", opts.no_timing, "write plan_time_ms as 0");
  cmd->add_flag("-q,--quiet", opts.quiet, "no progress output");
}

lpmbd::ExperimentConfig BuildConfig(const VerbOptions& opts,
                                    const std::string& experiment) {
  lpmbd::ExperimentConfig cfg;
  if (!experiment.empty()) cfg.experiment = experiment;
  if (!opts.config_path.empty()) {
    std::ifstream in(opts.config_path);
    auto values = lpmbd::ParseConfigText(in);
    lpmbd::ApplyConfigValues(cfg, values);
  }
  std::vector<std::pair<std::string, std::string>> flag_values(opts.flags.begin(),
                                                               opts.flags.end());
  lpmbd::ApplyConfigValues(cfg, flag_values);
  if (!experiment.empty()) cfg.experiment = experiment;
  if (opts.no_timing) cfg.timing = false;
  return cfg;
}

void PrintDiagnostics(const std::vector<lpmbd::Diagnostic>& diagnostics) {
  for (const auto& d : diagnostics) {
    std::cerr << "  " << d.key << ": " << d.message << "\n";
  }
}

int RunVerb(const VerbOptions& opts, const std::string& experiment) {
  const lpmbd::ExperimentConfig cfg = BuildConfig(opts, experiment);
  const auto diagnostics = lpmbd::ValidateConfig(cfg);
  if (!diagnostics.empty()) {
    std::cerr << "invalid config:\n";
    PrintDiagnostics(diagnostics);
    return kUsageError;
  }
  const auto summary = lpmbd::RunExperiment(cfg, opts.quiet ? nullptr : &std::clog);
  std::cout << "wrote " << lpmbd::MethodDir(cfg) << "/summary.json\n";
  std::cout << lpmbd::FormatComparisonTable(lpmbd::CompareMethods({summary}));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Model-based diffusion trajectory optimization experiments"};
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> verbs = {
      {"numeric1d", "1D objectives: convergence traces for vp, lp, cem, mppi"},
      {"numeric2d", "constrained 2D mixture: final-sample clouds"},
      {"vehicle", "closed-loop path tracking with obstacle avoidance"},
      {"train-alp", "train the adaptive LP scheduler (PPO or REINFORCE)"},
      {"train-avp", "train the adaptive VP baseline (REINFORCE)"},
  };
  std::map<std::string, VerbOptions> verb_opts;
  for (const auto& [name, help] : verbs) {
    CLI::App* cmd = app.add_subcommand(name, help);
    AddConfigOptions(cmd, verb_opts[name], /*fixed_experiment=*/true);
  }

  VerbOptions validate_opts;
  CLI::App* validate = app.add_subcommand("validate", "check a config and list problems");
  AddConfigOptions(validate, validate_opts, /*fixed_experiment=*/false);

  std::vector<std::string> summaries;
  std::string compare_out;
  CLI::App* compare = app.add_subcommand("compare", "tabulate summary.json files");
  compare->add_option("summaries", summaries, "summary.json files")
      ->required()
      ->check(CLI::ExistingFile);
  compare->add_option("--out", compare_out, "also write the table as CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    for (const auto& [name, help] : verbs) {
      if (app.got_subcommand(name)) return RunVerb(verb_opts[name], name);
    }
    if (app.got_subcommand(validate)) {
      const auto diagnostics = lpmbd::ValidateConfig(BuildConfig(validate_opts, ""));
      if (diagnostics.empty()) {
        std::cout << "ok\n";
        return 0;
      }
      std::cerr << diagnostics.size() << " problem(s):\n";
      PrintDiagnostics(diagnostics);
      return 1;
    }
    std::vector<lpmbd::RunSummary> runs;
    for (const auto& path : summaries) {
      std::ifstream in(path);
      runs.push_back(lpmbd::ReadSummaryJson(in));
    }
    const auto rows = lpmbd::CompareMethods(runs);
    std::cout << lpmbd::FormatComparisonTable(rows);
    if (!compare_out.empty()) {
      std::ofstream out(compare_out);
      lpmbd::WriteComparisonCsv(out, rows);
    }
    return 0;
  } catch (const lpmbd::ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << "\n";
    return 1;
  }
}
