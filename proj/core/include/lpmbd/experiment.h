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

#ifndef LPMBD_EXPERIMENT_H_
#define LPMBD_EXPERIMENT_H_

#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace lpmbd {

// Everything a CLI run needs. Keys in config files are "section.name" (see
// ConfigKeys()); defaults reproduce the LP-MBD setup (sigma_max 1.8, T 17).
struct ExperimentConfig {
  std::string experiment = "vehicle";  // numeric1d numeric2d vehicle train-alp train-avp
  std::string method = "lp";           // vp lp alp avp cem mppi
  std::vector<std::uint64_t> seeds = {0};
  std::string output_dir = "out";
  bool timing = true;

  // schedule
  double sigma_max = 1.8;
  int steps = 17;
  double beta0 = 1e-4;
  double beta1 = 1e-2;

  // sampler
  int n_samples = 100;
  std::string start = "prior_mean";  // reverse-process start: prior_mean or standard_normal
  double temperature = 0.1;
  std::string objective;  // empty: gaussian_1d (1D), constrained_mixture_2d (2D)
  int eval_runs = 0;  // MBD runs per seed; 0: 1 for numeric runs, 100 after training

  // baselines
  double elite_frac = 0.1;
  double init_std = 1.0;
  double min_std = 0.01;
  double mppi_temperature = 0.1;
  double noise_std = 1.0;

  // env
  std::string course = "s_curve";
  std::string waypoints;  // optional "x y" file replacing the built-in path
  int horizon = 50;
  int episode_len = 400;
  double dt = 0.1;
  double v_ref = 2.0;
  double w_lat = 1.0, w_yaw = 0.5, w_v = 1.0, w_collision = 100.0;
  std::optional<double> obstacle_x, obstacle_y;

  // policy
  std::string policy_path;  // checkpoint for alp/avp evaluation
  std::string task = "vehicle";  // train-alp: vehicle (PPO) or numeric2d (REINFORCE)
  int t_min = 2;
  int t_max = 0;  // 0: 30 for the vehicle task, 10 for the 2D study
  double sigma_lo = 0.2, sigma_hi = 4.0;
  int init_steps = -1;  // -1: LP steps for the vehicle, uniform for the 2D study

  // train
  int updates = 30;
  int batch_size = 16;
  double learning_rate = 0.05;
  double w_t = 1.0;
  int iterations = 240;
  double clip_ratio = 0.2;
  double gamma = 0.99;
  double gae_lambda = 0.95;
  int epochs = 10;
  int minibatch = 64;
  double ppo_learning_rate = 3e-4;
  double value_learning_rate = 1e-3;
  double entropy_coef = 0.0;
  double reward_scale = 0.1;
  double ppo_w_t = 0.2;

  int EffectiveTMax() const;
  std::string EffectiveObjective() const;
  int EffectiveEvalRuns() const;
};

struct ConfigKey {
  std::string key;   // "schedule.sigma_max"
  std::string flag;  // "--sigma-max"
  std::string help;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

const std::vector<ConfigKey>& ConfigKeys();

// "section.key" -> raw value. Lines: "[section]", "key = value", comments
// starting with '#' or ';' (inline after whitespace). Keys before any section
// are top-level.
std::vector<std::pair<std::string, std::string>> ParseConfigText(std::istream& in);

// Applies raw values in order (later wins). Throws ParameterError naming the
// offending key on unknown keys or unparsable values.
void ApplyConfigValues(ExperimentConfig& cfg,
                       const std::vector<std::pair<std::string, std::string>>& values);

// Full config as a config-file text block.
void WriteConfigText(std::ostream& out, const ExperimentConfig& cfg);

// "0,1,2", "0-4" or a mix.
std::vector<std::uint64_t> ParseSeedList(const std::string& text);

struct Diagnostic {
  std::string key;
  std::string message;  // includes the valid range
};

// Every invalid or missing key; empty means the config can run.
std::vector<Diagnostic> ValidateConfig(const ExperimentConfig& cfg);

struct SeedSummary {
  std::uint64_t seed = 0;
  double reward = 0.0;
  double mean_T = 0.0;
  double mean_sigma = 0.0;
  double plan_time_ms = 0.0;
  int collisions = 0;
};

struct RunSummary {
  std::string experiment;
  std::string method;
  std::string env;  // course for vehicle runs, objective otherwise
  std::vector<std::uint64_t> seeds;
  double reward_mean = 0.0;
  double reward_std = 0.0;  // sample std over seeds, 0 for one seed
  double mean_T = 0.0;
  double mean_sigma = 0.0;
  std::optional<double> plan_time_ms_mean;
  std::vector<SeedSummary> per_seed;
};

// Aggregates per-seed rows into the summary statistics.
RunSummary Summarize(std::string experiment, std::string method, std::string env,
                     std::vector<SeedSummary> per_seed, bool has_timing = true);

void WriteSummaryJson(std::ostream& out, const RunSummary& summary);
RunSummary ReadSummaryJson(std::istream& in);

// Recomputes a seed row from the artifacts written for that seed.
SeedSummary SeedSummaryFromArtifacts(const std::string& experiment,
                                     const std::string& seed_dir,
                                     std::uint64_t seed);

// out/<experiment>/<method>
std::string MethodDir(const ExperimentConfig& cfg);

// Runs the configured experiment and writes every artifact. Throws
// ParameterError for invalid configs (message lists all diagnostics).
RunSummary RunExperiment(const ExperimentConfig& cfg, std::ostream* log = nullptr);

struct ComparisonRow {
  std::string method;
  int seeds = 0;
  double reward_mean = 0.0;
  double reward_std = 0.0;
  double mean_T = 0.0;
  double mean_sigma = 0.0;
  std::optional<double> plan_time_ms_mean;
};

// Throws ParameterError when the runs disagree on seeds or environment.
std::vector<ComparisonRow> CompareMethods(const std::vector<RunSummary>& runs);
void WriteComparisonCsv(std::ostream& out, const std::vector<ComparisonRow>& rows);
std::string FormatComparisonTable(const std::vector<ComparisonRow>& rows);

}  // namespace lpmbd

#endif  // LPMBD_EXPERIMENT_H_
