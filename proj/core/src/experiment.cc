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

#include "lpmbd/experiment.h"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lpmbd/baselines.h"
#include "lpmbd/csv.h"
#include "lpmbd/planners.h"
#include "lpmbd/policy.h"
#include "lpmbd/ppo.h"
#include "lpmbd/reinforce.h"
#include "lpmbd/sampler.h"
#include "lpmbd/schedules.h"
#include "lpmbd/target.h"
#include "lpmbd/vehicle_env.h"

namespace lpmbd {
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void BadValue(const std::string& key, const std::string& value,
                           const std::string& expected) {
  throw ParameterError("invalid value for " + key + ": '" + value + "' (expected " +
                       expected + ")");
}

double ParseDouble(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used == v.size()) return x;
  } catch (const std::exception&) {
  }
  BadValue(key, v, "a number");
}

int ParseInt(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long x = std::stol(v, &used);
    if (used == v.size() && x >= std::numeric_limits<int>::min() &&
        x <= std::numeric_limits<int>::max()) {
      return static_cast<int>(x);
    }
  } catch (const std::exception&) {
  }
  BadValue(key, v, "an integer");
}

bool ParseBool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "off" || v == "no") return false;
  BadValue(key, v, "true or false");
}

template <typename T>
ConfigKey NumberKey(std::string key, std::string flag, std::string help,
                    T ExperimentConfig::*member) {
  ConfigKey k{key, std::move(flag), std::move(help), nullptr, nullptr};
  k.set = [key, member](ExperimentConfig& c, const std::string& v) {
    if constexpr (std::is_same_v<T, int>) {
      c.*member = ParseInt(key, v);
    } else {
      c.*member = ParseDouble(key, v);
    }
  };
  k.get = [member](const ExperimentConfig& c) {
    if constexpr (std::is_same_v<T, int>) {
      return std::to_string(c.*member);
    } else {
      return FormatNumber(c.*member);
    }
  };
  return k;
}

ConfigKey StringKey(std::string key, std::string flag, std::string help,
                    std::string ExperimentConfig::*member) {
  return {std::move(key), std::move(flag), std::move(help),
          [member](ExperimentConfig& c, const std::string& v) { c.*member = v; },
          [member](const ExperimentConfig& c) { return c.*member; }};
}

ConfigKey OptionalKey(std::string key, std::string flag, std::string help,
                      std::optional<double> ExperimentConfig::*member) {
  ConfigKey k{key, std::move(flag), std::move(help), nullptr, nullptr};
  k.set = [key, member](ExperimentConfig& c, const std::string& v) {
    if (v.empty() || v == "auto") {
      c.*member = std::nullopt;
    } else {
      c.*member = ParseDouble(key, v);
    }
  };
  k.get = [member](const ExperimentConfig& c) {
    return (c.*member) ? FormatNumber(*(c.*member)) : std::string("auto");
  };
  return k;
}

std::vector<ConfigKey> BuildKeys() {
  using C = ExperimentConfig;
  std::vector<ConfigKey> keys;
  keys.push_back(StringKey("experiment", "--experiment",
                           "numeric1d, numeric2d, vehicle, train-alp or train-avp",
                           &C::experiment));
  keys.push_back(StringKey("method", "--method", "vp, lp, alp, avp, cem or mppi",
                           &C::method));
  keys.push_back({"seeds", "--seeds", "seed list, e.g. 0,1,2 or 0-4",
                  [](C& c, const std::string& v) { c.seeds = ParseSeedList(v); },
                  [](const C& c) {
                    std::string out;
                    for (std::size_t i = 0; i < c.seeds.size(); ++i) {
                      if (i) out += ",";
                      out += std::to_string(c.seeds[i]);
                    }
                    return out;
                  }});
  keys.push_back(StringKey("output_dir", "--out", "output root directory",
                           &C::output_dir));
  keys.push_back({"timing", "--timing",
                  "record plan_time_ms (false writes 0 for byte-identical reruns)",
                  [](C& c, const std::string& v) { c.timing = ParseBool("timing", v); },
                  [](const C& c) { return std::string(c.timing ? "true" : "false"); }});

  keys.push_back(NumberKey("schedule.sigma_max", "--sigma-max",
                           "LP noise cap sigma_max", &C::sigma_max));
  keys.push_back(NumberKey("schedule.steps", "--steps", "diffusion steps T", &C::steps));
  keys.push_back(NumberKey("schedule.beta0", "--beta0", "VP first beta", &C::beta0));
  keys.push_back(NumberKey("schedule.beta1", "--beta1", "VP last beta", &C::beta1));

  keys.push_back(NumberKey("sampler.n_samples", "--samples",
                           "candidates per step", &C::n_samples));
  keys.push_back(StringKey("sampler.start", "--start",
                           "reverse-process start: prior_mean or standard_normal",
                           &C::start));
  keys.push_back(NumberKey("sampler.temperature", "--temperature",
                           "target temperature lambda", &C::temperature));
  keys.push_back(StringKey("sampler.objective", "--objective",
                           "built-in objective name", &C::objective));
  keys.push_back(NumberKey("sampler.eval_runs", "--eval-runs",
                           "optimizer runs per seed (0: auto)", &C::eval_runs));

  keys.push_back(NumberKey("baseline.elite_frac", "--elite-frac", "CEM elite fraction",
                           &C::elite_frac));
  keys.push_back(NumberKey("baseline.init_std", "--init-std", "CEM initial std",
                           &C::init_std));
  keys.push_back(NumberKey("baseline.min_std", "--min-std", "CEM std floor",
                           &C::min_std));
  keys.push_back(NumberKey("baseline.mppi_temperature", "--mppi-temperature",
                           "MPPI temperature", &C::mppi_temperature));
  keys.push_back(NumberKey("baseline.noise_std", "--noise-std", "MPPI noise std",
                           &C::noise_std));

  keys.push_back(StringKey("env.course", "--course", "s_curve or oval", &C::course));
  keys.push_back(StringKey("env.waypoints", "--waypoints",
                           "waypoint file overriding the course geometry",
                           &C::waypoints));
  keys.push_back(NumberKey("env.horizon", "--horizon", "planning horizon H",
                           &C::horizon));
  keys.push_back(NumberKey("env.episode_len", "--episode-len", "episode length",
                           &C::episode_len));
  keys.push_back(NumberKey("env.dt", "--dt", "time step [s]", &C::dt));
  keys.push_back(NumberKey("env.v_ref", "--v-ref", "reference speed [m/s]", &C::v_ref));
  keys.push_back(NumberKey("env.w_lat", "--w-lat", "lateral error weight", &C::w_lat));
  keys.push_back(NumberKey("env.w_yaw", "--w-yaw", "heading error weight", &C::w_yaw));
  keys.push_back(NumberKey("env.w_v", "--w-v", "speed error weight", &C::w_v));
  keys.push_back(NumberKey("env.w_collision", "--w-collision", "collision penalty",
                           &C::w_collision));
  keys.push_back(OptionalKey("env.obstacle_x", "--obstacle-x",
                             "obstacle center x (auto: course default)",
                             &C::obstacle_x));
  keys.push_back(OptionalKey("env.obstacle_y", "--obstacle-y",
                             "obstacle center y (auto: course default)",
                             &C::obstacle_y));

  keys.push_back(StringKey("policy.path", "--policy", "policy checkpoint",
                           &C::policy_path));
  keys.push_back(StringKey("policy.task", "--task",
                           "train-alp task: vehicle or numeric2d", &C::task));
  keys.push_back(NumberKey("policy.t_min", "--t-min", "smallest selectable T",
                           &C::t_min));
  keys.push_back(NumberKey("policy.t_max", "--t-max",
                           "largest selectable T (0: task default)", &C::t_max));
  keys.push_back(NumberKey("policy.init_steps", "--init-steps",
                           "initial mode of T (-1: auto, 0: uniform)",
                           &C::init_steps));
  keys.push_back(NumberKey("policy.sigma_lo", "--sigma-lo", "lower sigma_max bound",
                           &C::sigma_lo));
  keys.push_back(NumberKey("policy.sigma_hi", "--sigma-hi", "upper sigma_max bound",
                           &C::sigma_hi));

  keys.push_back(NumberKey("train.updates", "--updates", "REINFORCE updates",
                           &C::updates));
  keys.push_back(NumberKey("train.batch_size", "--batch-size",
                           "REINFORCE episodes per update", &C::batch_size));
  keys.push_back(NumberKey("train.learning_rate", "--lr", "REINFORCE learning rate",
                           &C::learning_rate));
  keys.push_back(NumberKey("train.w_t", "--w-t", "REINFORCE step penalty w_T",
                           &C::w_t));
  keys.push_back(NumberKey("train.iterations", "--iterations",
                           "PPO iterations (one episode each)", &C::iterations));
  keys.push_back(NumberKey("train.clip_ratio", "--clip", "PPO clip ratio",
                           &C::clip_ratio));
  keys.push_back(NumberKey("train.gamma", "--gamma", "discount", &C::gamma));
  keys.push_back(NumberKey("train.gae_lambda", "--gae-lambda", "GAE lambda",
                           &C::gae_lambda));
  keys.push_back(NumberKey("train.epochs", "--epochs", "PPO epochs per update",
                           &C::epochs));
  keys.push_back(NumberKey("train.minibatch", "--minibatch", "PPO minibatch size",
                           &C::minibatch));
  keys.push_back(NumberKey("train.ppo_learning_rate", "--ppo-lr",
                           "PPO policy learning rate", &C::ppo_learning_rate));
  keys.push_back(NumberKey("train.value_learning_rate", "--value-lr",
                           "PPO value learning rate", &C::value_learning_rate));
  keys.push_back(NumberKey("train.entropy_coef", "--entropy-coef",
                           "PPO entropy bonus", &C::entropy_coef));
  keys.push_back(NumberKey("train.reward_scale", "--reward-scale",
                           "PPO reward scale", &C::reward_scale));
  keys.push_back(NumberKey("train.ppo_w_t", "--ppo-w-t", "PPO step penalty w_T",
                           &C::ppo_w_t));
  return keys;
}

const std::set<std::string> kExperiments = {"numeric1d", "numeric2d", "vehicle",
                                            "train-alp", "train-avp"};

std::set<std::string> MethodsFor(const std::string& experiment) {
  if (experiment == "numeric1d") return {"vp", "lp", "cem", "mppi"};
  if (experiment == "numeric2d") return {"vp", "lp", "alp", "avp", "cem", "mppi"};
  if (experiment == "vehicle") return {"vp", "lp", "alp", "cem", "mppi"};
  if (experiment == "train-alp") return {"alp"};
  if (experiment == "train-avp") return {"avp"};
  return {};
}

std::string Join(const std::set<std::string>& names) {
  std::string out;
  for (const auto& n : names) out += (out.empty() ? "" : ", ") + n;
  return out;
}

void WriteText(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  body(out);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::ifstream OpenInput(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return in;
}

std::string ShortNumber(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

double ElapsedMs(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                   t0)
      .count();
}

ReverseStart ParseStart(const std::string& name) {
  if (name == "standard_normal") return ReverseStart::kStandardNormal;
  return ReverseStart::kPriorMean;
}

SamplerConfig SamplerFor(const ExperimentConfig& cfg) {
  SamplerConfig sc;
  sc.n_samples = cfg.n_samples;
  sc.start = ParseStart(cfg.start);
  return sc;
}

bool IsNumericExperiment(const ExperimentConfig& cfg) {
  return cfg.experiment == "numeric1d" || cfg.experiment == "numeric2d";
}

bool TrainsVehicle(const ExperimentConfig& cfg) {
  return cfg.experiment == "train-alp" && cfg.task == "vehicle";
}

// ---------------------------------------------------------------------------
// Numeric experiments.

struct NumericRun {
  DecisionVector y;
  int steps = 0;
  double sigma = 0.0;
  double plan_time_ms = 0.0;
  std::vector<TraceRow> trace;
  std::vector<DecisionVector> states;
};

struct LoadedPolicies {
  std::optional<SchedulerPolicy> alp;
  std::optional<AvpPolicy> avp;
};

LoadedPolicies LoadPolicies(const ExperimentConfig& cfg) {
  LoadedPolicies p;
  if (cfg.method == "alp" && cfg.experiment != "train-alp") {
    auto in = OpenInput(cfg.policy_path);
    p.alp = SchedulerPolicy::Load(in);
  } else if (cfg.method == "avp" && cfg.experiment != "train-avp") {
    auto in = OpenInput(cfg.policy_path);
    p.avp = AvpPolicy::Load(in);
  }
  return p;
}

NumericRun RunNumericOnce(const ExperimentConfig& cfg, const TargetDensity& target,
                          const LoadedPolicies& policies, std::uint64_t seed,
                          bool record) {
  NumericRun run;
  const auto t0 = std::chrono::steady_clock::now();
  auto run_schedule = [&](const Schedule& schedule) {
    SamplerConfig sc = SamplerFor(cfg);
    sc.seed = seed;
    sc.record_trace = record;
    MbdResult r = RunMbd(target, schedule, sc);
    run.y = r.y;
    run.trace = std::move(r.trace);
    run.states = std::move(r.states);
    run.steps = StepsOf(schedule);
    run.sigma = MaxProposalStd(schedule);
  };
  if (cfg.method == "lp") {
    run_schedule(LpSchedule::Build(cfg.sigma_max, cfg.steps));
  } else if (cfg.method == "vp") {
    run_schedule(VpSchedule::Build(cfg.beta0, cfg.beta1, cfg.steps));
  } else if (cfg.method == "alp") {
    const SchedulerAction a =
        policies.alp->Mode(ConstantObservation(policies.alp->options().obs_dim));
    run_schedule(LpSchedule::Build(a.sigma_max, a.steps));
  } else if (cfg.method == "avp") {
    const AvpAction a =
        policies.avp->Mode(ConstantObservation(policies.avp->options().obs_dim));
    run_schedule(VpSchedule::Build(a.beta0, a.beta1, a.steps));
  } else if (cfg.method == "cem") {
    CemConfig c = ParityCem(cfg.steps, cfg.n_samples);
    c.elite_frac = cfg.elite_frac;
    c.init_std = cfg.init_std;
    c.min_std = cfg.min_std;
    c.seed = seed;
    c.record_trace = record;
    BaselineResult r = RunCem(target, c);
    run.y = r.y;
    run.trace = std::move(r.trace);
    run.steps = c.iterations;
    run.sigma = c.init_std;
  } else {
    MppiConfig c = ParityMppi(cfg.steps, cfg.n_samples);
    c.temperature = cfg.mppi_temperature;
    c.noise_std = cfg.noise_std;
    c.seed = seed;
    c.record_trace = record;
    BaselineResult r = RunMppi(target, c);
    run.y = r.y;
    run.trace = std::move(r.trace);
    run.steps = c.iterations;
    run.sigma = c.noise_std;
  }
  run.plan_time_ms = cfg.timing ? ElapsedMs(t0) : 0.0;
  return run;
}

std::vector<std::string> SampleHeader(int dim) {
  std::vector<std::string> h{"run"};
  for (int d = 0; d < dim; ++d) h.push_back("y" + std::to_string(d));
  for (const char* c : {"cost", "log_weight", "feasible", "T", "sigma", "plan_time_ms"}) {
    h.push_back(c);
  }
  return h;
}

void WriteSamplesCsv(std::ostream& out, const TargetDensity& target,
                     const std::vector<NumericRun>& runs) {
  CsvWriter csv(out, SampleHeader(target.dim));
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const CandidateScore s = Score(target, runs[r].y);
    csv << static_cast<int>(r);
    for (int d = 0; d < target.dim; ++d) csv << runs[r].y[d];
    csv << s.cost << LogWeight(target, s) << (s.feasible ? 1 : 0) << runs[r].steps
        << runs[r].sigma << runs[r].plan_time_ms;
    csv.EndRow();
  }
}

void WriteStatesCsv(std::ostream& out, const MbdResult& result, int dim) {
  std::vector<std::string> h{"step"};
  for (int d = 0; d < dim; ++d) h.push_back("y" + std::to_string(d));
  CsvWriter csv(out, h);
  for (std::size_t k = 0; k < result.states.size(); ++k) {
    csv << result.trace[k].step;
    for (int d = 0; d < dim; ++d) csv << result.states[k][d];
    csv.EndRow();
  }
}

SeedSummary SummaryFromSamples(const CsvTable& table, std::uint64_t seed) {
  SeedSummary s;
  s.seed = seed;
  const std::size_t n = table.rows.size();
  if (n == 0) throw std::runtime_error("empty samples.csv");
  table.Column("log_weight");  // fail early on a foreign file
  for (std::size_t r = 0; r < n; ++r) {
    s.reward += table.Number(r, "log_weight");
    s.mean_T += table.Number(r, "T");
    s.mean_sigma += table.Number(r, "sigma");
    s.plan_time_ms += table.Number(r, "plan_time_ms");
  }
  s.reward /= n;
  s.mean_T /= n;
  s.mean_sigma /= n;
  s.plan_time_ms /= n;
  return s;
}

SeedSummary SummaryFromCurve(const std::vector<LearningCurveRow>& curve,
                             std::uint64_t seed) {
  if (curve.empty()) throw std::runtime_error("empty learning curve");
  SeedSummary s;
  s.seed = seed;
  s.reward = curve.back().mean_reward;
  s.mean_T = curve.back().mean_T;
  s.mean_sigma = curve.back().mean_sigma;
  return s;
}

SeedSummary SummaryFromEpisode(const std::vector<EpisodeLogRow>& log,
                               std::uint64_t seed) {
  SeedSummary s;
  s.seed = seed;
  if (log.empty()) throw std::runtime_error("empty episode log");
  for (const auto& r : log) {
    s.reward += r.reward;
    s.mean_T += r.steps_chosen;
    s.mean_sigma += r.sigma_chosen;
    s.plan_time_ms += r.plan_time_ms;
  }
  const double n = static_cast<double>(log.size());
  s.mean_T /= n;
  s.mean_sigma /= n;
  s.plan_time_ms /= n;
  return s;
}

SeedSummary RunNumericSeed(const ExperimentConfig& cfg, const TargetDensity& target,
                           const LoadedPolicies& policies, std::uint64_t seed,
                           const fs::path& dir) {
  const int runs = cfg.EffectiveEvalRuns();
  std::vector<NumericRun> results;
  results.reserve(runs);
  MbdResult first_states;
  for (int r = 0; r < runs; ++r) {
    const std::uint64_t run_seed = runs == 1 ? seed : StreamFor(seed, r)();
    results.push_back(RunNumericOnce(cfg, target, policies, run_seed, r == 0));
  }
  WriteText(dir / "trace.csv",
            [&](std::ostream& o) { WriteTraceCsv(o, results.front().trace); });
  if (!results.front().states.empty()) {
    first_states.trace = results.front().trace;
    first_states.states = results.front().states;
    WriteText(dir / "states.csv", [&](std::ostream& o) {
      WriteStatesCsv(o, first_states, target.dim);
    });
  }
  WriteText(dir / "samples.csv",
            [&](std::ostream& o) { WriteSamplesCsv(o, target, results); });
  auto in = OpenInput(dir / "samples.csv");
  return SummaryFromSamples(ReadCsv(in), seed);
}

// ---------------------------------------------------------------------------
// Vehicle.

EnvConfig BuildEnvConfig(const ExperimentConfig& cfg) {
  EnvConfig env = DefaultEnvConfig(ParsePathKind(cfg.course));
  env.horizon = cfg.horizon;
  env.episode_len = cfg.episode_len;
  env.dt = cfg.dt;
  env.v_ref = cfg.v_ref;
  env.w_lat = cfg.w_lat;
  env.w_yaw = cfg.w_yaw;
  env.w_v = cfg.w_v;
  env.w_collision = cfg.w_collision;
  if (cfg.obstacle_x) env.obstacle.center.x() = *cfg.obstacle_x;
  if (cfg.obstacle_y) env.obstacle.center.y() = *cfg.obstacle_y;
  return env;
}

VehicleEnv BuildEnv(const ExperimentConfig& cfg) {
  const EnvConfig env_cfg = BuildEnvConfig(cfg);
  if (cfg.waypoints.empty()) return VehicleEnv(env_cfg);
  auto in = OpenInput(cfg.waypoints);
  const PathKind kind = env_cfg.reference;
  return VehicleEnv(env_cfg, ReadWaypoints(in, kind, kind == PathKind::kOval));
}

EpisodePlanner BuildVehiclePlanner(const ExperimentConfig& cfg,
                                   const LoadedPolicies& policies) {
  if (cfg.method == "lp") {
    return MakeScheduledPlanner(LpSchedule::Build(cfg.sigma_max, cfg.steps),
                                SamplerFor(cfg), cfg.temperature);
  }
  if (cfg.method == "vp") {
    return MakeScheduledPlanner(VpSchedule::Build(cfg.beta0, cfg.beta1, cfg.steps),
                                SamplerFor(cfg), cfg.temperature);
  }
  if (cfg.method == "cem") {
    CemConfig c = ParityCem(cfg.steps, cfg.n_samples);
    c.elite_frac = cfg.elite_frac;
    c.init_std = cfg.init_std;
    c.min_std = cfg.min_std;
    return MakeCemPlanner(c, cfg.temperature);
  }
  if (cfg.method == "mppi") {
    MppiConfig c = ParityMppi(cfg.steps, cfg.n_samples);
    c.temperature = cfg.mppi_temperature;
    c.noise_std = cfg.noise_std;
    return MakeMppiPlanner(c, cfg.temperature);
  }
  return MakeAlpPlanner(*policies.alp, SamplerFor(cfg), /*deterministic=*/true,
                        cfg.temperature);
}

SeedSummary RunVehicleSeed(const ExperimentConfig& cfg, const VehicleEnv& env,
                           const EpisodePlanner& planner, std::uint64_t seed,
                           const fs::path& dir) {
  const EpisodeResult result = RunEpisode(planner, env, seed, cfg.timing);
  WriteText(dir / "episode.csv",
            [&](std::ostream& o) { WriteEpisodeCsv(o, result.log); });
  auto in = OpenInput(dir / "episode.csv");
  SeedSummary s = SummaryFromEpisode(ReadEpisodeCsv(in), seed);
  s.collisions = result.collisions;
  return s;
}

// ---------------------------------------------------------------------------
// Training.

SeedSummary RunTrainSeed(const ExperimentConfig& cfg, std::uint64_t seed,
                         const fs::path& dir, std::ostream* log) {
  Rng init_rng = StreamFor(seed, 0x1417);
  std::vector<LearningCurveRow> curve;
  auto report = [&](const LearningCurveRow& row) {
    if (log) {
      *log << "  iter " << row.iteration << " reward " << row.mean_reward
           << " mean_T " << row.mean_T << " mean_sigma " << row.mean_sigma << "\n";
    }
  };

  if (TrainsVehicle(cfg)) {
    SchedulerPolicy::Options opt;
    opt.t_min = cfg.t_min;
    opt.t_max = cfg.EffectiveTMax();
    opt.sigma_lo = cfg.sigma_lo;
    opt.sigma_hi = cfg.sigma_hi;
    opt.init_steps = cfg.init_steps < 0 ? cfg.steps : cfg.init_steps;
    SchedulerPolicy policy(opt, init_rng);
    FeedforwardNet value = MakeValueNet(opt, init_rng);
    PpoConfig ppo;
    ppo.clip_ratio = cfg.clip_ratio;
    ppo.gamma = cfg.gamma;
    ppo.gae_lambda = cfg.gae_lambda;
    ppo.epochs = cfg.epochs;
    ppo.minibatch = cfg.minibatch;
    ppo.learning_rate = cfg.ppo_learning_rate;
    ppo.value_learning_rate = cfg.value_learning_rate;
    ppo.entropy_coef = cfg.entropy_coef;
    ppo.reward_scale = cfg.reward_scale;
    ppo.w_t = cfg.ppo_w_t;
    ppo.n_samples = cfg.n_samples;
    ppo.start = ParseStart(cfg.start);
    ppo.temperature = cfg.temperature;
    PpoResult r = PpoTrain(std::move(policy), std::move(value), BuildEnvConfig(cfg),
                           ppo, cfg.iterations, seed, report);
    WriteText(dir / "policy.txt", [&](std::ostream& o) { r.policy.Save(o); });
    WriteText(dir / "value.txt", [&](std::ostream& o) { r.value.Save(o); });
    curve = std::move(r.curve);
  } else {
    const TargetDensity target = [&] {
      TargetDensity t = MakeObjective(cfg.EffectiveObjective());
      t.temperature = cfg.temperature;
      return t;
    }();
    ReinforceConfig rc;
    rc.updates = cfg.updates;
    rc.batch_size = cfg.batch_size;
    rc.learning_rate = cfg.learning_rate;
    rc.w_t = cfg.w_t;
    rc.n_samples = cfg.n_samples;
    rc.start = ParseStart(cfg.start);
    std::vector<DecisionVector> samples;
    if (cfg.experiment == "train-alp") {
      SchedulerPolicy::Options opt;
      opt.obs_dim = 1;
      opt.t_min = cfg.t_min;
      opt.t_max = cfg.EffectiveTMax();
      opt.sigma_lo = cfg.sigma_lo;
      opt.sigma_hi = cfg.sigma_hi;
      opt.init_steps = std::max(cfg.init_steps, 0);
      ReinforceResult r =
          ReinforceTrain(SchedulerPolicy(opt, init_rng), target, rc, seed);
      WriteText(dir / "policy.txt", [&](std::ostream& o) { r.policy.Save(o); });
      samples = EvaluateAlp(r.policy, target, cfg.EffectiveEvalRuns(), cfg.n_samples,
                            seed, rc.start);
      const SchedulerAction a =
          r.policy.Mode(ConstantObservation(r.policy.options().obs_dim));
      std::vector<NumericRun> runs(samples.size());
      for (std::size_t k = 0; k < samples.size(); ++k) {
        runs[k].y = samples[k];
        runs[k].steps = a.steps;
        runs[k].sigma = a.sigma_max;
      }
      WriteText(dir / "samples.csv",
                [&](std::ostream& o) { WriteSamplesCsv(o, target, runs); });
      curve = std::move(r.curve);
    } else {
      AvpPolicy::Options opt;
      opt.t_min = cfg.t_min;
      opt.t_max = cfg.EffectiveTMax();
      AvpResult r = AvpTrain(AvpPolicy(opt, init_rng), target, rc, seed);
      WriteText(dir / "policy.txt", [&](std::ostream& o) { r.policy.Save(o); });
      samples = EvaluateAvp(r.policy, target, cfg.EffectiveEvalRuns(), cfg.n_samples,
                            seed, rc.start);
      const AvpAction a =
          r.policy.Mode(ConstantObservation(r.policy.options().obs_dim));
      const double sigma =
          MaxProposalStd(VpSchedule::Build(a.beta0, a.beta1, a.steps));
      std::vector<NumericRun> runs(samples.size());
      for (std::size_t k = 0; k < samples.size(); ++k) {
        runs[k].y = samples[k];
        runs[k].steps = a.steps;
        runs[k].sigma = sigma;
      }
      WriteText(dir / "samples.csv",
                [&](std::ostream& o) { WriteSamplesCsv(o, target, runs); });
      curve = std::move(r.curve);
    }
    for (const auto& row : curve) report(row);
  }
  WriteText(dir / "learning_curve.csv",
            [&](std::ostream& o) { WriteLearningCurveCsv(o, curve); });
  auto in = OpenInput(dir / "learning_curve.csv");
  return SummaryFromCurve(ReadLearningCurveCsv(in), seed);
}

std::string EnvName(const ExperimentConfig& cfg) {
  if (cfg.experiment == "vehicle" || TrainsVehicle(cfg)) {
    return cfg.waypoints.empty() ? cfg.course : cfg.course + ":" + cfg.waypoints;
  }
  return cfg.EffectiveObjective();
}

}  // namespace

int ExperimentConfig::EffectiveTMax() const {
  if (t_max > 0) return t_max;
  return (experiment == "vehicle" || (experiment == "train-alp" && task == "vehicle"))
             ? 30
             : 10;
}

std::string ExperimentConfig::EffectiveObjective() const {
  if (!objective.empty()) return objective;
  return experiment == "numeric1d" ? "gaussian_1d" : "constrained_mixture_2d";
}

int ExperimentConfig::EffectiveEvalRuns() const {
  if (eval_runs > 0) return eval_runs;
  return (experiment == "train-alp" || experiment == "train-avp") ? 100 : 1;
}

const std::vector<ConfigKey>& ConfigKeys() {
  static const std::vector<ConfigKey> keys = BuildKeys();
  return keys;
}

std::vector<std::pair<std::string, std::string>> ParseConfigText(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> out;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = Trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ParameterError("config line " + std::to_string(lineno) +
                             ": unterminated section header");
      }
      section = Trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParameterError("config line " + std::to_string(lineno) +
                           ": expected key = value");
    }
    const std::string key = Trim(line.substr(0, eq));
    std::string value = line.substr(eq + 1);
    // Inline comments need leading whitespace, so "a;b" stays a value.
    for (std::size_t k = 1; k < value.size(); ++k) {
      if ((value[k] == '#' || value[k] == ';') &&
          std::isspace(static_cast<unsigned char>(value[k - 1]))) {
        value.resize(k);
        break;
      }
    }
    value = Trim(value);
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    out.emplace_back(section.empty() ? key : section + "." + key, value);
  }
  return out;
}

void ApplyConfigValues(ExperimentConfig& cfg,
                       const std::vector<std::pair<std::string, std::string>>& values) {
  const auto& keys = ConfigKeys();
  for (const auto& [key, value] : values) {
    const auto it = std::find_if(keys.begin(), keys.end(),
                                 [&](const ConfigKey& k) { return k.key == key; });
    if (it == keys.end()) throw ParameterError("unknown config key: " + key);
    it->set(cfg, value);
  }
}

void WriteConfigText(std::ostream& out, const ExperimentConfig& cfg) {
  std::string section;
  for (const auto& k : ConfigKeys()) {
    const auto dot = k.key.find('.');
    const std::string sec = dot == std::string::npos ? "" : k.key.substr(0, dot);
    const std::string name = dot == std::string::npos ? k.key : k.key.substr(dot + 1);
    if (sec != section) {
      out << "\n[" << sec << "]\n";
      section = sec;
    }
    out << name << " = " << k.get(cfg) << "\n";
  }
}

std::vector<std::uint64_t> ParseSeedList(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(text);
  std::string item;
  auto parse = [&](const std::string& s) -> std::uint64_t {
    const std::string t = Trim(s);
    if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos) {
      BadValue("seeds", text, "non-negative integers, e.g. 0,1,2 or 0-4");
    }
    return std::stoull(t);
  };
  while (std::getline(ss, item, ',')) {
    if (Trim(item).empty()) continue;
    const auto dash = item.find('-');
    if (dash == std::string::npos) {
      seeds.push_back(parse(item));
    } else {
      const std::uint64_t lo = parse(item.substr(0, dash));
      const std::uint64_t hi = parse(item.substr(dash + 1));
      if (hi < lo || hi - lo > 100000) BadValue("seeds", text, "an increasing range");
      for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
    }
  }
  if (seeds.empty()) BadValue("seeds", text, "at least one seed");
  return seeds;
}

std::vector<Diagnostic> ValidateConfig(const ExperimentConfig& cfg) {
  std::vector<Diagnostic> d;
  auto flag = [&](const std::string& key, const std::string& msg) {
    d.push_back({key, msg});
  };
  auto positive = [&](const std::string& key, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      flag(key, "got " + ShortNumber(v) + ", valid range (0, inf)");
    }
  };
  auto non_negative = [&](const std::string& key, double v) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      flag(key, "got " + ShortNumber(v) + ", valid range [0, inf)");
    }
  };
  auto at_least = [&](const std::string& key, int v, int lo) {
    if (v < lo) {
      flag(key, "got " + std::to_string(v) + ", valid range [" + std::to_string(lo) +
                    ", inf)");
    }
  };

  if (!kExperiments.count(cfg.experiment)) {
    flag("experiment", "got '" + cfg.experiment +
                           "', valid: numeric1d, numeric2d, vehicle, train-alp, "
                           "train-avp");
  } else if (!MethodsFor(cfg.experiment).count(cfg.method)) {
    flag("method", "got '" + cfg.method + "', valid for " + cfg.experiment + ": " +
                       Join(MethodsFor(cfg.experiment)));
  }
  if (cfg.seeds.empty()) flag("seeds", "missing, need at least one seed");
  if (cfg.output_dir.empty()) flag("output_dir", "missing");

  positive("schedule.sigma_max", cfg.sigma_max);
  at_least("schedule.steps", cfg.steps, cfg.method == "lp" ? 2 : 1);
  if (!(cfg.beta0 > 0.0 && cfg.beta0 < 1.0)) {
    flag("schedule.beta0", "got " + ShortNumber(cfg.beta0) + ", valid range (0, 1)");
  }
  if (!(cfg.beta1 > 0.0 && cfg.beta1 < 1.0)) {
    flag("schedule.beta1", "got " + ShortNumber(cfg.beta1) + ", valid range (0, 1)");
  }
  if (cfg.beta0 > cfg.beta1) {
    flag("schedule.beta0", "beta0 = " + ShortNumber(cfg.beta0) +
                               " exceeds beta1 = " + ShortNumber(cfg.beta1) +
                               ", need beta0 <= beta1");
  }

  at_least("sampler.n_samples", cfg.n_samples, 2);
  positive("sampler.temperature", cfg.temperature);
  if (cfg.start != "prior_mean" && cfg.start != "standard_normal") {
    flag("sampler.start", "got '" + cfg.start + "', valid: prior_mean, standard_normal");
  }
  at_least("sampler.eval_runs", cfg.eval_runs, 0);
  const bool numeric_objective = IsNumericExperiment(cfg) ||
                                 cfg.experiment == "train-avp" ||
                                 (cfg.experiment == "train-alp" && cfg.task != "vehicle");
  if (numeric_objective) {
    const auto names = ObjectiveNames();
    const std::string obj = cfg.EffectiveObjective();
    if (std::find(names.begin(), names.end(), obj) == names.end()) {
      std::set<std::string> valid(names.begin(), names.end());
      flag("sampler.objective", "got '" + obj + "', valid: " + Join(valid));
    } else {
      const int want = cfg.experiment == "numeric1d" ? 1 : 2;
      if (MakeObjective(obj).dim != want) {
        flag("sampler.objective", "'" + obj + "' is not " + std::to_string(want) +
                                      "-dimensional as " + cfg.experiment +
                                      " requires");
      }
    }
  }

  if (!(cfg.elite_frac > 0.0 && cfg.elite_frac <= 1.0)) {
    flag("baseline.elite_frac",
         "got " + ShortNumber(cfg.elite_frac) + ", valid range (0, 1]");
  }
  positive("baseline.init_std", cfg.init_std);
  positive("baseline.min_std", cfg.min_std);
  positive("baseline.mppi_temperature", cfg.mppi_temperature);
  positive("baseline.noise_std", cfg.noise_std);

  if (cfg.course != "s_curve" && cfg.course != "oval") {
    flag("env.course", "got '" + cfg.course + "', valid: s_curve, oval");
  }
  at_least("env.horizon", cfg.horizon, 1);
  at_least("env.episode_len", cfg.episode_len, 1);
  positive("env.dt", cfg.dt);
  non_negative("env.v_ref", cfg.v_ref);
  non_negative("env.w_lat", cfg.w_lat);
  non_negative("env.w_yaw", cfg.w_yaw);
  non_negative("env.w_v", cfg.w_v);
  non_negative("env.w_collision", cfg.w_collision);
  if (!cfg.waypoints.empty() && !fs::exists(cfg.waypoints)) {
    flag("env.waypoints", "file not found: " + cfg.waypoints);
  }

  const bool needs_policy =
      (cfg.method == "alp" || cfg.method == "avp") &&
      (cfg.experiment == "numeric2d" || cfg.experiment == "vehicle");
  if (needs_policy && cfg.policy_path.empty()) {
    flag("policy.path", "required for method " + cfg.method + " in " + cfg.experiment);
  } else if (needs_policy && !fs::exists(cfg.policy_path)) {
    flag("policy.path", "file not found: " + cfg.policy_path);
  }
  if (cfg.task != "vehicle" && cfg.task != "numeric2d") {
    flag("policy.task", "got '" + cfg.task + "', valid: vehicle, numeric2d");
  }
  at_least("policy.t_min", cfg.t_min, cfg.experiment == "train-alp" ? 2 : 1);
  if (cfg.t_max != 0 && cfg.t_max < cfg.t_min) {
    flag("policy.t_max", "got " + std::to_string(cfg.t_max) + ", valid: 0 (auto) or [" +
                             std::to_string(cfg.t_min) + ", inf)");
  }
  {
    const int mode = cfg.init_steps < 0 && cfg.experiment == "train-alp" &&
                             cfg.task == "vehicle"
                         ? cfg.steps
                         : cfg.init_steps;
    if (mode > 0 && (mode < cfg.t_min || mode > cfg.EffectiveTMax())) {
      flag("policy.init_steps",
           "initial mode " + std::to_string(mode) + " outside [" +
               std::to_string(cfg.t_min) + ", " + std::to_string(cfg.EffectiveTMax()) +
               "]; valid: -1 (auto), 0 (uniform) or a T in range");
    } else if (cfg.init_steps < -1) {
      flag("policy.init_steps", "got " + std::to_string(cfg.init_steps) +
                                    ", valid: -1 (auto), 0 (uniform) or a T in range");
    }
  }
  positive("policy.sigma_lo", cfg.sigma_lo);
  if (!(cfg.sigma_hi > cfg.sigma_lo)) {
    flag("policy.sigma_hi", "got " + ShortNumber(cfg.sigma_hi) + ", valid range (" +
                                ShortNumber(cfg.sigma_lo) + ", inf)");
  }

  at_least("train.updates", cfg.updates, 1);
  at_least("train.batch_size", cfg.batch_size, 2);
  non_negative("train.learning_rate", cfg.learning_rate);
  non_negative("train.w_t", cfg.w_t);
  at_least("train.iterations", cfg.iterations, 1);
  positive("train.clip_ratio", cfg.clip_ratio);
  if (!(cfg.gamma > 0.0 && cfg.gamma < 1.0)) {
    flag("train.gamma", "got " + ShortNumber(cfg.gamma) + ", valid range (0, 1)");
  }
  if (!(cfg.gae_lambda >= 0.0 && cfg.gae_lambda <= 1.0)) {
    flag("train.gae_lambda",
         "got " + ShortNumber(cfg.gae_lambda) + ", valid range [0, 1]");
  }
  at_least("train.epochs", cfg.epochs, 1);
  at_least("train.minibatch", cfg.minibatch, 1);
  non_negative("train.ppo_learning_rate", cfg.ppo_learning_rate);
  non_negative("train.value_learning_rate", cfg.value_learning_rate);
  non_negative("train.entropy_coef", cfg.entropy_coef);
  positive("train.reward_scale", cfg.reward_scale);
  non_negative("train.ppo_w_t", cfg.ppo_w_t);
  return d;
}

RunSummary Summarize(std::string experiment, std::string method, std::string env,
                     std::vector<SeedSummary> per_seed, bool has_timing) {
  if (per_seed.empty()) throw ParameterError("Summarize: no seeds");
  RunSummary s;
  s.experiment = std::move(experiment);
  s.method = std::move(method);
  s.env = std::move(env);
  const double n = static_cast<double>(per_seed.size());
  double plan = 0.0;
  for (const auto& p : per_seed) {
    s.seeds.push_back(p.seed);
    s.reward_mean += p.reward;
    s.mean_T += p.mean_T;
    s.mean_sigma += p.mean_sigma;
    plan += p.plan_time_ms;
  }
  s.reward_mean /= n;
  s.mean_T /= n;
  s.mean_sigma /= n;
  if (per_seed.size() > 1) {
    double ss = 0.0;
    for (const auto& p : per_seed) ss += (p.reward - s.reward_mean) * (p.reward - s.reward_mean);
    s.reward_std = std::sqrt(ss / (n - 1.0));
  }
  if (has_timing) s.plan_time_ms_mean = plan / n;
  s.per_seed = std::move(per_seed);
  return s;
}

void WriteSummaryJson(std::ostream& out, const RunSummary& s) {
  json j;
  j["method"] = s.method;
  j["experiment"] = s.experiment;
  j["env"] = s.env;
  j["seeds"] = s.seeds;
  j["reward_mean"] = s.reward_mean;
  j["reward_std"] = s.reward_std;
  j["mean_T"] = s.mean_T;
  j["mean_sigma"] = s.mean_sigma;
  j["plan_time_ms_mean"] =
      s.plan_time_ms_mean ? json(*s.plan_time_ms_mean) : json(nullptr);
  json rows = json::array();
  for (const auto& p : s.per_seed) {
    rows.push_back({{"seed", p.seed},
                    {"reward", p.reward},
                    {"mean_T", p.mean_T},
                    {"mean_sigma", p.mean_sigma},
                    {"plan_time_ms", p.plan_time_ms},
                    {"collisions", p.collisions}});
  }
  j["per_seed"] = rows;
  out << j.dump(2) << "\n";
}

RunSummary ReadSummaryJson(std::istream& in) {
  json j;
  try {
    in >> j;
    RunSummary s;
    s.method = j.at("method").get<std::string>();
    s.experiment = j.value("experiment", "");
    s.env = j.value("env", "");
    s.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    s.reward_mean = j.at("reward_mean").get<double>();
    s.reward_std = j.at("reward_std").get<double>();
    s.mean_T = j.at("mean_T").get<double>();
    s.mean_sigma = j.at("mean_sigma").get<double>();
    if (!j.at("plan_time_ms_mean").is_null()) {
      s.plan_time_ms_mean = j.at("plan_time_ms_mean").get<double>();
    }
    for (const auto& r : j.value("per_seed", json::array())) {
      SeedSummary p;
      p.seed = r.at("seed").get<std::uint64_t>();
      p.reward = r.at("reward").get<double>();
      p.mean_T = r.at("mean_T").get<double>();
      p.mean_sigma = r.at("mean_sigma").get<double>();
      p.plan_time_ms = r.at("plan_time_ms").get<double>();
      p.collisions = r.value("collisions", 0);
      s.per_seed.push_back(p);
    }
    return s;
  } catch (const json::exception& e) {
    throw ParameterError(std::string("malformed summary.json: ") + e.what());
  }
}

SeedSummary SeedSummaryFromArtifacts(const std::string& experiment,
                                     const std::string& seed_dir,
                                     std::uint64_t seed) {
  const fs::path dir(seed_dir);
  if (experiment == "vehicle") {
    auto in = OpenInput(dir / "episode.csv");
    return SummaryFromEpisode(ReadEpisodeCsv(in), seed);
  }
  if (experiment == "train-alp" || experiment == "train-avp") {
    auto in = OpenInput(dir / "learning_curve.csv");
    return SummaryFromCurve(ReadLearningCurveCsv(in), seed);
  }
  auto in = OpenInput(dir / "samples.csv");
  return SummaryFromSamples(ReadCsv(in), seed);
}

std::string MethodDir(const ExperimentConfig& cfg) {
  return (fs::path(cfg.output_dir) / cfg.experiment / cfg.method).string();
}

RunSummary RunExperiment(const ExperimentConfig& cfg, std::ostream* log) {
  const auto diagnostics = ValidateConfig(cfg);
  if (!diagnostics.empty()) {
    std::string msg = "invalid config:";
    for (const auto& diag : diagnostics) msg += "\n  " + diag.key + ": " + diag.message;
    throw ParameterError(msg);
  }
  const fs::path method_dir = MethodDir(cfg);
  fs::create_directories(method_dir);
  WriteText(method_dir / "config.ini", [&](std::ostream& o) { WriteConfigText(o, cfg); });

  const LoadedPolicies policies = LoadPolicies(cfg);
  const bool training = cfg.experiment == "train-alp" || cfg.experiment == "train-avp";
  std::optional<VehicleEnv> env;
  EpisodePlanner planner;
  if (cfg.experiment == "vehicle") {
    env.emplace(BuildEnv(cfg));
    planner = BuildVehiclePlanner(cfg, policies);
  }
  std::optional<TargetDensity> target;
  if (IsNumericExperiment(cfg)) {
    target = MakeObjective(cfg.EffectiveObjective());
    target->temperature = cfg.temperature;
  }

  std::vector<SeedSummary> rows;
  for (const std::uint64_t seed : cfg.seeds) {
    const fs::path dir = method_dir / std::to_string(seed);
    fs::create_directories(dir);
    if (log) *log << cfg.experiment << "/" << cfg.method << " seed " << seed << "\n";
    SeedSummary row;
    if (training) {
      row = RunTrainSeed(cfg, seed, dir, log);
    } else if (env) {
      row = RunVehicleSeed(cfg, *env, planner, seed, dir);
    } else {
      row = RunNumericSeed(cfg, *target, policies, seed, dir);
    }
    if (log) {
      *log << "  reward " << row.reward << " mean_T " << row.mean_T << " mean_sigma "
           << row.mean_sigma << "\n";
    }
    rows.push_back(row);
  }
  RunSummary summary =
      Summarize(cfg.experiment, cfg.method, EnvName(cfg), std::move(rows), !training);
  WriteText(method_dir / "summary.json",
            [&](std::ostream& o) { WriteSummaryJson(o, summary); });
  return summary;
}

std::vector<ComparisonRow> CompareMethods(const std::vector<RunSummary>& runs) {
  if (runs.empty()) throw ParameterError("compare: no runs given");
  std::vector<ComparisonRow> rows;
  for (const auto& r : runs) {
    if (r.seeds != runs.front().seeds) {
      throw ParameterError("compare: seed list of " + r.method +
                           " differs from " + runs.front().method);
    }
    if (r.env != runs.front().env || r.experiment != runs.front().experiment) {
      throw ParameterError("compare: " + r.method + " ran on " + r.experiment + "/" +
                           r.env + ", expected " + runs.front().experiment + "/" +
                           runs.front().env);
    }
    rows.push_back({r.method, static_cast<int>(r.seeds.size()), r.reward_mean,
                    r.reward_std, r.mean_T, r.mean_sigma, r.plan_time_ms_mean});
  }
  return rows;
}

void WriteComparisonCsv(std::ostream& out, const std::vector<ComparisonRow>& rows) {
  CsvWriter csv(out, {"method", "seeds", "reward_mean", "reward_std", "mean_T",
                      "mean_sigma", "plan_time_ms_mean"});
  for (const auto& r : rows) {
    csv << r.method << r.seeds << r.reward_mean << r.reward_std << r.mean_T
        << r.mean_sigma
        << (r.plan_time_ms_mean ? *r.plan_time_ms_mean
                                : std::numeric_limits<double>::quiet_NaN());
    csv.EndRow();
  }
}

std::string FormatComparisonTable(const std::vector<ComparisonRow>& rows) {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%-8s %5s %24s %8s %10s %12s\n", "method", "seeds",
                "reward (mean +/- std)", "mean T", "mean sigma", "plan ms");
  out += buf;
  for (const auto& r : rows) {
    char plan[32] = "-";
    if (r.plan_time_ms_mean) std::snprintf(plan, sizeof(plan), "%.2f", *r.plan_time_ms_mean);
    std::snprintf(buf, sizeof(buf), "%-8s %5d %12.3f +/- %8.3f %8.2f %10.3f %12s\n",
                  r.method.c_str(), r.seeds, r.reward_mean, r.reward_std, r.mean_T,
                  r.mean_sigma, plan);
    out += buf;
  }
  return out;
}

}  // namespace lpmbd
