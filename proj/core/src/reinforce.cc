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

#include "lpmbd/reinforce.h"

#include <cmath>

#include "lpmbd/csv.h"
#include "lpmbd/network.h"
#include "lpmbd/schedules.h"

namespace lpmbd {
namespace {

struct Episode {
  double reward = 0.0;
  int steps = 0;
  double sigma = 0.0;  // max proposal std of the schedule used
  SchedulerPolicy::LogProbGrad grad;
};

double EpisodeReward(const TargetDensity& objective, const Schedule& schedule,
                     const ReinforceConfig& cfg, std::uint64_t seed) {
  SamplerConfig sampler;
  sampler.n_samples = cfg.n_samples;
  sampler.start = cfg.start;
  sampler.seed = seed;
  return LogWeight(objective, RunMbd(objective, schedule, sampler).best_sample);
}

// Mean-baseline REINFORCE ascent shared by both policy families.
template <typename Policy, typename RunEpisode>
std::vector<LearningCurveRow> TrainLoop(Policy& policy, const ReinforceConfig& cfg,
                                        RunEpisode&& run_episode) {
  if (cfg.batch_size < 1) throw ParameterError("batch_size must be >= 1");
  Adam adam(policy.num_params(), cfg.learning_rate);
  std::vector<LearningCurveRow> curve;
  for (int u = 0; u < cfg.updates; ++u) {
    std::vector<Episode> batch;
    batch.reserve(cfg.batch_size);
    for (int b = 0; b < cfg.batch_size; ++b) {
      batch.push_back(run_episode(u * cfg.batch_size + b));
    }
    LearningCurveRow row;
    row.iteration = u;
    for (const auto& e : batch) {
      row.mean_reward += e.reward;
      row.mean_T += e.steps;
      row.mean_sigma += e.sigma;
    }
    row.mean_reward /= cfg.batch_size;
    row.mean_T /= cfg.batch_size;
    row.mean_sigma /= cfg.batch_size;

    Eigen::VectorXd grad = Eigen::VectorXd::Zero(policy.num_params());
    for (const auto& e : batch) {
      const double adv = e.reward - row.mean_reward;
      grad += adv * e.grad.grad;
      row.policy_loss -= adv * e.grad.logprob;
      row.value_loss += adv * adv;
    }
    grad /= cfg.batch_size;
    row.policy_loss /= cfg.batch_size;
    row.value_loss /= cfg.batch_size;
    policy.set_params(adam.Step(policy.params(), grad, /*maximize=*/true));
    curve.push_back(row);
  }
  return curve;
}

}  // namespace

double AugmentedReward(double reward, int steps, double w_t, int t_max) {
  return reward - w_t * static_cast<double>(steps) / static_cast<double>(t_max);
}

void WriteLearningCurveCsv(std::ostream& out,
                           const std::vector<LearningCurveRow>& rows) {
  CsvWriter csv(out, {"iteration", "mean_reward", "mean_T", "mean_sigma",
                      "policy_loss", "value_loss"});
  for (const auto& r : rows) {
    csv << r.iteration << r.mean_reward << r.mean_T << r.mean_sigma
        << r.policy_loss << r.value_loss;
    csv.EndRow();
  }
}

std::vector<LearningCurveRow> ReadLearningCurveCsv(std::istream& in) {
  const CsvTable t = ReadCsv(in);
  std::vector<LearningCurveRow> rows(t.rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    rows[k] = {static_cast<int>(t.Number(k, "iteration")), t.Number(k, "mean_reward"),
               t.Number(k, "mean_T"),     t.Number(k, "mean_sigma"),
               t.Number(k, "policy_loss"), t.Number(k, "value_loss")};
  }
  return rows;
}

Eigen::VectorXd ConstantObservation(int obs_dim) {
  return Eigen::VectorXd::Ones(obs_dim);
}

ReinforceResult ReinforceTrain(SchedulerPolicy policy, const TargetDensity& objective,
                               const ReinforceConfig& cfg, std::uint64_t seed) {
  const Eigen::VectorXd obs = ConstantObservation(policy.options().obs_dim);
  const int t_max = policy.options().t_max;
  auto run_episode = [&](int index) {
    Rng rng = StreamFor(seed, 2 * static_cast<std::uint64_t>(index));
    const SchedulerAction a = policy.Sample(obs, rng);
    Episode e;
    e.steps = a.steps;
    e.sigma = a.sigma_max;
    const double r = EpisodeReward(objective, LpSchedule::Build(a.sigma_max, a.steps),
                                   cfg,
                                   MixSeed(seed ^ (2 * static_cast<std::uint64_t>(index) + 1)));
    e.reward = AugmentedReward(r, a.steps, cfg.w_t, t_max);
    e.grad = policy.LogProbGradient(obs, a.steps, a.raw[0]);
    return e;
  };
  ReinforceResult result;
  result.curve = TrainLoop(policy, cfg, run_episode);
  result.policy = std::move(policy);
  return result;
}

AvpResult AvpTrain(AvpPolicy policy, const TargetDensity& objective,
                   const ReinforceConfig& cfg, std::uint64_t seed) {
  const Eigen::VectorXd obs = ConstantObservation(policy.options().obs_dim);
  const int t_max = policy.options().t_max;
  auto run_episode = [&](int index) {
    Rng rng = StreamFor(seed, 2 * static_cast<std::uint64_t>(index));
    const AvpAction a = policy.Sample(obs, rng);
    const VpSchedule schedule = VpSchedule::Build(a.beta0, a.beta1, a.steps);
    Episode e;
    e.steps = a.steps;
    e.sigma = schedule.MaxProposalStd();
    const double r = EpisodeReward(objective, schedule, cfg,
                                   MixSeed(seed ^ (2 * static_cast<std::uint64_t>(index) + 1)));
    e.reward = AugmentedReward(r, a.steps, cfg.w_t, t_max);
    e.grad = policy.LogProbGradient(obs, a.steps, a.raw);
    return e;
  };
  AvpResult result;
  result.curve = TrainLoop(policy, cfg, run_episode);
  result.policy = std::move(policy);
  return result;
}

namespace {

std::vector<DecisionVector> EvaluateSchedule(const Schedule& schedule,
                                             const TargetDensity& objective,
                                             int runs, int n_samples,
                                             std::uint64_t seed, ReverseStart start) {
  std::vector<DecisionVector> out;
  out.reserve(runs);
  for (int r = 0; r < runs; ++r) {
    SamplerConfig sampler;
    sampler.n_samples = n_samples;
    sampler.start = start;
    sampler.seed = MixSeed(seed + static_cast<std::uint64_t>(r));
    out.push_back(RunMbd(objective, schedule, sampler).y);
  }
  return out;
}

}  // namespace

std::vector<DecisionVector> EvaluateAlp(const SchedulerPolicy& policy,
                                        const TargetDensity& objective, int runs,
                                        int n_samples, std::uint64_t seed,
                                        ReverseStart start) {
  const SchedulerAction a = policy.Mode(ConstantObservation(policy.options().obs_dim));
  return EvaluateSchedule(LpSchedule::Build(a.sigma_max, a.steps), objective, runs,
                          n_samples, seed, start);
}

std::vector<DecisionVector> EvaluateAvp(const AvpPolicy& policy,
                                        const TargetDensity& objective, int runs,
                                        int n_samples, std::uint64_t seed,
                                        ReverseStart start) {
  const AvpAction a = policy.Mode(ConstantObservation(policy.options().obs_dim));
  return EvaluateSchedule(VpSchedule::Build(a.beta0, a.beta1, a.steps), objective,
                          runs, n_samples, seed, start);
}

double SpatialStd(const std::vector<DecisionVector>& points) {
  if (points.size() < 2) return 0.0;
  const Eigen::Index d = points.front().size();
  DecisionVector mean = DecisionVector::Zero(d);
  for (const auto& p : points) mean += p;
  mean /= static_cast<double>(points.size());
  double var = 0.0;
  for (const auto& p : points) var += (p - mean).squaredNorm();
  var /= static_cast<double>(points.size()) * static_cast<double>(d);
  return std::sqrt(var);
}

double FeasibleFraction(const TargetDensity& target,
                        const std::vector<DecisionVector>& points) {
  if (points.empty()) return 0.0;
  int feasible = 0;
  for (const auto& p : points) feasible += Score(target, p).feasible ? 1 : 0;
  return static_cast<double>(feasible) / static_cast<double>(points.size());
}

}  // namespace lpmbd
