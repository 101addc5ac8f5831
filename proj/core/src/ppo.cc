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

#include "lpmbd/ppo.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "lpmbd/planners.h"

namespace lpmbd {

void RolloutBuffer::RequireVersion(int version) const {
  for (const auto& t : data_) {
    if (t.policy_version != version) {
      throw std::logic_error("rollout buffer holds off-policy transitions");
    }
  }
}

std::vector<double> ComputeGae(const std::vector<double>& rewards,
                               const std::vector<double>& values,
                               const std::vector<bool>& terminal,
                               double bootstrap, double gamma, double lambda) {
  const std::size_t n = rewards.size();
  if (values.size() != n || terminal.size() != n) {
    throw ParameterError("ComputeGae: length mismatch");
  }
  std::vector<double> adv(n, 0.0);
  double running = 0.0;
  double next_value = bootstrap;
  for (std::size_t k = n; k-- > 0;) {
    const double keep = terminal[k] ? 0.0 : 1.0;
    const double delta = rewards[k] + gamma * keep * next_value - values[k];
    running = delta + gamma * lambda * keep * running;
    adv[k] = running;
    next_value = values[k];
  }
  return adv;
}

double ClippedSurrogate(double ratio, double advantage, double clip) {
  const double clipped = std::clamp(ratio, 1.0 - clip, 1.0 + clip);
  return std::min(ratio * advantage, clipped * advantage);
}

bool SurrogateGradientActive(double ratio, double advantage, double clip) {
  if (advantage >= 0.0) return ratio < 1.0 + clip;
  return ratio > 1.0 - clip;
}

FeedforwardNet MakeValueNet(const SchedulerPolicy::Options& options, Rng& rng) {
  std::vector<int> sizes{options.obs_dim};
  sizes.insert(sizes.end(), options.hidden.begin(), options.hidden.end());
  sizes.push_back(1);
  return FeedforwardNet(sizes, rng);
}

PpoTrainer::PpoTrainer(SchedulerPolicy policy, FeedforwardNet value, PpoConfig cfg,
                       std::uint64_t seed)
    : policy_(std::move(policy)),
      value_(std::move(value)),
      cfg_(cfg),
      seed_(seed),
      policy_opt_(policy_.num_params(), cfg.learning_rate),
      value_opt_(value_.num_params(), cfg.value_learning_rate) {
  if (cfg.clip_ratio <= 0.0 || cfg.epochs < 1 || cfg.minibatch < 1 ||
      cfg.gamma < 0.0 || cfg.gamma > 1.0 || cfg.gae_lambda < 0.0 ||
      cfg.gae_lambda > 1.0 || cfg.n_samples < 1) {
    throw ParameterError("invalid PPO configuration");
  }
  if (value_.input_dim() != policy_.options().obs_dim || value_.output_dim() != 1) {
    throw ParameterError("value network shape does not match the policy");
  }
}

void PpoTrainer::Collect(const VehicleEnv& env_template, int max_steps) {
  VehicleEnv env = env_template;
  env.Reset();
  const std::uint64_t episode_seed = StreamFor(seed_, iteration_)();
  const int t_max = policy_.options().t_max;
  const int limit = max_steps < 0 ? env.config().episode_len : max_steps;

  Eigen::VectorXd obs;
  SchedulerAction action;
  SamplerConfig sampler;
  sampler.n_samples = cfg_.n_samples;
  sampler.start = cfg_.start;
  const EpisodePlanner planner = MakeAlpPlanner(
      policy_, sampler, /*deterministic=*/false, cfg_.temperature,
      [&](const Eigen::VectorXd& o, const SchedulerAction& a) {
        obs = o;
        action = a;
      });

  episode_reward_ = 0.0;
  for (int k = 0; k < limit && !env.done(); ++k) {
    const PlanDecision decision = planner(env, EpisodeStepSeed(episode_seed, k));
    const Control u = env.config().Clamp(decision.u);
    const auto step = env.Step(u);
    episode_reward_ += step.reward;

    Transition t;
    t.s = obs;
    t.steps = action.steps;
    t.sigma_max = action.sigma_max;
    t.raw = action.raw[0];
    t.logprob = action.logprob;
    t.u = u;
    t.reward_aug = AugmentedReward(step.reward, action.steps, cfg_.w_t, t_max);
    t.s_next = env.observation().Normalized();
    t.done = env.done() || k + 1 == limit;
    t.value_est = value_.Forward(t.s)[0];
    t.policy_version = version_;
    buffer_.Add(std::move(t));
  }
  // Episodes only end by the time limit, so the tail is bootstrapped.
  bootstrap_ = buffer_.empty() ? 0.0 : value_.Forward(buffer_.data().back().s_next)[0];
}

LearningCurveRow PpoTrainer::Update() {
  buffer_.RequireVersion(version_);
  const auto& data = buffer_.data();
  const std::size_t n = data.size();
  if (n == 0) throw std::logic_error("PPO update on an empty buffer");

  std::vector<double> rewards(n), values(n);
  std::vector<bool> terminal(n, false);
  for (std::size_t k = 0; k < n; ++k) {
    rewards[k] = cfg_.reward_scale * data[k].reward_aug;
    values[k] = data[k].value_est;
  }
  std::vector<double> adv =
      ComputeGae(rewards, values, terminal, bootstrap_, cfg_.gamma, cfg_.gae_lambda);
  std::vector<double> returns(n);
  for (std::size_t k = 0; k < n; ++k) returns[k] = adv[k] + values[k];

  const double mean = std::accumulate(adv.begin(), adv.end(), 0.0) / n;
  double var = 0.0;
  for (double a : adv) var += (a - mean) * (a - mean);
  const double sd = std::sqrt(var / n) + 1e-8;
  for (double& a : adv) a = (a - mean) / sd;

  Rng rng = StreamFor(seed_ ^ 0x9e3779b97f4a7c15ULL, iteration_);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  double policy_loss = 0.0, value_loss = 0.0;
  int batches = 0;
  for (int epoch = 0; epoch < cfg_.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < n; start += cfg_.minibatch) {
      const std::size_t stop = std::min(n, start + cfg_.minibatch);
      const double m = static_cast<double>(stop - start);
      Eigen::VectorXd pgrad = Eigen::VectorXd::Zero(policy_.num_params());
      Eigen::VectorXd vgrad = Eigen::VectorXd::Zero(value_.num_params());
      double surrogate = 0.0, vloss = 0.0;
      for (std::size_t j = start; j < stop; ++j) {
        const std::size_t k = order[j];
        const Transition& t = data[k];
        const double logprob = policy_.LogProb(policy_.Heads(t.s), t.steps, t.raw);
        const double ratio = std::exp(logprob - t.logprob);
        surrogate += ClippedSurrogate(ratio, adv[k], cfg_.clip_ratio);
        const double coef =
            SurrogateGradientActive(ratio, adv[k], cfg_.clip_ratio) ? ratio * adv[k]
                                                                     : 0.0;
        pgrad += policy_.LogProbGradient(t.s, t.steps, t.raw, coef,
                                         cfg_.entropy_coef)
                     .grad;

        FeedforwardNet::Cache cache;
        const double v = value_.Forward(t.s, cache)[0];
        const double err = v - returns[k];
        vloss += err * err;
        vgrad += value_.Backward(cache, Eigen::VectorXd::Constant(1, 2.0 * err)).params;
      }
      policy_.set_params(policy_opt_.Step(policy_.params(), pgrad / m, true));
      value_.set_params(value_opt_.Step(value_.params(), vgrad / m, false));
      policy_loss += -surrogate / m;
      value_loss += vloss / m;
      ++batches;
    }
  }

  LearningCurveRow row;
  row.iteration = iteration_;
  row.mean_reward = episode_reward_;
  double sum_t = 0.0, sum_sigma = 0.0;
  for (const auto& t : data) {
    sum_t += t.steps;
    sum_sigma += t.sigma_max;
  }
  row.mean_T = sum_t / n;
  row.mean_sigma = sum_sigma / n;
  row.policy_loss = policy_loss / batches;
  row.value_loss = value_loss / batches;

  buffer_.Clear();
  ++version_;
  ++iteration_;
  return row;
}

LearningCurveRow PpoTrainer::Iterate(const VehicleEnv& env) {
  Collect(env);
  return Update();
}

PpoResult PpoTrain(SchedulerPolicy policy, FeedforwardNet value,
                   const EnvConfig& env_cfg, const PpoConfig& cfg, int iterations,
                   std::uint64_t seed,
                   const std::function<void(const LearningCurveRow&)>& progress) {
  if (iterations < 1) throw ParameterError("PPO needs at least one iteration");
  PpoTrainer trainer(std::move(policy), std::move(value), cfg, seed);
  const VehicleEnv env(env_cfg);
  PpoResult result;
  for (int it = 0; it < iterations; ++it) {
    result.curve.push_back(trainer.Iterate(env));
    if (progress) progress(result.curve.back());
  }
  result.policy = trainer.policy();
  result.value = trainer.value();
  return result;
}

}  // namespace lpmbd
