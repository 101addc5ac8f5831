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

#ifndef LPMBD_PPO_H_
#define LPMBD_PPO_H_

#include <cstdint>
#include <functional>
#include <vector>

#include "lpmbd/network.h"
#include "lpmbd/policy.h"
#include "lpmbd/reinforce.h"
#include "lpmbd/sampler.h"
#include "lpmbd/vehicle_env.h"

namespace lpmbd {

struct PpoConfig {
  double clip_ratio = 0.2;
  double gae_lambda = 0.95;
  double gamma = 0.99;
  int epochs = 10;
  int minibatch = 64;
  double learning_rate = 3e-4;
  double value_learning_rate = 1e-3;
  double entropy_coef = 0.0;
  // Step penalty w_T of the augmented reward.
  double w_t = 0.2;
  // Rewards are multiplied by this before advantage/value estimation.
  double reward_scale = 0.1;
  int n_samples = 100;
  ReverseStart start = ReverseStart::kPriorMean;
  double temperature = 0.1;
};

// One environment step of Algorithm 1's buffer: (s, a, u, r~, s').
struct Transition {
  Eigen::VectorXd s;
  int steps = 0;
  double sigma_max = 0.0;
  double raw = 0.0;
  double logprob = 0.0;
  Control u;
  double reward_aug = 0.0;
  Eigen::VectorXd s_next;
  bool done = false;
  double value_est = 0.0;
  int policy_version = 0;
};

// On-policy rollout buffer, cleared after every update.
class RolloutBuffer {
 public:
  void Add(Transition t) { data_.push_back(std::move(t)); }
  void Clear() { data_.clear(); }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }
  const std::vector<Transition>& data() const { return data_; }
  // Throws std::logic_error if any transition was produced by a different
  // policy version.
  void RequireVersion(int version) const;

 private:
  std::vector<Transition> data_;
};

// Generalized advantage estimation. `terminal[t]` cuts the bootstrap after
// step t; the value after the last step is `bootstrap`.
std::vector<double> ComputeGae(const std::vector<double>& rewards,
                               const std::vector<double>& values,
                               const std::vector<bool>& terminal,
                               double bootstrap, double gamma, double lambda);

// min(ratio * A, clip(ratio, 1 - eps, 1 + eps) * A).
double ClippedSurrogate(double ratio, double advantage, double clip);
// True when the unclipped branch is the active one (gradient flows).
bool SurrogateGradientActive(double ratio, double advantage, double clip);

class PpoTrainer {
 public:
  PpoTrainer(SchedulerPolicy policy, FeedforwardNet value, PpoConfig cfg,
             std::uint64_t seed);

  // Collects one episode in `env` (Algorithm 1 inner loop) and performs the
  // PPO update; returns the learning-curve row of the iteration.
  LearningCurveRow Iterate(const VehicleEnv& env);

  // Rollout half of an iteration, exposed for tests.
  void Collect(const VehicleEnv& env, int max_steps = -1);
  // Update half: PPO epochs over the buffer, then clear it.
  LearningCurveRow Update();

  const SchedulerPolicy& policy() const { return policy_; }
  const FeedforwardNet& value() const { return value_; }
  const RolloutBuffer& buffer() const { return buffer_; }
  int version() const { return version_; }
  int iteration() const { return iteration_; }

 private:
  SchedulerPolicy policy_;
  FeedforwardNet value_;
  PpoConfig cfg_;
  std::uint64_t seed_;
  Adam policy_opt_;
  Adam value_opt_;
  RolloutBuffer buffer_;
  double bootstrap_ = 0.0;
  double episode_reward_ = 0.0;
  int version_ = 0;
  int iteration_ = 0;
};

struct PpoResult {
  SchedulerPolicy policy;
  FeedforwardNet value;
  std::vector<LearningCurveRow> curve;
};

PpoResult PpoTrain(SchedulerPolicy policy, FeedforwardNet value,
                   const EnvConfig& env_cfg, const PpoConfig& cfg, int iterations,
                   std::uint64_t seed,
                   const std::function<void(const LearningCurveRow&)>& progress = nullptr);

// Value network matching the policy trunk: obs -> hidden -> 1.
FeedforwardNet MakeValueNet(const SchedulerPolicy::Options& options, Rng& rng);

}  // namespace lpmbd

#endif  // LPMBD_PPO_H_
