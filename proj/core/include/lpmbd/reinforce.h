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

#ifndef LPMBD_REINFORCE_H_
#define LPMBD_REINFORCE_H_

#include <cstdint>
#include <istream>
#include <ostream>
#include <vector>

#include "lpmbd/policy.h"
#include "lpmbd/sampler.h"
#include "lpmbd/target.h"

namespace lpmbd {

// r - w_T * T / T_max.
double AugmentedReward(double reward, int steps, double w_t, int t_max);

struct LearningCurveRow {
  int iteration = 0;
  double mean_reward = 0.0;
  double mean_T = 0.0;
  double mean_sigma = 0.0;
  double policy_loss = 0.0;
  double value_loss = 0.0;
};

void WriteLearningCurveCsv(std::ostream& out,
                           const std::vector<LearningCurveRow>& rows);
std::vector<LearningCurveRow> ReadLearningCurveCsv(std::istream& in);

// Episode = one MBD run on a fixed objective with sampled schedule
// parameters; reward = log-density of the best candidate in the final
// denoising batch minus the step penalty.
struct ReinforceConfig {
  int updates = 30;
  int batch_size = 16;
  double learning_rate = 0.05;
  double w_t = 1.0;
  int n_samples = 100;
  ReverseStart start = ReverseStart::kPriorMean;
};

struct ReinforceResult {
  SchedulerPolicy policy;
  std::vector<LearningCurveRow> curve;
};

struct AvpResult {
  AvpPolicy policy;
  std::vector<LearningCurveRow> curve;
};

// The 2D study has no environment state: the policy sees a constant input.
Eigen::VectorXd ConstantObservation(int obs_dim);

ReinforceResult ReinforceTrain(SchedulerPolicy policy, const TargetDensity& objective,
                               const ReinforceConfig& cfg, std::uint64_t seed);
AvpResult AvpTrain(AvpPolicy policy, const TargetDensity& objective,
                   const ReinforceConfig& cfg, std::uint64_t seed);

// Final MBD samples of `runs` seeded runs with the policy's mode parameters.
std::vector<DecisionVector> EvaluateAlp(const SchedulerPolicy& policy,
                                        const TargetDensity& objective, int runs,
                                        int n_samples, std::uint64_t seed,
                                        ReverseStart start = ReverseStart::kPriorMean);
std::vector<DecisionVector> EvaluateAvp(const AvpPolicy& policy,
                                        const TargetDensity& objective, int runs,
                                        int n_samples, std::uint64_t seed,
                                        ReverseStart start = ReverseStart::kPriorMean);

// sqrt of the mean per-coordinate variance of a point cloud.
double SpatialStd(const std::vector<DecisionVector>& points);
// Fraction of points satisfying every constraint of `target`.
double FeasibleFraction(const TargetDensity& target,
                        const std::vector<DecisionVector>& points);

}  // namespace lpmbd

#endif  // LPMBD_REINFORCE_H_
