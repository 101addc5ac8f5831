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

#ifndef LPMBD_PLANNERS_H_
#define LPMBD_PLANNERS_H_

#include <functional>
#include <string>

#include "lpmbd/baselines.h"
#include "lpmbd/policy.h"
#include "lpmbd/sampler.h"
#include "lpmbd/vehicle_env.h"

namespace lpmbd {

// Receding-horizon planners for the vehicle task. Each builds the tracking
// target from the current environment, optimizes the control sequence and
// returns its first control. The step seed replaces `sampler.seed`.

// `temperature` is the tracking target's lambda.
EpisodePlanner MakeScheduledPlanner(Schedule schedule, SamplerConfig sampler,
                                    double temperature = 0.1);
EpisodePlanner MakeCemPlanner(CemConfig cfg, double temperature = 0.1);
EpisodePlanner MakeMppiPlanner(MppiConfig cfg, double temperature = 0.1);

// ALP-MBD: the policy picks (T, sigma_max) from the normalized observation,
// then LP-MBD plans with them. `deterministic` uses the policy mode. The
// optional `on_action` hook sees every sampled action (used by PPO).
EpisodePlanner MakeAlpPlanner(
    const SchedulerPolicy& policy, SamplerConfig sampler, bool deterministic,
    double temperature = 0.1,
    std::function<void(const Eigen::VectorXd& obs, const SchedulerAction&)>
        on_action = nullptr);

}  // namespace lpmbd

#endif  // LPMBD_PLANNERS_H_
