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

#include "lpmbd/planners.h"

#include <cmath>

namespace lpmbd {
namespace {

Control FirstVehicleControl(const VehicleEnv& env, const DecisionVector& y) {
  return env.config().FromDecision(y[0], y[1]);
}

double ScheduleSigma(const Schedule& schedule) { return MaxProposalStd(schedule); }

}  // namespace

EpisodePlanner MakeScheduledPlanner(Schedule schedule, SamplerConfig sampler,
                                    double temperature) {
  return [schedule = std::move(schedule), sampler, temperature](
             const VehicleEnv& env, std::uint64_t seed) mutable {
    sampler.seed = seed;
    const DecisionVector y = RunMbd(MakeTrackingTarget(env, temperature), schedule, sampler).y;
    return PlanDecision{FirstVehicleControl(env, y), StepsOf(schedule),
                        ScheduleSigma(schedule)};
  };
}

EpisodePlanner MakeCemPlanner(CemConfig cfg, double temperature) {
  return [cfg, temperature](const VehicleEnv& env, std::uint64_t seed) {
    CemConfig c = cfg;
    c.seed = seed;
    c.record_trace = false;
    const DecisionVector y = RunCem(MakeTrackingTarget(env, temperature), c).y;
    return PlanDecision{FirstVehicleControl(env, y), c.iterations, c.init_std};
  };
}

EpisodePlanner MakeMppiPlanner(MppiConfig cfg, double temperature) {
  return [cfg, temperature](const VehicleEnv& env, std::uint64_t seed) {
    MppiConfig c = cfg;
    c.seed = seed;
    c.record_trace = false;
    const DecisionVector y = RunMppi(MakeTrackingTarget(env, temperature), c).y;
    return PlanDecision{FirstVehicleControl(env, y), c.iterations, c.noise_std};
  };
}

EpisodePlanner MakeAlpPlanner(
    const SchedulerPolicy& policy, SamplerConfig sampler, bool deterministic,
    double temperature, std::function<void(const Eigen::VectorXd&, const SchedulerAction&)> on_action) {
  return [&policy, sampler, deterministic, temperature, on_action = std::move(on_action)](
             const VehicleEnv& env, std::uint64_t seed) mutable {
    const Eigen::VectorXd obs = env.observation().Normalized();
    Rng rng = StreamFor(seed, 0x5eed);
    const SchedulerAction a =
        deterministic ? policy.Mode(obs) : policy.Sample(obs, rng);
    if (on_action) on_action(obs, a);
    sampler.seed = seed;
    const DecisionVector y =
        RunMbd(MakeTrackingTarget(env, temperature), LpSchedule::Build(a.sigma_max, a.steps),
               sampler)
            .y;
    return PlanDecision{FirstVehicleControl(env, y), a.steps, a.sigma_max};
  };
}

}  // namespace lpmbd
