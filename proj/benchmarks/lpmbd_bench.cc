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

#include <benchmark/benchmark.h>

#include "lpmbd/network.h"
#include "lpmbd/sampler.h"
#include "lpmbd/schedules.h"
#include "lpmbd/target.h"
#include "lpmbd/vehicle_env.h"

namespace lpmbd {
namespace {

void BM_DenoiseStepQuadratic(benchmark::State& state) {
  const TargetDensity target = MakeGaussian1d(2.0, 0.5);
  const Schedule schedule = LpSchedule::Build(1.8, 17);
  SamplerConfig cfg;
  cfg.n_samples = static_cast<int>(state.range(0));
  Rng rng = StreamFor(1, 0);
  const DiffusionState start{DecisionVector::Zero(1), 16, ScheduleKind::kLp};
  for (auto _ : state) {
    benchmark::DoNotOptimize(DenoiseStep(start, schedule, target, cfg, rng, nullptr));
  }
}
BENCHMARK(BM_DenoiseStepQuadratic)->Arg(100)->Arg(1000);

void BM_TrackingTargetCost(benchmark::State& state) {
  VehicleEnv env(DefaultEnvConfig(PathKind::kSCurve));
  env.Reset();
  const TargetDensity target = MakeTrackingTarget(env);
  Rng rng = StreamFor(2, 0);
  const DecisionVector y = StandardNormal(target.dim, rng);
  for (auto _ : state) {
    const StateTrajectory states = target.rollout ? target.rollout(y) : StateTrajectory();
    benchmark::DoNotOptimize(target.cost(y, states));
  }
}
BENCHMARK(BM_TrackingTargetCost);

void BM_LpMbdVehiclePlan(benchmark::State& state) {
  VehicleEnv env(DefaultEnvConfig(PathKind::kSCurve));
  env.Reset();
  const TargetDensity target = MakeTrackingTarget(env);
  const Schedule schedule = LpSchedule::Build(1.8, static_cast<int>(state.range(0)));
  SamplerConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(RunMbd(target, schedule, cfg).y);
    ++cfg.seed;
  }
}
BENCHMARK(BM_LpMbdVehiclePlan)->Arg(2)->Arg(17)->Unit(benchmark::kMillisecond);

void BM_NetForward(benchmark::State& state) {
  Rng rng = StreamFor(3, 0);
  const FeedforwardNet net({5, 64, 64, 30}, rng);
  const Eigen::VectorXd x = StandardNormal(5, rng);
  for (auto _ : state) benchmark::DoNotOptimize(net.Forward(x));
}
BENCHMARK(BM_NetForward);

}  // namespace
}  // namespace lpmbd

BENCHMARK_MAIN();
