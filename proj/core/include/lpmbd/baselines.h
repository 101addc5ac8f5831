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

#ifndef LPMBD_BASELINES_H_
#define LPMBD_BASELINES_H_

#include <cstdint>
#include <vector>

#include "lpmbd/sampler.h"
#include "lpmbd/target.h"

namespace lpmbd {

struct CemConfig {
  int iterations = 5;
  int n_samples = 100;
  double elite_frac = 0.1;
  double init_std = 1.0;
  double min_std = 0.01;
  std::uint64_t seed = 0;
  bool record_trace = false;

  int EliteCount() const;
};

struct MppiConfig {
  int iterations = 5;
  int n_samples = 100;
  double temperature = 0.1;
  double noise_std = 1.0;
  std::uint64_t seed = 0;
  bool record_trace = false;
};

// Same budget as an MBD run: iterations = diffusion steps, same batch size.
CemConfig ParityCem(int diffusion_steps, int n_samples);
MppiConfig ParityMppi(int diffusion_steps, int n_samples);

struct BaselineResult {
  DecisionVector y;
  // Trace uses the sampler CSV schema: step counts iterations down to 0,
  // noise_level is the mean sampling std of the iteration.
  std::vector<TraceRow> trace;
  // CEM only: mean penalized cost of the elite set after each iteration.
  std::vector<double> elite_mean_cost;
};

// J + lambda * rho * violation; the ranking key for CEM elites.
double PenalizedCost(const TargetDensity& target, const CandidateScore& score);

// Diagonal-Gaussian cross-entropy method starting from N(0, init_std^2 I).
// Elites of the previous iteration stay in the ranking pool, so the elite set
// never gets worse on deterministic objectives.
BaselineResult RunCem(const TargetDensity& target, const CemConfig& cfg);

// Softmax weights the MPPI update uses for `candidates`: the target's own
// batch weighting evaluated at the MPPI temperature.
Eigen::VectorXd MppiWeights(const TargetDensity& target, const MppiConfig& cfg,
                            const std::vector<DecisionVector>& candidates);

// Perturb the mean, reweight, replace the mean by the weighted average.
BaselineResult RunMppi(const TargetDensity& target, const MppiConfig& cfg);

}  // namespace lpmbd

#endif  // LPMBD_BASELINES_H_
