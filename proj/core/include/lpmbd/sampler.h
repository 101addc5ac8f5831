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

#ifndef LPMBD_SAMPLER_H_
#define LPMBD_SAMPLER_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "lpmbd/common.h"
#include "lpmbd/schedules.h"
#include "lpmbd/target.h"

namespace lpmbd {

// Where the reverse process starts: the prior mean (Y = 0, the proposal
// cloud of the first step is then N(0, sigma_max^2 I) for LP) or a draw from
// N(0, I).
enum class ReverseStart { kPriorMean, kStandardNormal };

struct SamplerConfig {
  int n_samples = 100;
  ReverseStart start = ReverseStart::kPriorMean;
  std::uint64_t seed = 0;
  bool record_trace = false;
};

// Y^(i) at step i of a schedule.
struct DiffusionState {
  DecisionVector y;
  int step = 0;
  ScheduleKind kind = ScheduleKind::kLp;
};

// One row per diffusion step. Batch columns (ess, best_cost) are NaN on the
// final row, where no proposals are drawn.
struct TraceRow {
  int step = 0;
  double noise_level = 0.0;  // t_i (LP) or alpha_bar_i (VP)
  double proposal_std = 0.0;
  double ess = 0.0;
  double best_cost = 0.0;
  double y_mean = 0.0;
  double y_std = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;
  double y_log_weight = 0.0;
};

void WriteTraceCsv(std::ostream& out, const std::vector<TraceRow>& rows);
std::vector<TraceRow> ReadTraceCsv(std::istream& in);

struct MbdResult {
  DecisionVector y;
  // Filled when SamplerConfig::record_trace is set; ordered from the noisiest
  // step down to step 0. `states[k]` is the Y belonging to `trace[k]`.
  std::vector<TraceRow> trace;
  std::vector<DecisionVector> states;
  // Highest-weight candidate of the final denoising batch.
  DecisionVector best_sample;
};

// i.i.d. draws from N(kernel.mean_scale * y, kernel.proposal_std^2 I).
std::vector<DecisionVector> SampleProposals(const DecisionVector& y,
                                            const StepKernel& kernel, int n,
                                            Rng& rng);

// Proposals for moving from state.step to state.step - 1. The state must not
// sit at step 0.
std::vector<DecisionVector> SampleProposals(const DiffusionState& state,
                                            const Schedule& schedule,
                                            const SamplerConfig& cfg, Rng& rng);

// score_y * y + score_bar * ybar.
DecisionVector ScoreFromWeightedMean(const DecisionVector& y,
                                     const StepKernel& kernel,
                                     const DecisionVector& ybar);

// Monte-Carlo estimate of grad log p_i(Y^(i)) from importance-weighted
// clean proposals.
DecisionVector McScore(const DiffusionState& state, const Schedule& schedule,
                       const TargetDensity& target,
                       const std::vector<DecisionVector>& proposals);

// One backward step: Y^(i-1) = prev_scale * Ybar. `row`, when given,
// receives the batch statistics of this step; `best` the top candidate.
DiffusionState DenoiseStep(const DiffusionState& state,
                           const Schedule& schedule,
                           const TargetDensity& target,
                           const SamplerConfig& cfg, Rng& rng,
                           TraceRow* row = nullptr,
                           DecisionVector* best = nullptr);

// Full reverse process from Y^(last) (see ReverseStart) down to Y^(0). With a
// warm start, the warm start is pushed through the forward kernel of the last
// step first. Step i draws from StreamFor(cfg.seed, i).
MbdResult RunMbd(const TargetDensity& target, const Schedule& schedule,
                 const SamplerConfig& cfg,
                 const std::optional<DecisionVector>& warm_start = std::nullopt);

struct PlannerConfig {
  Schedule schedule = LpSchedule::Build(1.8, 17);
  SamplerConfig sampler;
  int control_dim = 1;
  bool warm_start = false;
};

// First control of an optimized sequence.
Eigen::VectorXd FirstControl(const DecisionVector& y, int control_dim);

// Keeps the previous solution for the optional shift-and-hold warm start.
class RecedingHorizonPlanner {
 public:
  explicit RecedingHorizonPlanner(PlannerConfig cfg) : cfg_(std::move(cfg)) {}

  Eigen::VectorXd Plan(const TargetDensity& target, std::uint64_t seed);
  Eigen::VectorXd Plan(const TargetDensity& target, const Schedule& schedule,
                       std::uint64_t seed);

  const PlannerConfig& config() const { return cfg_; }
  const DecisionVector& last_solution() const { return last_; }
  void Reset() { last_ = DecisionVector(); }

 private:
  PlannerConfig cfg_;
  DecisionVector last_;
};

// Builds a target from the environment state, runs a fresh diffusion and
// returns the first control.
template <typename EnvState, typename TargetBuilder>
Eigen::VectorXd PlanRecedingHorizon(const EnvState& env_state,
                                    TargetBuilder&& build_target,
                                    const PlannerConfig& cfg) {
  const TargetDensity target = build_target(env_state);
  return FirstControl(RunMbd(target, cfg.schedule, cfg.sampler).y,
                      cfg.control_dim);
}

}  // namespace lpmbd

#endif  // LPMBD_SAMPLER_H_
