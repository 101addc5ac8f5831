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

#ifndef LPMBD_SCHEDULES_H_
#define LPMBD_SCHEDULES_H_

#include <string>
#include <variant>
#include <vector>

namespace lpmbd {

enum class ScheduleKind { kVp, kLp };

const char* ToString(ScheduleKind kind);

// Forward coefficients Y^(i) = c0 * Y^(0) + c1 * eps.
struct ForwardCoefficients {
  double c0;
  double c1;
};

// Linear-beta variance-preserving schedule. Step i in [0, steps) carries
// alpha_bar_i = prod_{k<=i} (1 - beta_k); step 0 is the (nearly) clean end.
class VpSchedule {
 public:
  // Requires 0 < beta0 <= beta1 < 1 and steps >= 1. Throws ParameterError.
  static VpSchedule Build(double beta0, double beta1, int steps);

  int steps() const { return static_cast<int>(betas_.size()); }
  double beta0() const { return beta0_; }
  double beta1() const { return beta1_; }
  const std::vector<double>& betas() const { return betas_; }
  const std::vector<double>& alphas() const { return alphas_; }
  const std::vector<double>& alpha_bars() const { return alpha_bars_; }

  // (sqrt(abar_i), sqrt(1 - abar_i)). Throws std::out_of_range.
  ForwardCoefficients Coefficients(int i) const;
  // sqrt((1 - abar_i) / abar_i), the std of the clean-sample proposal.
  double ProposalStd(int i) const;
  double MaxProposalStd() const;

 private:
  VpSchedule() = default;
  void CheckIndex(int i) const;

  double beta0_ = 0.0;
  double beta1_ = 0.0;
  std::vector<double> betas_;
  std::vector<double> alphas_;
  std::vector<double> alpha_bars_;
};

// Linear probability path Y_t = (1 - t) Y^(0) + t eps, truncated at t_max and
// discretized on `steps` uniform points t_i = i / (steps - 1) * t_max.
class LpSchedule {
 public:
  // Requires sigma_max > 0 (finite) and steps >= 2. Throws ParameterError.
  static LpSchedule Build(double sigma_max, int steps);

  int steps() const { return static_cast<int>(t_grid_.size()); }
  double sigma_max() const { return sigma_max_; }
  double t_max() const { return t_max_; }
  const std::vector<double>& t_grid() const { return t_grid_; }

  // (1 - t_i, t_i). Throws std::out_of_range.
  ForwardCoefficients Coefficients(int i) const;
  // t_i / (1 - t_i).
  double ProposalStd(int i) const;
  double MaxProposalStd() const;

 private:
  LpSchedule() = default;
  void CheckIndex(int i) const;

  double sigma_max_ = 0.0;
  double t_max_ = 0.0;
  std::vector<double> t_grid_;
};

using Schedule = std::variant<VpSchedule, LpSchedule>;

ScheduleKind KindOf(const Schedule& schedule);
int StepsOf(const Schedule& schedule);
double ProposalStd(const Schedule& schedule, int i);
double MaxProposalStd(const Schedule& schedule);
// t_i for LP, alpha_bar_i for VP.
double NoiseLevel(const Schedule& schedule, int i);

// Everything the sampler needs to move from step i to step i - 1:
//   proposals ~ N(mean_scale * Y, proposal_std^2 I)
//   score     = score_y * Y + score_bar * Ybar
//   Y^(i-1)   = prev_scale * Ybar
struct StepKernel {
  double mean_scale;
  double proposal_std;
  double score_y;
  double score_bar;
  double prev_scale;
};

// Requires 1 <= i < steps.
StepKernel KernelAt(const Schedule& schedule, int i);

// Flat "key=value" lines: kind, parameters and the derived grids.
std::string ToKeyValue(const Schedule& schedule);

}  // namespace lpmbd

#endif  // LPMBD_SCHEDULES_H_
