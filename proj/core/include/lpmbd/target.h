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

#ifndef LPMBD_TARGET_H_
#define LPMBD_TARGET_H_

#include <functional>
#include <string>
#include <vector>

#include "lpmbd/common.h"

namespace lpmbd {

// Unnormalized target p_0(Y) ∝ p_d(Y) p_J(Y) p_g(Y).
//
// p_d is enforced by construction: when `rollout` is set, every candidate is
// rolled out first and the resulting states are handed to `cost` and
// `constraints`. Candidates themselves are never modified.
struct TargetDensity {
  using CostFn =
      std::function<double(const DecisionVector&, const StateTrajectory&)>;
  // Feasible iff every entry is <= 0. May be empty (unconstrained).
  using ConstraintFn =
      std::function<Eigen::VectorXd(const DecisionVector&, const StateTrajectory&)>;
  using RolloutFn = std::function<StateTrajectory(const DecisionVector&)>;

  Eigen::Index dim = 1;
  CostFn cost;
  ConstraintFn constraints;
  RolloutFn rollout;
  double temperature = 0.1;
  // Multiplier on the soft infeasibility penalty rho = 10 * scale / lambda.
  double penalty_scale = 1.0;
  std::string name;

  double Rho() const { return 10.0 * penalty_scale / temperature; }
};

// Wraps a plain objective of the decision vector.
TargetDensity::CostFn PlainCost(std::function<double(const DecisionVector&)> f);

// Cost, summed constraint violation and feasibility of one candidate.
struct CandidateScore {
  double cost = 0.0;
  double violation = 0.0;
  bool feasible = true;
};

// Throws EvaluationError on a non-finite cost or constraint value.
CandidateScore Score(const TargetDensity& target, const DecisionVector& y,
                     int candidate_index = 0);

// -J/lambda for feasible y, -J/lambda - rho * sum max(0, g_k) otherwise.
double LogWeight(const TargetDensity& target, const DecisionVector& y);
double LogWeight(const TargetDensity& target, const CandidateScore& score);

// Max-subtracted softmax. Throws DegenerateBatchError if nothing is finite.
Eigen::VectorXd NormalizeWeights(const Eigen::VectorXd& log_weights);

// Kish effective sample size 1 / sum w^2 of normalized weights.
double EffectiveSampleSize(const Eigen::VectorXd& norm_weights);

struct WeightedBatch {
  std::vector<DecisionVector> candidates;
  std::vector<CandidateScore> scores;
  Eigen::VectorXd log_weights;
  Eigen::VectorXd norm_weights;
  bool any_feasible = false;
  // Set when every log-weight was -inf and uniform weights were substituted.
  bool degenerate = false;

  double BestCost() const;
  // Index of the highest log-weight.
  int BestIndex() const;
  // sum_k norm_weights[k] * candidates[k], reduced in candidate order.
  DecisionVector WeightedMean() const;
};

// Scores every candidate. If any candidate is feasible the constraint factor
// is a hard indicator (infeasible -> -inf); otherwise every candidate gets
// the soft penalty so the batch still points toward feasibility.
WeightedBatch WeighBatch(const TargetDensity& target,
                         std::vector<DecisionVector> candidates);

// J(y) = (y - mean)^2 / (2 std^2).
TargetDensity MakeGaussian1d(double mean, double std);

// J(y) = -log sum_k w_k N(y; mu_k, sigma_k^2).
TargetDensity MakeMixture1d(std::vector<double> means, std::vector<double> stds,
                            std::vector<double> weights);

// Highly multimodal 1D test function standing in for the first 1D example:
// J(y) = (y - 1)^2 / 2 + 1 - cos(3 pi (y - 1)), global minimum at y = 1.
TargetDensity MakeMultimodal1d();

// Equal-weight, unit-covariance 2D mixture with modes at (1.5, 1) and
// (-1.5, -1), subject to 3 x0 - x1 >= 2.
TargetDensity MakeConstrainedMixture2d();

// Built-in objectives by name: gaussian_1d, mixture_1d, multimodal_1d,
// constrained_mixture_2d. Throws ParameterError for unknown names.
TargetDensity MakeObjective(const std::string& name);
std::vector<std::string> ObjectiveNames();

}  // namespace lpmbd

#endif  // LPMBD_TARGET_H_
