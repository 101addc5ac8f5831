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

#ifndef LPMBD_POLICY_H_
#define LPMBD_POLICY_H_

#include <istream>
#include <ostream>
#include <vector>

#include "lpmbd/common.h"
#include "lpmbd/network.h"

namespace lpmbd {

// Raw policy outputs: logits over the step set and one Gaussian per
// continuous action dimension (pre-squash).
struct PolicyHeads {
  Eigen::VectorXd logits;
  Eigen::VectorXd mean;
  Eigen::VectorXd log_std;
};

Eigen::VectorXd Softmax(const Eigen::VectorXd& logits);
Eigen::VectorXd LogSoftmax(const Eigen::VectorXd& logits);

// lo + (hi - lo) * sigmoid(z) and its derivative.
double ScaledSigmoid(double z, double lo, double hi);
double ScaledSigmoidDerivative(double z, double lo, double hi);
double InverseScaledSigmoid(double value, double lo, double hi);

// Sampled scheduling action. `raw` holds the pre-squash Gaussian draws, the
// quantity log-probabilities are evaluated on.
struct SchedulerAction {
  int steps = 0;
  double sigma_max = 0.0;
  Eigen::VectorXd raw;
  double logprob = 0.0;
};

// Gradient of log pi(action | obs) w.r.t. the head outputs.
struct HeadGradients {
  Eigen::VectorXd logits;
  Eigen::VectorXd mean;
  Eigen::VectorXd log_std;
};

// log pi_T(k) + sum_j log N(raw_j; mean_j, exp(log_std_j)), no squash term.
double HeadsLogProb(const PolicyHeads& heads, int category,
                    const Eigen::VectorXd& raw, HeadGradients* grad = nullptr);
// Categorical entropy + Gaussian entropies, with optional gradient.
double HeadsEntropy(const PolicyHeads& heads, HeadGradients* grad = nullptr);

// pi_phi(T, sigma_max | s) = pi_T(T | s) * pi_sigma(sigma_max | s).
// A tanh trunk maps the observation to |T set| logits and the Gaussian mean
// of the pre-squash sigma; the log-std is a free, state-independent
// parameter. sigma_max = sigma_lo + (sigma_hi - sigma_lo) * sigmoid(z).
class SchedulerPolicy {
 public:
  struct Options {
    int obs_dim = 5;
    std::vector<int> hidden = {64, 64};
    int t_min = 2;
    int t_max = 30;
    double sigma_lo = 0.2;
    double sigma_hi = 4.0;
    double init_sigma = 1.8;   // squashed mean at initialization
    double init_log_std = -0.7;
    // 0 leaves T near-uniform; otherwise the T logits start as a discretized
    // Gaussian with this mode and init_steps_spread.
    int init_steps = 0;
    double init_steps_spread = 4.0;
  };

  SchedulerPolicy() = default;
  SchedulerPolicy(const Options& options, Rng& rng);

  const Options& options() const { return opt_; }
  int num_steps_choices() const { return opt_.t_max - opt_.t_min + 1; }

  PolicyHeads Heads(const Eigen::VectorXd& obs) const;
  PolicyHeads Heads(const Eigen::VectorXd& obs, FeedforwardNet::Cache& cache) const;

  // Joint log-density of (T, sigma_max), including the squash Jacobian.
  double LogProb(const PolicyHeads& heads, int steps, double raw) const;
  // Density of sigma_max alone (squash-corrected), for quadrature checks.
  double SigmaLogDensity(const PolicyHeads& heads, double sigma_max) const;

  SchedulerAction Sample(const Eigen::VectorXd& obs, Rng& rng) const;
  // Sampling from explicit heads (lets tests pin logits or log_std).
  SchedulerAction SampleFromHeads(const PolicyHeads& heads, Rng& rng) const;
  // argmax T and the squashed Gaussian mean.
  SchedulerAction Mode(const Eigen::VectorXd& obs) const;

  // Flat parameters: trunk params followed by the log-std.
  Eigen::VectorXd params() const;
  void set_params(const Eigen::VectorXd& flat);
  Eigen::Index num_params() const { return net_.num_params() + 1; }

  // d/dparams of (log pi(steps, raw | obs) + entropy_coef * entropy), along
  // with the log-prob and entropy.
  struct LogProbGrad {
    double logprob = 0.0;
    double entropy = 0.0;
    Eigen::VectorXd grad;
  };
  LogProbGrad LogProbGradient(const Eigen::VectorXd& obs, int steps, double raw,
                              double logprob_coef = 1.0,
                              double entropy_coef = 0.0) const;

  const FeedforwardNet& net() const { return net_; }
  FeedforwardNet& net() { return net_; }

  void Save(std::ostream& out) const;
  static SchedulerPolicy Load(std::istream& in);

 private:
  double SquashLogJacobian(double raw) const;

  Options opt_;
  FeedforwardNet net_;
  double log_std_ = 0.0;
};

struct AvpAction {
  int steps = 0;
  double beta0 = 0.0;
  double beta1 = 0.0;
  Eigen::VectorXd raw;  // two pre-squash draws
  double logprob = 0.0;
};

// Adaptive VP baseline: the same trunk/heads recipe producing (beta0, beta1,
// T). beta0 = exp(lerp(log b_lo, log b_hi, sigmoid(z0))) and
// beta1 = beta0 + (b_cap - beta0) * sigmoid(z1), so 0 < beta0 <= beta1 < 1.
class AvpPolicy {
 public:
  struct Options {
    int obs_dim = 1;
    std::vector<int> hidden = {64, 64};
    int t_min = 2;
    int t_max = 10;
    double beta0_lo = 1e-5;
    double beta0_hi = 0.5;
    double beta1_cap = 0.999;
    double init_log_std = -0.7;
  };

  AvpPolicy() = default;
  AvpPolicy(const Options& options, Rng& rng);

  const Options& options() const { return opt_; }
  int num_steps_choices() const { return opt_.t_max - opt_.t_min + 1; }

  PolicyHeads Heads(const Eigen::VectorXd& obs) const;
  // (beta0, beta1) for pre-squash draws.
  std::pair<double, double> Squash(const Eigen::VectorXd& raw) const;
  double LogProb(const PolicyHeads& heads, int steps,
                 const Eigen::VectorXd& raw) const;

  AvpAction Sample(const Eigen::VectorXd& obs, Rng& rng) const;
  AvpAction Mode(const Eigen::VectorXd& obs) const;

  Eigen::VectorXd params() const;
  void set_params(const Eigen::VectorXd& flat);
  Eigen::Index num_params() const { return net_.num_params() + 2; }

  SchedulerPolicy::LogProbGrad LogProbGradient(const Eigen::VectorXd& obs,
                                               int steps,
                                               const Eigen::VectorXd& raw) const;

  void Save(std::ostream& out) const;
  static AvpPolicy Load(std::istream& in);

 private:
  Options opt_;
  FeedforwardNet net_;
  Eigen::Vector2d log_std_ = Eigen::Vector2d::Zero();
};

}  // namespace lpmbd

#endif  // LPMBD_POLICY_H_
