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

#include "lpmbd/policy.h"

#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <string>

namespace lpmbd {
namespace {

const double kHalfLog2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(sigmoid(z) * (1 - sigmoid(z))), stable for large |z|.
double LogSigmoidSlope(double z) {
  const double a = std::abs(z);
  return -a - 2.0 * std::log1p(std::exp(-a));
}

int Argmax(const Eigen::VectorXd& v) {
  Eigen::Index k = 0;
  v.maxCoeff(&k);
  return static_cast<int>(k);
}

int SampleCategorical(const Eigen::VectorXd& probs, Rng& rng) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double u = uniform(rng);
  double acc = 0.0;
  int last_positive = 0;
  for (Eigen::Index k = 0; k < probs.size(); ++k) {
    if (probs[k] > 0.0) last_positive = static_cast<int>(k);
    acc += probs[k];
    if (u < acc && probs[k] > 0.0) return static_cast<int>(k);
  }
  return last_positive;
}

void ExpectHeader(std::istream& in, const std::string& expected) {
  std::string tag, version;
  if (!(in >> tag >> version) || tag != expected || version != "v1") {
    throw ParameterError("checkpoint is not a '" + expected + " v1' dump");
  }
}

}  // namespace

Eigen::VectorXd Softmax(const Eigen::VectorXd& logits) {
  const double m = logits.maxCoeff();
  Eigen::VectorXd e = (logits.array() - m).exp();
  return e / e.sum();
}

Eigen::VectorXd LogSoftmax(const Eigen::VectorXd& logits) {
  const double m = logits.maxCoeff();
  const double lse = m + std::log((logits.array() - m).exp().sum());
  return logits.array() - lse;
}

double ScaledSigmoid(double z, double lo, double hi) {
  return lo + (hi - lo) * Sigmoid(z);
}

double ScaledSigmoidDerivative(double z, double lo, double hi) {
  return (hi - lo) * std::exp(LogSigmoidSlope(z));
}

double InverseScaledSigmoid(double value, double lo, double hi) {
  const double p = (value - lo) / (hi - lo);
  return std::log(p) - std::log1p(-p);
}

double HeadsLogProb(const PolicyHeads& heads, int category,
                    const Eigen::VectorXd& raw, HeadGradients* grad) {
  const Eigen::VectorXd log_p = LogSoftmax(heads.logits);
  double lp = log_p[category];
  const Eigen::VectorXd std = heads.log_std.array().exp();
  const Eigen::VectorXd z = (raw - heads.mean).cwiseQuotient(std);
  lp += (-0.5 * z.array().square() - heads.log_std.array() - kHalfLog2Pi).sum();
  if (grad != nullptr) {
    grad->logits = -log_p.array().exp();
    grad->logits[category] += 1.0;
    grad->mean = z.cwiseQuotient(std);
    grad->log_std = z.array().square() - 1.0;
  }
  return lp;
}

double HeadsEntropy(const PolicyHeads& heads, HeadGradients* grad) {
  const Eigen::VectorXd log_p = LogSoftmax(heads.logits);
  const Eigen::VectorXd p = log_p.array().exp();
  double h_cat = 0.0;
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    if (p[k] > 0.0) h_cat -= p[k] * log_p[k];
  }
  const double h_gauss =
      (heads.log_std.array() + 0.5 + kHalfLog2Pi).sum();
  if (grad != nullptr) {
    grad->logits.resize(p.size());
    for (Eigen::Index k = 0; k < p.size(); ++k) {
      grad->logits[k] = p[k] > 0.0 ? -p[k] * (log_p[k] + h_cat) : 0.0;
    }
    grad->mean = Eigen::VectorXd::Zero(heads.mean.size());
    grad->log_std = Eigen::VectorXd::Ones(heads.log_std.size());
  }
  return h_cat + h_gauss;
}

// ---------------------------------------------------------------------------
// SchedulerPolicy

SchedulerPolicy::SchedulerPolicy(const Options& options, Rng& rng) : opt_(options) {
  if (opt_.t_min < 2 || opt_.t_max < opt_.t_min) {
    throw ParameterError("scheduler policy needs 2 <= t_min <= t_max");
  }
  if (!(opt_.sigma_lo > 0.0) || !(opt_.sigma_hi > opt_.sigma_lo)) {
    throw ParameterError("scheduler policy needs 0 < sigma_lo < sigma_hi");
  }
  if (opt_.init_steps != 0 &&
      (opt_.init_steps < opt_.t_min || opt_.init_steps > opt_.t_max ||
       !(opt_.init_steps_spread > 0.0))) {
    throw ParameterError("init_steps must be 0 or in [t_min, t_max] with spread > 0");
  }
  std::vector<int> sizes = {opt_.obs_dim};
  sizes.insert(sizes.end(), opt_.hidden.begin(), opt_.hidden.end());
  sizes.push_back(num_steps_choices() + 1);
  net_ = FeedforwardNet(sizes, rng);
  // Small output layer so the initial policy barely depends on the state and
  // is centred on init_sigma.
  const int last = net_.num_layers() - 1;
  net_.weight(last) *= 0.01;
  if (opt_.init_steps != 0) {
    const double s2 = 2.0 * opt_.init_steps_spread * opt_.init_steps_spread;
    for (int k = 0; k < num_steps_choices(); ++k) {
      const double d = opt_.t_min + k - opt_.init_steps;
      net_.bias(last)[k] = -d * d / s2;
    }
  }
  net_.bias(last)[num_steps_choices()] =
      InverseScaledSigmoid(opt_.init_sigma, opt_.sigma_lo, opt_.sigma_hi);
  log_std_ = opt_.init_log_std;
}

PolicyHeads SchedulerPolicy::Heads(const Eigen::VectorXd& obs) const {
  FeedforwardNet::Cache cache;
  return Heads(obs, cache);
}

PolicyHeads SchedulerPolicy::Heads(const Eigen::VectorXd& obs,
                                   FeedforwardNet::Cache& cache) const {
  const Eigen::VectorXd out = net_.Forward(obs, cache);
  const int n = num_steps_choices();
  return {out.head(n), out.tail(1), Eigen::VectorXd::Constant(1, log_std_)};
}

double SchedulerPolicy::SquashLogJacobian(double raw) const {
  return std::log(opt_.sigma_hi - opt_.sigma_lo) + LogSigmoidSlope(raw);
}

double SchedulerPolicy::LogProb(const PolicyHeads& heads, int steps,
                                double raw) const {
  return HeadsLogProb(heads, steps - opt_.t_min,
                      Eigen::VectorXd::Constant(1, raw)) -
         SquashLogJacobian(raw);
}

double SchedulerPolicy::SigmaLogDensity(const PolicyHeads& heads,
                                        double sigma_max) const {
  const double raw = InverseScaledSigmoid(sigma_max, opt_.sigma_lo, opt_.sigma_hi);
  const double s = std::exp(heads.log_std[0]);
  const double z = (raw - heads.mean[0]) / s;
  return -0.5 * z * z - heads.log_std[0] - kHalfLog2Pi - SquashLogJacobian(raw);
}

SchedulerAction SchedulerPolicy::SampleFromHeads(const PolicyHeads& heads,
                                                 Rng& rng) const {
  SchedulerAction a;
  const int k = SampleCategorical(Softmax(heads.logits), rng);
  a.steps = opt_.t_min + k;
  std::normal_distribution<double> normal(0.0, 1.0);
  const double std = std::exp(heads.log_std[0]);
  double raw = heads.mean[0];
  if (std > 0.0) raw += std * normal(rng);
  a.raw = Eigen::VectorXd::Constant(1, raw);
  a.sigma_max = ScaledSigmoid(raw, opt_.sigma_lo, opt_.sigma_hi);
  a.logprob = std > 0.0 ? LogProb(heads, a.steps, raw)
                        : std::numeric_limits<double>::infinity();
  return a;
}

SchedulerAction SchedulerPolicy::Sample(const Eigen::VectorXd& obs,
                                        Rng& rng) const {
  return SampleFromHeads(Heads(obs), rng);
}

SchedulerAction SchedulerPolicy::Mode(const Eigen::VectorXd& obs) const {
  const PolicyHeads heads = Heads(obs);
  SchedulerAction a;
  a.steps = opt_.t_min + Argmax(heads.logits);
  a.raw = heads.mean;
  a.sigma_max = ScaledSigmoid(heads.mean[0], opt_.sigma_lo, opt_.sigma_hi);
  a.logprob = LogProb(heads, a.steps, heads.mean[0]);
  return a;
}

Eigen::VectorXd SchedulerPolicy::params() const {
  Eigen::VectorXd flat(num_params());
  flat.head(net_.num_params()) = net_.params();
  flat[flat.size() - 1] = log_std_;
  return flat;
}

void SchedulerPolicy::set_params(const Eigen::VectorXd& flat) {
  if (flat.size() != num_params()) {
    throw ParameterError("policy parameter vector has the wrong size");
  }
  net_.set_params(flat.head(net_.num_params()));
  log_std_ = flat[flat.size() - 1];
}

SchedulerPolicy::LogProbGrad SchedulerPolicy::LogProbGradient(
    const Eigen::VectorXd& obs, int steps, double raw, double logprob_coef,
    double entropy_coef) const {
  FeedforwardNet::Cache cache;
  const PolicyHeads heads = Heads(obs, cache);
  HeadGradients g_lp, g_ent;
  LogProbGrad out;
  out.logprob = HeadsLogProb(heads, steps - opt_.t_min,
                             Eigen::VectorXd::Constant(1, raw), &g_lp) -
                SquashLogJacobian(raw);
  out.entropy = HeadsEntropy(heads, &g_ent);
  const int n = num_steps_choices();
  Eigen::VectorXd out_grad(n + 1);
  out_grad.head(n) = logprob_coef * g_lp.logits + entropy_coef * g_ent.logits;
  out_grad[n] = logprob_coef * g_lp.mean[0] + entropy_coef * g_ent.mean[0];
  out.grad.resize(num_params());
  out.grad.head(net_.num_params()) = net_.Backward(cache, out_grad).params;
  out.grad[num_params() - 1] =
      logprob_coef * g_lp.log_std[0] + entropy_coef * g_ent.log_std[0];
  return out;
}

void SchedulerPolicy::Save(std::ostream& out) const {
  out << "scheduler_policy v1\n"
      << std::setprecision(std::numeric_limits<double>::max_digits10)
      << opt_.obs_dim << ' ' << opt_.t_min << ' ' << opt_.t_max << ' '
      << opt_.sigma_lo << ' ' << opt_.sigma_hi << ' ' << log_std_ << '\n';
  net_.Save(out);
}

SchedulerPolicy SchedulerPolicy::Load(std::istream& in) {
  ExpectHeader(in, "scheduler_policy");
  SchedulerPolicy p;
  if (!(in >> p.opt_.obs_dim >> p.opt_.t_min >> p.opt_.t_max >>
        p.opt_.sigma_lo >> p.opt_.sigma_hi >> p.log_std_)) {
    throw ParameterError("truncated scheduler policy header");
  }
  p.net_ = FeedforwardNet::Load(in);
  const auto& sizes = p.net_.sizes();
  if (sizes.front() != p.opt_.obs_dim ||
      sizes.back() != p.num_steps_choices() + 1) {
    throw ParameterError("scheduler policy header does not match its network");
  }
  p.opt_.hidden.assign(sizes.begin() + 1, sizes.end() - 1);
  return p;
}

// ---------------------------------------------------------------------------
// AvpPolicy

AvpPolicy::AvpPolicy(const Options& options, Rng& rng) : opt_(options) {
  if (opt_.t_min < 2 || opt_.t_max < opt_.t_min) {
    throw ParameterError("avp policy needs 2 <= t_min <= t_max");
  }
  if (!(opt_.beta0_lo > 0.0) || !(opt_.beta0_hi > opt_.beta0_lo) ||
      !(opt_.beta1_cap < 1.0) || !(opt_.beta1_cap > opt_.beta0_hi)) {
    throw ParameterError("avp policy needs 0 < beta0_lo < beta0_hi < beta1_cap < 1");
  }
  std::vector<int> sizes = {opt_.obs_dim};
  sizes.insert(sizes.end(), opt_.hidden.begin(), opt_.hidden.end());
  sizes.push_back(num_steps_choices() + 2);
  net_ = FeedforwardNet(sizes, rng);
  const int last = net_.num_layers() - 1;
  net_.weight(last) *= 0.01;
  // Start at the standard linear schedule (1e-4, 1e-2).
  const double log_lo = std::log(opt_.beta0_lo), log_hi = std::log(opt_.beta0_hi);
  const double s0 = (std::log(1e-4) - log_lo) / (log_hi - log_lo);
  const double s1 = (1e-2 - 1e-4) / (opt_.beta1_cap - 1e-4);
  net_.bias(last)[num_steps_choices()] = std::log(s0) - std::log1p(-s0);
  net_.bias(last)[num_steps_choices() + 1] = std::log(s1) - std::log1p(-s1);
  log_std_.setConstant(opt_.init_log_std);
}

PolicyHeads AvpPolicy::Heads(const Eigen::VectorXd& obs) const {
  const Eigen::VectorXd out = net_.Forward(obs);
  const int n = num_steps_choices();
  return {out.head(n), out.tail(2), log_std_};
}

std::pair<double, double> AvpPolicy::Squash(const Eigen::VectorXd& raw) const {
  const double log_lo = std::log(opt_.beta0_lo), log_hi = std::log(opt_.beta0_hi);
  const double beta0 = std::exp(log_lo + (log_hi - log_lo) * Sigmoid(raw[0]));
  const double beta1 = beta0 + (opt_.beta1_cap - beta0) * Sigmoid(raw[1]);
  return {beta0, beta1};
}

double AvpPolicy::LogProb(const PolicyHeads& heads, int steps,
                          const Eigen::VectorXd& raw) const {
  const auto [beta0, beta1] = Squash(raw);
  const double log_span = std::log(opt_.beta0_hi) - std::log(opt_.beta0_lo);
  const double log_jac = std::log(beta0 * log_span) + LogSigmoidSlope(raw[0]) +
                         std::log(opt_.beta1_cap - beta0) + LogSigmoidSlope(raw[1]);
  return HeadsLogProb(heads, steps - opt_.t_min, raw) - log_jac;
}

AvpAction AvpPolicy::Sample(const Eigen::VectorXd& obs, Rng& rng) const {
  const PolicyHeads heads = Heads(obs);
  AvpAction a;
  a.steps = opt_.t_min + SampleCategorical(Softmax(heads.logits), rng);
  std::normal_distribution<double> normal(0.0, 1.0);
  a.raw = heads.mean;
  for (int j = 0; j < 2; ++j) a.raw[j] += std::exp(heads.log_std[j]) * normal(rng);
  std::tie(a.beta0, a.beta1) = Squash(a.raw);
  a.logprob = LogProb(heads, a.steps, a.raw);
  return a;
}

AvpAction AvpPolicy::Mode(const Eigen::VectorXd& obs) const {
  const PolicyHeads heads = Heads(obs);
  AvpAction a;
  a.steps = opt_.t_min + Argmax(heads.logits);
  a.raw = heads.mean;
  std::tie(a.beta0, a.beta1) = Squash(a.raw);
  a.logprob = LogProb(heads, a.steps, a.raw);
  return a;
}

Eigen::VectorXd AvpPolicy::params() const {
  Eigen::VectorXd flat(num_params());
  flat.head(net_.num_params()) = net_.params();
  flat.tail(2) = log_std_;
  return flat;
}

void AvpPolicy::set_params(const Eigen::VectorXd& flat) {
  if (flat.size() != num_params()) {
    throw ParameterError("avp parameter vector has the wrong size");
  }
  net_.set_params(flat.head(net_.num_params()));
  log_std_ = flat.tail(2);
}

SchedulerPolicy::LogProbGrad AvpPolicy::LogProbGradient(
    const Eigen::VectorXd& obs, int steps, const Eigen::VectorXd& raw) const {
  FeedforwardNet::Cache cache;
  const Eigen::VectorXd out = net_.Forward(obs, cache);
  const int n = num_steps_choices();
  const PolicyHeads heads{out.head(n), out.tail(2), log_std_};
  HeadGradients g;
  SchedulerPolicy::LogProbGrad result;
  result.logprob = LogProb(heads, steps, raw);
  HeadsLogProb(heads, steps - opt_.t_min, raw, &g);
  result.entropy = HeadsEntropy(heads);
  Eigen::VectorXd out_grad(n + 2);
  out_grad << g.logits, g.mean;
  result.grad.resize(num_params());
  result.grad.head(net_.num_params()) = net_.Backward(cache, out_grad).params;
  result.grad.tail(2) = g.log_std;
  return result;
}

void AvpPolicy::Save(std::ostream& out) const {
  out << "avp_policy v1\n"
      << std::setprecision(std::numeric_limits<double>::max_digits10)
      << opt_.obs_dim << ' ' << opt_.t_min << ' ' << opt_.t_max << ' '
      << opt_.beta0_lo << ' ' << opt_.beta0_hi << ' ' << opt_.beta1_cap << ' '
      << log_std_[0] << ' ' << log_std_[1] << '\n';
  net_.Save(out);
}

AvpPolicy AvpPolicy::Load(std::istream& in) {
  ExpectHeader(in, "avp_policy");
  AvpPolicy p;
  if (!(in >> p.opt_.obs_dim >> p.opt_.t_min >> p.opt_.t_max >>
        p.opt_.beta0_lo >> p.opt_.beta0_hi >> p.opt_.beta1_cap >>
        p.log_std_[0] >> p.log_std_[1])) {
    throw ParameterError("truncated avp policy header");
  }
  p.net_ = FeedforwardNet::Load(in);
  const auto& sizes = p.net_.sizes();
  if (sizes.front() != p.opt_.obs_dim ||
      sizes.back() != p.num_steps_choices() + 2) {
    throw ParameterError("avp policy header does not match its network");
  }
  p.opt_.hidden.assign(sizes.begin() + 1, sizes.end() - 1);
  return p;
}

}  // namespace lpmbd
