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

#include "lpmbd/target.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace lpmbd {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double LogSumExp(const Eigen::VectorXd& v) {
  const double m = v.maxCoeff();
  if (!std::isfinite(m)) return m;
  return m + std::log((v.array() - m).exp().sum());
}

}  // namespace

TargetDensity::CostFn PlainCost(std::function<double(const DecisionVector&)> f) {
  return [f = std::move(f)](const DecisionVector& y, const StateTrajectory&) {
    return f(y);
  };
}

CandidateScore Score(const TargetDensity& target, const DecisionVector& y,
                     int candidate_index) {
  const StateTrajectory states =
      target.rollout ? target.rollout(y) : StateTrajectory();
  CandidateScore score;
  score.cost = target.cost(y, states);
  if (!std::isfinite(score.cost)) {
    std::ostringstream msg;
    msg << "non-finite cost " << score.cost << " for candidate "
        << candidate_index;
    throw EvaluationError(msg.str(), candidate_index);
  }
  if (target.constraints) {
    const Eigen::VectorXd g = target.constraints(y, states);
    if (!g.allFinite()) {
      throw EvaluationError("non-finite constraint value for candidate " +
                                std::to_string(candidate_index),
                            candidate_index);
    }
    score.violation = g.cwiseMax(0.0).sum();
    score.feasible = (g.array() <= 0.0).all();
  }
  return score;
}

double LogWeight(const TargetDensity& target, const CandidateScore& score) {
  const double base = -score.cost / target.temperature;
  if (score.feasible) return base;
  return base - target.Rho() * score.violation;
}

double LogWeight(const TargetDensity& target, const DecisionVector& y) {
  if (y.size() != target.dim) {
    throw ParameterError("decision vector has dim " + std::to_string(y.size()) +
                         ", target expects " + std::to_string(target.dim));
  }
  return LogWeight(target, Score(target, y));
}

Eigen::VectorXd NormalizeWeights(const Eigen::VectorXd& log_weights) {
  if (log_weights.size() == 0) {
    throw DegenerateBatchError("empty weight batch");
  }
  const double m = log_weights.maxCoeff();
  if (!(m > kNegInf) || std::isnan(m)) {
    throw DegenerateBatchError("every log-weight is -inf");
  }
  // Scalar exp so that -inf maps to exactly 0; Eigen's packet exp clamps.
  Eigen::VectorXd w(log_weights.size());
  for (Eigen::Index k = 0; k < w.size(); ++k) w[k] = std::exp(log_weights[k] - m);
  return w / w.sum();
}

double EffectiveSampleSize(const Eigen::VectorXd& norm_weights) {
  return 1.0 / norm_weights.squaredNorm();
}

double WeightedBatch::BestCost() const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < scores.size(); ++k) {
    if (any_feasible && !scores[k].feasible) continue;
    best = std::min(best, scores[k].cost);
  }
  return best;
}

int WeightedBatch::BestIndex() const {
  Eigen::Index idx = 0;
  log_weights.maxCoeff(&idx);
  return static_cast<int>(idx);
}

DecisionVector WeightedBatch::WeightedMean() const {
  DecisionVector mean = DecisionVector::Zero(candidates.front().size());
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    mean += norm_weights[static_cast<Eigen::Index>(k)] * candidates[k];
  }
  return mean;
}

WeightedBatch WeighBatch(const TargetDensity& target,
                         std::vector<DecisionVector> candidates) {
  if (candidates.empty()) throw DegenerateBatchError("empty candidate batch");
  WeightedBatch batch;
  const auto n = static_cast<Eigen::Index>(candidates.size());
  batch.scores.resize(candidates.size());
  for (Eigen::Index k = 0; k < n; ++k) {
    batch.scores[k] = Score(target, candidates[k], static_cast<int>(k));
    batch.any_feasible = batch.any_feasible || batch.scores[k].feasible;
  }
  batch.log_weights.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto& s = batch.scores[k];
    batch.log_weights[k] = (batch.any_feasible && !s.feasible)
                               ? kNegInf
                               : LogWeight(target, s);
  }
  try {
    batch.norm_weights = NormalizeWeights(batch.log_weights);
  } catch (const DegenerateBatchError&) {
    batch.degenerate = true;
    batch.norm_weights = Eigen::VectorXd::Constant(n, 1.0 / n);
  }
  batch.candidates = std::move(candidates);
  return batch;
}

TargetDensity MakeGaussian1d(double mean, double std) {
  if (!(std > 0.0)) throw ParameterError("gaussian_1d requires std > 0");
  TargetDensity t;
  t.dim = 1;
  t.name = "gaussian_1d";
  t.cost = PlainCost([mean, std](const DecisionVector& y) {
    const double z = (y[0] - mean) / std;
    return 0.5 * z * z;
  });
  return t;
}

TargetDensity MakeMixture1d(std::vector<double> means, std::vector<double> stds,
                            std::vector<double> weights) {
  if (means.empty() || means.size() != stds.size() ||
      means.size() != weights.size()) {
    throw ParameterError("mixture_1d requires matched, non-empty means/stds/weights");
  }
  for (std::size_t k = 0; k < means.size(); ++k) {
    if (!(stds[k] > 0.0) || !(weights[k] > 0.0)) {
      throw ParameterError("mixture_1d requires positive stds and weights");
    }
  }
  TargetDensity t;
  t.dim = 1;
  t.name = "mixture_1d";
  t.cost = PlainCost([means = std::move(means), stds = std::move(stds),
                      weights = std::move(weights)](const DecisionVector& y) {
    Eigen::VectorXd terms(static_cast<Eigen::Index>(means.size()));
    for (std::size_t k = 0; k < means.size(); ++k) {
      const double z = (y[0] - means[k]) / stds[k];
      terms[static_cast<Eigen::Index>(k)] =
          std::log(weights[k]) - std::log(stds[k]) - 0.5 * z * z;
    }
    return 0.5 * std::log(2.0 * std::numbers::pi) - LogSumExp(terms);
  });
  return t;
}

TargetDensity MakeMultimodal1d() {
  TargetDensity t;
  t.dim = 1;
  t.name = "multimodal_1d";
  t.cost = PlainCost([](const DecisionVector& y) {
    const double d = y[0] - 1.0;
    return 0.5 * d * d + 1.0 - std::cos(3.0 * std::numbers::pi * d);
  });
  return t;
}

TargetDensity MakeConstrainedMixture2d() {
  TargetDensity t;
  t.dim = 2;
  t.name = "constrained_mixture_2d";
  t.cost = PlainCost([](const DecisionVector& y) {
    Eigen::Vector2d terms;
    const Eigen::Vector2d a(y[0] - 1.5, y[1] - 1.0);
    const Eigen::Vector2d b(y[0] + 1.5, y[1] + 1.0);
    terms << -0.5 * a.squaredNorm(), -0.5 * b.squaredNorm();
    return -LogSumExp(terms);
  });
  t.constraints = [](const DecisionVector& y, const StateTrajectory&) {
    Eigen::VectorXd g(1);
    g[0] = 2.0 - (3.0 * y[0] - y[1]);
    return g;
  };
  return t;
}

TargetDensity MakeObjective(const std::string& name) {
  if (name == "gaussian_1d") return MakeGaussian1d(2.0, 0.5);
  if (name == "mixture_1d") {
    return MakeMixture1d({-1.0, 1.5}, {0.4, 0.4}, {0.4, 0.6});
  }
  if (name == "multimodal_1d") return MakeMultimodal1d();
  if (name == "constrained_mixture_2d") return MakeConstrainedMixture2d();
  throw ParameterError("unknown objective '" + name + "'");
}

std::vector<std::string> ObjectiveNames() {
  return {"gaussian_1d", "mixture_1d", "multimodal_1d", "constrained_mixture_2d"};
}

}  // namespace lpmbd
