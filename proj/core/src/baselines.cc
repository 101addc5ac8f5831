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

#include "lpmbd/baselines.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace lpmbd {
namespace {

TraceRow MakeRow(int step, double noise, const DecisionVector& y,
                 const TargetDensity& target) {
  TraceRow row;
  row.step = step;
  row.noise_level = noise;
  row.proposal_std = noise;
  row.y_mean = y.mean();
  row.y_std = std::sqrt((y.array() - row.y_mean).square().mean());
  row.y_min = y.minCoeff();
  row.y_max = y.maxCoeff();
  row.y_log_weight = LogWeight(target, y);
  return row;
}

void ValidateBudget(int iterations, int n_samples) {
  if (iterations < 1) throw ParameterError("iterations must be >= 1");
  if (n_samples < 2) throw ParameterError("n_samples must be >= 2");
}

}  // namespace

int CemConfig::EliteCount() const {
  return std::max(1, static_cast<int>(std::ceil(elite_frac * n_samples - 1e-9)));
}

CemConfig ParityCem(int diffusion_steps, int n_samples) {
  CemConfig cfg;
  cfg.iterations = diffusion_steps;
  cfg.n_samples = n_samples;
  return cfg;
}

MppiConfig ParityMppi(int diffusion_steps, int n_samples) {
  MppiConfig cfg;
  cfg.iterations = diffusion_steps;
  cfg.n_samples = n_samples;
  return cfg;
}

double PenalizedCost(const TargetDensity& target, const CandidateScore& score) {
  return -target.temperature * LogWeight(target, score);
}

BaselineResult RunCem(const TargetDensity& target, const CemConfig& cfg) {
  ValidateBudget(cfg.iterations, cfg.n_samples);
  if (!(cfg.elite_frac > 0.0 && cfg.elite_frac <= 1.0)) {
    throw ParameterError("elite_frac must be in (0, 1]");
  }
  if (!(cfg.init_std > 0.0) || !(cfg.min_std > 0.0)) {
    throw ParameterError("cem stds must be positive");
  }
  const Eigen::Index dim = target.dim;
  const int n_elite = cfg.EliteCount();
  DecisionVector mean = DecisionVector::Zero(dim);
  Eigen::VectorXd std = Eigen::VectorXd::Constant(dim, cfg.init_std);

  struct Ranked {
    DecisionVector y;
    double cost;
  };
  std::vector<Ranked> elites;
  BaselineResult result;

  for (int it = 0; it < cfg.iterations; ++it) {
    Rng rng = StreamFor(cfg.seed, static_cast<std::uint64_t>(it));
    std::vector<Ranked> pool = elites;
    for (int k = 0; k < cfg.n_samples; ++k) {
      DecisionVector y = mean + std.cwiseProduct(StandardNormal(dim, rng));
      const double c = PenalizedCost(target, Score(target, y, k));
      pool.push_back({std::move(y), c});
    }
    std::stable_sort(pool.begin(), pool.end(),
                     [](const Ranked& a, const Ranked& b) { return a.cost < b.cost; });
    pool.resize(std::min<std::size_t>(pool.size(), n_elite));
    elites = std::move(pool);

    const double mean_std = std.mean();
    DecisionVector next_mean = DecisionVector::Zero(dim);
    for (const auto& e : elites) next_mean += e.y;
    next_mean /= static_cast<double>(elites.size());
    Eigen::VectorXd var = Eigen::VectorXd::Zero(dim);
    for (const auto& e : elites) var += (e.y - next_mean).array().square().matrix();
    var /= static_cast<double>(elites.size());

    double elite_cost = 0.0;
    for (const auto& e : elites) elite_cost += e.cost;
    result.elite_mean_cost.push_back(elite_cost / elites.size());

    if (cfg.record_trace) {
      TraceRow row = MakeRow(cfg.iterations - it, mean_std, mean, target);
      row.ess = static_cast<double>(elites.size());
      row.best_cost = elites.front().cost;
      result.trace.push_back(row);
    }
    mean = std::move(next_mean);
    std = var.cwiseSqrt().cwiseMax(cfg.min_std);
  }
  if (cfg.record_trace) {
    TraceRow row = MakeRow(0, std.mean(), mean, target);
    row.ess = std::numeric_limits<double>::quiet_NaN();
    row.best_cost = std::numeric_limits<double>::quiet_NaN();
    result.trace.push_back(row);
  }
  result.y = std::move(mean);
  return result;
}

Eigen::VectorXd MppiWeights(const TargetDensity& target, const MppiConfig& cfg,
                            const std::vector<DecisionVector>& candidates) {
  TargetDensity tempered = target;
  tempered.temperature = cfg.temperature;
  return WeighBatch(tempered, candidates).norm_weights;
}

BaselineResult RunMppi(const TargetDensity& target, const MppiConfig& cfg) {
  ValidateBudget(cfg.iterations, cfg.n_samples);
  if (!(cfg.temperature > 0.0)) throw ParameterError("mppi temperature must be > 0");
  if (!(cfg.noise_std >= 0.0)) throw ParameterError("mppi noise_std must be >= 0");
  TargetDensity tempered = target;
  tempered.temperature = cfg.temperature;

  DecisionVector mean = DecisionVector::Zero(target.dim);
  BaselineResult result;
  for (int it = 0; it < cfg.iterations; ++it) {
    Rng rng = StreamFor(cfg.seed, static_cast<std::uint64_t>(it));
    std::vector<DecisionVector> candidates;
    candidates.reserve(cfg.n_samples);
    for (int k = 0; k < cfg.n_samples; ++k) {
      candidates.push_back(mean + cfg.noise_std * StandardNormal(target.dim, rng));
    }
    const WeightedBatch batch = WeighBatch(tempered, std::move(candidates));
    if (cfg.record_trace) {
      TraceRow row = MakeRow(cfg.iterations - it, cfg.noise_std, mean, target);
      row.ess = EffectiveSampleSize(batch.norm_weights);
      row.best_cost = batch.BestCost();
      result.trace.push_back(row);
    }
    mean = batch.WeightedMean();
  }
  if (cfg.record_trace) {
    TraceRow row = MakeRow(0, cfg.noise_std, mean, target);
    row.ess = std::numeric_limits<double>::quiet_NaN();
    row.best_cost = std::numeric_limits<double>::quiet_NaN();
    result.trace.push_back(row);
  }
  result.y = std::move(mean);
  return result;
}

}  // namespace lpmbd
