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

#include "lpmbd/sampler.h"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "lpmbd/csv.h"

namespace lpmbd {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::vector<std::string> kTraceHeader = {
    "step",   "noise_level", "proposal_std", "ess",   "best_cost",
    "y_mean", "y_std",       "y_min",        "y_max", "y_log_weight"};

void FillStateColumns(const DecisionVector& y, const TargetDensity& target,
                      TraceRow& row) {
  row.y_mean = y.mean();
  row.y_std = y.size() > 0
                  ? std::sqrt((y.array() - row.y_mean).square().mean())
                  : 0.0;
  row.y_min = y.minCoeff();
  row.y_max = y.maxCoeff();
  row.y_log_weight = LogWeight(target, y);
}

}  // namespace

void WriteTraceCsv(std::ostream& out, const std::vector<TraceRow>& rows) {
  CsvWriter csv(out, kTraceHeader);
  for (const auto& r : rows) {
    csv << r.step << r.noise_level << r.proposal_std << r.ess << r.best_cost
        << r.y_mean << r.y_std << r.y_min << r.y_max << r.y_log_weight;
    csv.EndRow();
  }
}

std::vector<TraceRow> ReadTraceCsv(std::istream& in) {
  const CsvTable table = ReadCsv(in);
  std::vector<TraceRow> rows(table.rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    auto& r = rows[k];
    r.step = static_cast<int>(table.Number(k, "step"));
    r.noise_level = table.Number(k, "noise_level");
    r.proposal_std = table.Number(k, "proposal_std");
    r.ess = table.Number(k, "ess");
    r.best_cost = table.Number(k, "best_cost");
    r.y_mean = table.Number(k, "y_mean");
    r.y_std = table.Number(k, "y_std");
    r.y_min = table.Number(k, "y_min");
    r.y_max = table.Number(k, "y_max");
    r.y_log_weight = table.Number(k, "y_log_weight");
  }
  return rows;
}

std::vector<DecisionVector> SampleProposals(const DecisionVector& y,
                                            const StepKernel& kernel, int n,
                                            Rng& rng) {
  std::vector<DecisionVector> out;
  out.reserve(n);
  const DecisionVector mean = kernel.mean_scale * y;
  for (int k = 0; k < n; ++k) {
    out.push_back(mean + kernel.proposal_std * StandardNormal(y.size(), rng));
  }
  return out;
}

std::vector<DecisionVector> SampleProposals(const DiffusionState& state,
                                            const Schedule& schedule,
                                            const SamplerConfig& cfg,
                                            Rng& rng) {
  if (state.step <= 0) {
    throw std::logic_error("proposals are undefined at the clean endpoint");
  }
  return SampleProposals(state.y, KernelAt(schedule, state.step),
                         cfg.n_samples, rng);
}

DecisionVector ScoreFromWeightedMean(const DecisionVector& y,
                                     const StepKernel& kernel,
                                     const DecisionVector& ybar) {
  return kernel.score_y * y + kernel.score_bar * ybar;
}

DecisionVector McScore(const DiffusionState& state, const Schedule& schedule,
                       const TargetDensity& target,
                       const std::vector<DecisionVector>& proposals) {
  const StepKernel kernel = KernelAt(schedule, state.step);
  const WeightedBatch batch = WeighBatch(target, proposals);
  return ScoreFromWeightedMean(state.y, kernel, batch.WeightedMean());
}

DiffusionState DenoiseStep(const DiffusionState& state,
                           const Schedule& schedule,
                           const TargetDensity& target,
                           const SamplerConfig& cfg, Rng& rng, TraceRow* row,
                           DecisionVector* best) {
  const StepKernel kernel = KernelAt(schedule, state.step);
  WeightedBatch batch =
      WeighBatch(target, SampleProposals(state.y, kernel, cfg.n_samples, rng));
  if (row != nullptr) {
    row->ess = EffectiveSampleSize(batch.norm_weights);
    row->best_cost = batch.BestCost();
  }
  if (best != nullptr) *best = batch.candidates[batch.BestIndex()];
  return {kernel.prev_scale * batch.WeightedMean(), state.step - 1, state.kind};
}

MbdResult RunMbd(const TargetDensity& target, const Schedule& schedule,
                 const SamplerConfig& cfg,
                 const std::optional<DecisionVector>& warm_start) {
  if (cfg.n_samples < 2) throw ParameterError("n_samples must be >= 2");
  const int last = StepsOf(schedule) - 1;
  Rng init_rng = StreamFor(cfg.seed, static_cast<std::uint64_t>(last) + 1);
  DiffusionState state{cfg.start == ReverseStart::kStandardNormal
                           ? StandardNormal(target.dim, init_rng)
                           : DecisionVector(DecisionVector::Zero(target.dim)),
                       last, KindOf(schedule)};
  if (warm_start) {
    if (warm_start->size() != target.dim) {
      throw ParameterError("warm start has the wrong dimension");
    }
    const auto c = std::visit(
        [last](const auto& s) { return s.Coefficients(last); }, schedule);
    state.y = c.c0 * *warm_start + c.c1 * state.y;
  }

  MbdResult result;
  while (state.step > 0) {
    Rng rng = StreamFor(cfg.seed, static_cast<std::uint64_t>(state.step));
    DecisionVector* best = state.step == 1 ? &result.best_sample : nullptr;
    if (cfg.record_trace) {
      TraceRow row;
      row.step = state.step;
      row.noise_level = NoiseLevel(schedule, state.step);
      row.proposal_std = ProposalStd(schedule, state.step);
      FillStateColumns(state.y, target, row);
      result.states.push_back(state.y);
      DiffusionState next = DenoiseStep(state, schedule, target, cfg, rng, &row, best);
      result.trace.push_back(row);
      state = std::move(next);
    } else {
      state = DenoiseStep(state, schedule, target, cfg, rng, nullptr, best);
    }
  }
  if (cfg.record_trace) {
    TraceRow row;
    row.step = 0;
    row.noise_level = NoiseLevel(schedule, 0);
    row.proposal_std = ProposalStd(schedule, 0);
    row.ess = kNaN;
    row.best_cost = kNaN;
    FillStateColumns(state.y, target, row);
    result.trace.push_back(row);
    result.states.push_back(state.y);
  }
  result.y = std::move(state.y);
  return result;
}

Eigen::VectorXd FirstControl(const DecisionVector& y, int control_dim) {
  if (control_dim < 1 || control_dim > y.size()) {
    throw ParameterError("control_dim outside decision vector");
  }
  return y.head(control_dim);
}

Eigen::VectorXd RecedingHorizonPlanner::Plan(const TargetDensity& target,
                                             std::uint64_t seed) {
  return Plan(target, cfg_.schedule, seed);
}

Eigen::VectorXd RecedingHorizonPlanner::Plan(const TargetDensity& target,
                                             const Schedule& schedule,
                                             std::uint64_t seed) {
  SamplerConfig sampler = cfg_.sampler;
  sampler.seed = seed;
  std::optional<DecisionVector> warm;
  if (cfg_.warm_start && last_.size() == target.dim) {
    // Shift one control step forward and hold the final control.
    const Eigen::Index n = target.dim, u = cfg_.control_dim;
    DecisionVector shifted(n);
    shifted.head(n - u) = last_.tail(n - u);
    shifted.tail(u) = last_.tail(u);
    warm = std::move(shifted);
  }
  last_ = RunMbd(target, schedule, sampler, warm).y;
  return FirstControl(last_, cfg_.control_dim);
}

}  // namespace lpmbd
