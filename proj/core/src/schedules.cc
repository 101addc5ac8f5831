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

#include "lpmbd/schedules.h"

#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "lpmbd/common.h"

namespace lpmbd {

const char* ToString(ScheduleKind kind) {
  return kind == ScheduleKind::kVp ? "vp" : "lp";
}

VpSchedule VpSchedule::Build(double beta0, double beta1, int steps) {
  if (!(beta0 > 0.0) || !(beta0 <= beta1) || !(beta1 < 1.0)) {
    std::ostringstream msg;
    msg << "vp schedule requires 0 < beta0 <= beta1 < 1, got beta0=" << beta0
        << " beta1=" << beta1;
    throw ParameterError(msg.str());
  }
  if (steps < 1) {
    throw ParameterError("vp schedule requires steps >= 1, got " +
                         std::to_string(steps));
  }
  VpSchedule s;
  s.beta0_ = beta0;
  s.beta1_ = beta1;
  s.betas_.resize(steps);
  s.alphas_.resize(steps);
  s.alpha_bars_.resize(steps);
  double alpha_bar = 1.0;
  for (int i = 0; i < steps; ++i) {
    const double frac = steps == 1 ? 0.0 : static_cast<double>(i) / (steps - 1);
    s.betas_[i] = beta0 + (beta1 - beta0) * frac;
    s.alphas_[i] = 1.0 - s.betas_[i];
    alpha_bar *= s.alphas_[i];
    s.alpha_bars_[i] = alpha_bar;
  }
  return s;
}

void VpSchedule::CheckIndex(int i) const {
  if (i < 0 || i >= steps()) {
    throw std::out_of_range("vp step index " + std::to_string(i) +
                            " outside [0, " + std::to_string(steps()) + ")");
  }
}

ForwardCoefficients VpSchedule::Coefficients(int i) const {
  CheckIndex(i);
  return {std::sqrt(alpha_bars_[i]), std::sqrt(1.0 - alpha_bars_[i])};
}

double VpSchedule::ProposalStd(int i) const {
  CheckIndex(i);
  return std::sqrt((1.0 - alpha_bars_[i]) / alpha_bars_[i]);
}

double VpSchedule::MaxProposalStd() const {
  // alpha_bar is strictly decreasing, so the last step is the widest.
  return ProposalStd(steps() - 1);
}

LpSchedule LpSchedule::Build(double sigma_max, int steps) {
  if (!(sigma_max > 0.0) || !std::isfinite(sigma_max)) {
    std::ostringstream msg;
    msg << "lp schedule requires sigma_max in (0, inf), got " << sigma_max;
    throw ParameterError(msg.str());
  }
  if (steps < 2) {
    throw ParameterError("lp schedule requires steps >= 2, got " +
                         std::to_string(steps));
  }
  LpSchedule s;
  s.sigma_max_ = sigma_max;
  s.t_max_ = sigma_max / (1.0 + sigma_max);
  s.t_grid_.resize(steps);
  for (int i = 0; i < steps; ++i) {
    s.t_grid_[i] = s.t_max_ * static_cast<double>(i) / (steps - 1);
  }
  s.t_grid_.back() = s.t_max_;
  return s;
}

void LpSchedule::CheckIndex(int i) const {
  if (i < 0 || i >= steps()) {
    throw std::out_of_range("lp step index " + std::to_string(i) +
                            " outside [0, " + std::to_string(steps()) + ")");
  }
}

ForwardCoefficients LpSchedule::Coefficients(int i) const {
  CheckIndex(i);
  return {1.0 - t_grid_[i], t_grid_[i]};
}

double LpSchedule::ProposalStd(int i) const {
  CheckIndex(i);
  if (i == steps() - 1) return sigma_max_;  // exact, avoids t/(1-t) rounding
  const double t = t_grid_[i];
  return t / (1.0 - t);
}

double LpSchedule::MaxProposalStd() const { return sigma_max_; }

ScheduleKind KindOf(const Schedule& schedule) {
  return std::holds_alternative<VpSchedule>(schedule) ? ScheduleKind::kVp
                                                      : ScheduleKind::kLp;
}

int StepsOf(const Schedule& schedule) {
  return std::visit([](const auto& s) { return s.steps(); }, schedule);
}

double ProposalStd(const Schedule& schedule, int i) {
  return std::visit([i](const auto& s) { return s.ProposalStd(i); }, schedule);
}

double MaxProposalStd(const Schedule& schedule) {
  return std::visit([](const auto& s) { return s.MaxProposalStd(); }, schedule);
}

double NoiseLevel(const Schedule& schedule, int i) {
  if (const auto* vp = std::get_if<VpSchedule>(&schedule)) {
    vp->Coefficients(i);  // range check
    return vp->alpha_bars()[i];
  }
  const auto& lp = std::get<LpSchedule>(schedule);
  lp.Coefficients(i);
  return lp.t_grid()[i];
}

StepKernel KernelAt(const Schedule& schedule, int i) {
  const int steps = StepsOf(schedule);
  if (i < 1 || i >= steps) {
    throw std::out_of_range("denoising step " + std::to_string(i) +
                            " outside [1, " + std::to_string(steps) + ")");
  }
  if (const auto* vp = std::get_if<VpSchedule>(&schedule)) {
    const double abar = vp->alpha_bars()[i];
    return {
        .mean_scale = 1.0 / std::sqrt(abar),
        .proposal_std = vp->ProposalStd(i),
        .score_y = -1.0 / (1.0 - abar),
        .score_bar = std::sqrt(abar) / (1.0 - abar),
        .prev_scale = std::sqrt(vp->alpha_bars()[i - 1]),
    };
  }
  const auto& lp = std::get<LpSchedule>(schedule);
  const double t = lp.t_grid()[i];
  return {
      .mean_scale = 1.0 / (1.0 - t),
      .proposal_std = lp.ProposalStd(i),
      .score_y = -1.0 / (t * t),
      .score_bar = (1.0 - t) / (t * t),
      .prev_scale = 1.0 - lp.t_grid()[i - 1],
  };
}

namespace {

void WriteSeries(std::ostream& out, const char* key, int n, auto&& value) {
  out << key << '=';
  for (int i = 0; i < n; ++i) {
    if (i) out << ',';
    out << value(i);
  }
  out << '\n';
}

}  // namespace

std::string ToKeyValue(const Schedule& schedule) {
  std::ostringstream out;
  out << std::setprecision(17);
  const int n = StepsOf(schedule);
  out << "kind=" << ToString(KindOf(schedule)) << '\n';
  out << "steps=" << n << '\n';
  if (const auto* vp = std::get_if<VpSchedule>(&schedule)) {
    out << "beta0=" << vp->beta0() << '\n' << "beta1=" << vp->beta1() << '\n';
    WriteSeries(out, "betas", n, [&](int i) { return vp->betas()[i]; });
    WriteSeries(out, "alpha_bars", n, [&](int i) { return vp->alpha_bars()[i]; });
  } else {
    const auto& lp = std::get<LpSchedule>(schedule);
    out << "sigma_max=" << lp.sigma_max() << '\n'
        << "t_max=" << lp.t_max() << '\n';
    WriteSeries(out, "t_grid", n, [&](int i) { return lp.t_grid()[i]; });
  }
  WriteSeries(out, "proposal_std", n,
              [&](int i) { return ProposalStd(schedule, i); });
  return out.str();
}

}  // namespace lpmbd
