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
#include <stdexcept>

#include <gtest/gtest.h>

#include "lpmbd/common.h"

namespace lpmbd {
namespace {

TEST(VpScheduleTest, TwoStepProposalStds) {
  const VpSchedule s = VpSchedule::Build(1e-4, 1e-2, 2);
  // abar_0 = 1 - 1e-4, abar_1 = (1 - 1e-4)(1 - 1e-2).
  const double abar0 = 1.0 - 1e-4;
  const double abar1 = abar0 * (1.0 - 1e-2);
  EXPECT_NEAR(s.ProposalStd(0), std::sqrt((1 - abar0) / abar0), 1e-15);
  EXPECT_NEAR(s.ProposalStd(1), std::sqrt((1 - abar1) / abar1), 1e-15);
  EXPECT_NEAR(s.ProposalStd(0), 0.01, 0.01 * 0.02);
  EXPECT_NEAR(s.ProposalStd(1), 0.1, 0.1 * 0.02);
}

TEST(VpScheduleTest, FiveStepCap) {
  EXPECT_NEAR(VpSchedule::Build(1e-4, 1e-2, 5).MaxProposalStd(), 0.16, 0.16 * 0.02);
}

TEST(VpScheduleTest, BetasInterpolateLinearly) {
  const VpSchedule s = VpSchedule::Build(0.1, 0.5, 5);
  ASSERT_EQ(s.steps(), 5);
  for (int i = 0; i < 5; ++i) {
    EXPECT_NEAR(s.betas()[i], 0.1 + 0.1 * i, 1e-15);
    EXPECT_NEAR(s.alphas()[i], 1.0 - s.betas()[i], 1e-15);
  }
  double prod = 1.0;
  for (int i = 0; i < 5; ++i) {
    prod *= s.alphas()[i];
    EXPECT_NEAR(s.alpha_bars()[i], prod, 1e-15);
  }
}

TEST(VpScheduleTest, SingleStepUsesBeta0) {
  const VpSchedule s = VpSchedule::Build(0.2, 0.3, 1);
  ASSERT_EQ(s.steps(), 1);
  EXPECT_DOUBLE_EQ(s.betas()[0], 0.2);
}

TEST(VpScheduleTest, CoefficientsPreserveVariance) {
  const VpSchedule s = VpSchedule::Build(1e-4, 0.3, 20);
  for (int i = 0; i < s.steps(); ++i) {
    const auto c = s.Coefficients(i);
    EXPECT_NEAR(c.c0 * c.c0 + c.c1 * c.c1, 1.0, 1e-12);
  }
}

TEST(VpScheduleTest, AlphaBarStrictlyDecreasing) {
  const VpSchedule s = VpSchedule::Build(1e-3, 0.2, 30);
  for (int i = 1; i < s.steps(); ++i) {
    EXPECT_LT(s.alpha_bars()[i], s.alpha_bars()[i - 1]);
  }
}

TEST(VpScheduleTest, RejectsBadParameters) {
  EXPECT_THROW(VpSchedule::Build(0.0, 0.1, 3), ParameterError);
  EXPECT_THROW(VpSchedule::Build(0.2, 0.1, 3), ParameterError);
  EXPECT_THROW(VpSchedule::Build(0.1, 1.0, 3), ParameterError);
  EXPECT_THROW(VpSchedule::Build(0.1, 0.2, 0), ParameterError);
  EXPECT_THROW(VpSchedule::Build(std::nan(""), 0.2, 3), ParameterError);
}

TEST(VpScheduleTest, IndexOutOfRangeThrows) {
  const VpSchedule s = VpSchedule::Build(1e-4, 1e-2, 3);
  EXPECT_THROW(s.ProposalStd(3), std::out_of_range);
  EXPECT_THROW(s.Coefficients(-1), std::out_of_range);
}

TEST(VpScheduleTest, MaxStdDependsOnSteps) {
  const double two = VpSchedule::Build(1e-4, 1e-2, 2).MaxProposalStd();
  const double five = VpSchedule::Build(1e-4, 1e-2, 5).MaxProposalStd();
  EXPECT_NEAR(two, 0.101, 0.001);
  EXPECT_GT(five, two + 0.05);
}

TEST(LpScheduleTest, TwoStepStdsAreExact) {
  const LpSchedule s = LpSchedule::Build(1.8, 2);
  EXPECT_EQ(s.ProposalStd(0), 0.0);
  EXPECT_EQ(s.ProposalStd(1), 1.8);
}

TEST(LpScheduleTest, TMaxFromSigma) {
  const LpSchedule s = LpSchedule::Build(1.8, 7);
  EXPECT_NEAR(s.t_max(), 1.8 / 2.8, 1e-15);
  EXPECT_DOUBLE_EQ(s.t_grid().back(), s.t_max());
  EXPECT_EQ(s.t_grid().front(), 0.0);
}

TEST(LpScheduleTest, UniformGrid) {
  const LpSchedule s = LpSchedule::Build(3.0, 6);
  for (int i = 0; i < 6; ++i) {
    EXPECT_NEAR(s.t_grid()[i], i / 5.0 * 0.75, 1e-15);
    EXPECT_NEAR(s.ProposalStd(i), s.t_grid()[i] / (1.0 - s.t_grid()[i]), 1e-12);
  }
}

TEST(LpScheduleTest, DecoupledMaxStd) {
  for (double sigma : {0.3, 1.0, 1.8, 4.0}) {
    for (int steps = 2; steps <= 50; ++steps) {
      EXPECT_EQ(LpSchedule::Build(sigma, steps).MaxProposalStd(), sigma);
    }
  }
}

TEST(LpScheduleTest, StdsMonotone) {
  const LpSchedule s = LpSchedule::Build(2.5, 12);
  for (int i = 1; i < s.steps(); ++i) EXPECT_GT(s.ProposalStd(i), s.ProposalStd(i - 1));
}

TEST(LpScheduleTest, Coefficients) {
  const LpSchedule s = LpSchedule::Build(1.0, 3);
  const auto c = s.Coefficients(2);
  EXPECT_DOUBLE_EQ(c.c0, 0.5);
  EXPECT_DOUBLE_EQ(c.c1, 0.5);
}

TEST(LpScheduleTest, RejectsBadParameters) {
  EXPECT_THROW(LpSchedule::Build(-1.0, 5), ParameterError);
  EXPECT_THROW(LpSchedule::Build(0.0, 5), ParameterError);
  EXPECT_THROW(LpSchedule::Build(1.0, 1), ParameterError);
  EXPECT_THROW(LpSchedule::Build(INFINITY, 5), ParameterError);
}

TEST(StepKernelTest, LpKernelMatchesUpdateRule) {
  const Schedule s = LpSchedule::Build(1.8, 5);
  const auto& lp = std::get<LpSchedule>(s);
  for (int i = 1; i < 5; ++i) {
    const StepKernel k = KernelAt(s, i);
    const double t = lp.t_grid()[i];
    EXPECT_NEAR(k.mean_scale, 1.0 / (1.0 - t), 1e-12);
    EXPECT_NEAR(k.proposal_std, t / (1.0 - t), 1e-12);
    EXPECT_NEAR(k.score_y, -1.0 / (t * t), 1e-9);
    EXPECT_NEAR(k.score_bar, (1.0 - t) / (t * t), 1e-9);
    EXPECT_NEAR(k.prev_scale, 1.0 - lp.t_grid()[i - 1], 1e-12);
  }
}

TEST(StepKernelTest, VpKernelMatchesUpdateRule) {
  const Schedule s = VpSchedule::Build(1e-3, 0.1, 6);
  const auto& vp = std::get<VpSchedule>(s);
  for (int i = 1; i < 6; ++i) {
    const StepKernel k = KernelAt(s, i);
    const double ab = vp.alpha_bars()[i];
    EXPECT_NEAR(k.mean_scale, 1.0 / std::sqrt(ab), 1e-12);
    EXPECT_NEAR(k.proposal_std, std::sqrt((1 - ab) / ab), 1e-12);
    EXPECT_NEAR(k.score_y, -1.0 / (1.0 - ab), 1e-9);
    EXPECT_NEAR(k.score_bar, std::sqrt(ab) / (1.0 - ab), 1e-9);
    EXPECT_NEAR(k.prev_scale, std::sqrt(vp.alpha_bars()[i - 1]), 1e-12);
  }
}

TEST(StepKernelTest, StepZeroRejected) {
  EXPECT_THROW(KernelAt(LpSchedule::Build(1.8, 3), 0), std::out_of_range);
}

TEST(ScheduleSerializationTest, KeyValueBlock) {
  const std::string text = ToKeyValue(LpSchedule::Build(1.8, 3));
  EXPECT_NE(text.find("kind=lp"), std::string::npos);
  EXPECT_NE(text.find("steps=3"), std::string::npos);
  EXPECT_NE(text.find("sigma_max=1.8"), std::string::npos);
  const std::string vp = ToKeyValue(VpSchedule::Build(1e-4, 1e-2, 2));
  EXPECT_NE(vp.find("kind=vp"), std::string::npos);
  EXPECT_NE(vp.find("alpha_bars="), std::string::npos);
}

}  // namespace
}  // namespace lpmbd
