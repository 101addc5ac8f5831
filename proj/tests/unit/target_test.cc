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

#include <cmath>
#include <limits>
#include <numbers>

#include <gtest/gtest.h>

namespace lpmbd {
namespace {

DecisionVector Vec(std::initializer_list<double> v) {
  DecisionVector y(static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (double x : v) y[k++] = x;
  return y;
}

TEST(TargetTest, GaussianLogWeight) {
  const TargetDensity t = MakeGaussian1d(2.0, 0.5);
  // J = (3 - 2)^2 / (2 * 0.25) = 2, lambda = 0.1.
  EXPECT_NEAR(LogWeight(t, Vec({3.0})), -20.0, 1e-12);
  EXPECT_NEAR(LogWeight(t, Vec({2.0})), 0.0, 1e-12);
}

TEST(TargetTest, MixtureCostIsNegativeLogDensity) {
  const TargetDensity t = MakeMixture1d({-1.0, 2.0}, {0.5, 1.0}, {0.3, 0.7});
  const double y = 0.4;
  auto pdf = [](double x, double m, double s) {
    return std::exp(-0.5 * (x - m) * (x - m) / (s * s)) /
           (s * std::sqrt(2 * std::numbers::pi));
  };
  const double p = 0.3 * pdf(y, -1.0, 0.5) + 0.7 * pdf(y, 2.0, 1.0);
  EXPECT_NEAR(Score(t, Vec({y})).cost, -std::log(p), 1e-10);
}

TEST(TargetTest, MultimodalGlobalMinimum) {
  const TargetDensity t = MakeMultimodal1d();
  const double at_min = Score(t, Vec({1.0})).cost;
  for (double y = -4.0; y <= 4.0; y += 0.01) {
    if (std::abs(y - 1.0) > 1e-6) {
      EXPECT_GT(Score(t, Vec({y})).cost, at_min);
    }
  }
}

TEST(TargetTest, ConstrainedMixtureFeasibility) {
  const TargetDensity t = MakeConstrainedMixture2d();
  EXPECT_TRUE(Score(t, Vec({1.5, 1.0})).feasible);
  const CandidateScore bad = Score(t, Vec({-1.5, -1.0}));
  EXPECT_FALSE(bad.feasible);
  // 2 - (3 * -1.5 - -1) = 5.5.
  EXPECT_NEAR(bad.violation, 5.5, 1e-12);
}

TEST(TargetTest, SoftPenaltyLogWeight) {
  const TargetDensity t = MakeConstrainedMixture2d();
  const CandidateScore s = Score(t, Vec({0.0, 0.0}));
  ASSERT_FALSE(s.feasible);
  EXPECT_NEAR(LogWeight(t, s), -s.cost / 0.1 - t.Rho() * s.violation, 1e-9);
  EXPECT_DOUBLE_EQ(t.Rho(), 100.0);
}

TEST(TargetTest, HardIndicatorWhenAnyFeasible) {
  const TargetDensity t = MakeConstrainedMixture2d();
  const WeightedBatch b = WeighBatch(t, {Vec({1.5, 1.0}), Vec({-1.5, -1.0})});
  EXPECT_TRUE(b.any_feasible);
  EXPECT_EQ(b.log_weights[1], -std::numeric_limits<double>::infinity());
  EXPECT_DOUBLE_EQ(b.norm_weights[0], 1.0);
  EXPECT_DOUBLE_EQ(b.norm_weights[1], 0.0);
  EXPECT_EQ(b.BestIndex(), 0);
}

TEST(TargetTest, SoftPenaltyWhenNoneFeasible) {
  const TargetDensity t = MakeConstrainedMixture2d();
  const WeightedBatch b = WeighBatch(t, {Vec({0.0, 0.0}), Vec({-1.5, -1.0})});
  EXPECT_FALSE(b.any_feasible);
  EXPECT_TRUE(std::isfinite(b.log_weights[0]));
  EXPECT_TRUE(std::isfinite(b.log_weights[1]));
  // The less violating candidate dominates.
  EXPECT_GT(b.norm_weights[0], b.norm_weights[1]);
}

TEST(TargetTest, NormalizeWeightsSumsToOne) {
  Eigen::VectorXd lw(4);
  lw << -1000.0, -1001.0, -999.5, -std::numeric_limits<double>::infinity();
  const Eigen::VectorXd w = NormalizeWeights(lw);
  EXPECT_NEAR(w.sum(), 1.0, 1e-15);
  EXPECT_EQ(w[3], 0.0);
  EXPECT_NEAR(w[0] / w[1], std::exp(1.0), 1e-12);
}

TEST(TargetTest, NormalizeWeightsDegenerate) {
  Eigen::VectorXd lw =
      Eigen::VectorXd::Constant(3, -std::numeric_limits<double>::infinity());
  EXPECT_THROW(NormalizeWeights(lw), DegenerateBatchError);
}

TEST(TargetTest, EffectiveSampleSize) {
  EXPECT_NEAR(EffectiveSampleSize(Eigen::VectorXd::Constant(8, 0.125)), 8.0,
              1e-12);
  Eigen::VectorXd one = Eigen::VectorXd::Zero(5);
  one[2] = 1.0;
  EXPECT_NEAR(EffectiveSampleSize(one), 1.0, 1e-12);
}

TEST(TargetTest, WeightedMeanMatchesManualSum) {
  const TargetDensity t = MakeGaussian1d(0.0, 1.0);
  const WeightedBatch b = WeighBatch(t, {Vec({-1.0}), Vec({0.5}), Vec({2.0})});
  double expected = 0.0;
  for (int k = 0; k < 3; ++k) expected += b.norm_weights[k] * b.candidates[k][0];
  EXPECT_NEAR(b.WeightedMean()[0], expected, 1e-15);
  EXPECT_EQ(b.BestIndex(), 1);
  EXPECT_NEAR(b.BestCost(), 0.125, 1e-15);
}

TEST(TargetTest, NonFiniteCostRaisesWithIndex) {
  TargetDensity t = MakeGaussian1d(0.0, 1.0);
  t.cost = PlainCost([](const DecisionVector& y) {
    return y[0] > 1.0 ? std::nan("") : y[0];
  });
  try {
    WeighBatch(t, {Vec({0.0}), Vec({3.0})});
    FAIL() << "expected EvaluationError";
  } catch (const EvaluationError& e) {
    EXPECT_EQ(e.candidate(), 1);
  }
}

TEST(TargetTest, RolloutFeedsCostAndConstraints) {
  TargetDensity t;
  t.dim = 2;
  t.rollout = [](const DecisionVector& y) {
    StateTrajectory s(2, 1);
    s << y[0], y[0] + y[1];
    return s;
  };
  t.cost = [](const DecisionVector&, const StateTrajectory& s) {
    return s(1, 0) * s(1, 0);
  };
  t.constraints = [](const DecisionVector&, const StateTrajectory& s) {
    Eigen::VectorXd g(1);
    g << s(0, 0) - 1.0;
    return g;
  };
  const CandidateScore c = Score(t, Vec({2.0, 1.0}));
  EXPECT_DOUBLE_EQ(c.cost, 9.0);
  EXPECT_FALSE(c.feasible);
  EXPECT_DOUBLE_EQ(c.violation, 1.0);
}

TEST(TargetTest, ObjectiveRegistry) {
  for (const std::string& name : ObjectiveNames()) {
    EXPECT_EQ(MakeObjective(name).name, name);
  }
  EXPECT_EQ(MakeObjective("constrained_mixture_2d").dim, 2);
  EXPECT_THROW(MakeObjective("rosenbrock"), ParameterError);
}

}  // namespace
}  // namespace lpmbd
