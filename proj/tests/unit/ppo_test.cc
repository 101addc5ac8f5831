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

#include "lpmbd/ppo.h"

#include <cmath>
#include <stdexcept>

#include <gtest/gtest.h>

namespace lpmbd {
namespace {

TEST(GaeTest, LambdaOneIsDiscountedReturnMinusValue) {
  const std::vector<double> r = {1.0, -2.0, 0.5, 3.0};
  const std::vector<double> v = {0.3, -0.1, 0.8, 1.2};
  const std::vector<bool> term(4, false);
  const double gamma = 0.9, boot = 2.0;
  const auto adv = ComputeGae(r, v, term, boot, gamma, 1.0);
  for (int t = 0; t < 4; ++t) {
    double ret = 0.0, disc = 1.0;
    for (int k = t; k < 4; ++k) {
      ret += disc * r[k];
      disc *= gamma;
    }
    ret += disc * boot;
    EXPECT_NEAR(adv[t], ret - v[t], 1e-12) << t;
  }
}

TEST(GaeTest, LambdaZeroIsTdResidual) {
  const std::vector<double> r = {1.0, 2.0, 3.0};
  const std::vector<double> v = {0.5, 0.25, -1.0};
  const auto adv = ComputeGae(r, v, {false, false, false}, 4.0, 0.95, 0.0);
  EXPECT_NEAR(adv[0], 1.0 + 0.95 * 0.25 - 0.5, 1e-12);
  EXPECT_NEAR(adv[1], 2.0 + 0.95 * -1.0 - 0.25, 1e-12);
  EXPECT_NEAR(adv[2], 3.0 + 0.95 * 4.0 + 1.0, 1e-12);
}

TEST(GaeTest, TerminalCutsBootstrap) {
  const std::vector<double> r = {1.0, 1.0, 1.0};
  const std::vector<double> v = {0.0, 0.0, 0.0};
  const auto adv = ComputeGae(r, v, {false, true, false}, 10.0, 1.0, 1.0);
  EXPECT_NEAR(adv[0], 2.0, 1e-12);
  EXPECT_NEAR(adv[1], 1.0, 1e-12);
  EXPECT_NEAR(adv[2], 11.0, 1e-12);
}

TEST(GaeTest, RejectsMismatchedSizes) {
  EXPECT_ANY_THROW(ComputeGae({1.0, 2.0}, {0.0}, {false, false}, 0, 0.9, 0.9));
}

TEST(ClipTest, SurrogateBranches) {
  // Positive advantage: capped at (1 + eps) A.
  EXPECT_DOUBLE_EQ(ClippedSurrogate(1.5, 2.0, 0.2), 2.4);
  EXPECT_DOUBLE_EQ(ClippedSurrogate(0.5, 2.0, 0.2), 1.0);
  // Negative advantage: floored at (1 - eps) A, unclipped when ratio grows.
  EXPECT_DOUBLE_EQ(ClippedSurrogate(0.5, -2.0, 0.2), -1.6);
  EXPECT_DOUBLE_EQ(ClippedSurrogate(1.5, -2.0, 0.2), -3.0);
  EXPECT_DOUBLE_EQ(ClippedSurrogate(1.0, 3.0, 0.2), 3.0);
}

TEST(ClipTest, GradientActivity) {
  EXPECT_TRUE(SurrogateGradientActive(1.1, 1.0, 0.2));
  EXPECT_FALSE(SurrogateGradientActive(1.3, 1.0, 0.2));
  EXPECT_TRUE(SurrogateGradientActive(0.5, 1.0, 0.2));
  EXPECT_TRUE(SurrogateGradientActive(0.9, -1.0, 0.2));
  EXPECT_FALSE(SurrogateGradientActive(0.7, -1.0, 0.2));
  EXPECT_TRUE(SurrogateGradientActive(1.7, -1.0, 0.2));
}

TEST(BufferTest, VersionAssertion) {
  RolloutBuffer buf;
  Transition t;
  t.policy_version = 3;
  buf.Add(t);
  EXPECT_NO_THROW(buf.RequireVersion(3));
  t.policy_version = 2;
  buf.Add(t);
  EXPECT_THROW(buf.RequireVersion(3), std::logic_error);
  buf.Clear();
  EXPECT_TRUE(buf.empty());
  EXPECT_NO_THROW(buf.RequireVersion(7));
}

class PpoTrainerTest : public ::testing::Test {
 protected:
  void SetUp() override {
    env_cfg_ = DefaultEnvConfig(PathKind::kSCurve);
    env_cfg_.horizon = 5;
    env_cfg_.episode_len = 12;
    opt_.hidden = {8, 8};
    opt_.t_min = 2;
    opt_.t_max = 5;
    cfg_.n_samples = 8;
    cfg_.epochs = 2;
    cfg_.minibatch = 5;
  }

  PpoTrainer MakeTrainer(std::uint64_t seed) {
    Rng rng(seed);
    SchedulerPolicy pi(opt_, rng);
    FeedforwardNet v = MakeValueNet(opt_, rng);
    return PpoTrainer(pi, v, cfg_, seed);
  }

  EnvConfig env_cfg_;
  SchedulerPolicy::Options opt_;
  PpoConfig cfg_;
};

TEST_F(PpoTrainerTest, CollectFillsBuffer) {
  PpoTrainer trainer = MakeTrainer(1);
  VehicleEnv env(env_cfg_);
  trainer.Collect(env);
  ASSERT_EQ(trainer.buffer().size(), 12u);
  const int t_max = opt_.t_max;
  for (const Transition& t : trainer.buffer().data()) {
    EXPECT_EQ(t.policy_version, 0);
    EXPECT_GE(t.steps, 2);
    EXPECT_LE(t.steps, 5);
    EXPECT_EQ(t.s.size(), Observation::kDim);
    EXPECT_EQ(t.s_next.size(), Observation::kDim);
    // The augmented reward never exceeds the raw reward ceiling of zero.
    EXPECT_LE(t.reward_aug, -cfg_.w_t * t.steps / t_max + 1e-12);
  }
}

TEST_F(PpoTrainerTest, ZeroLearningRateKeepsParamsAndBumpsVersion) {
  cfg_.learning_rate = 0.0;
  cfg_.value_learning_rate = 0.0;
  PpoTrainer trainer = MakeTrainer(2);
  const Eigen::VectorXd p0 = trainer.policy().params();
  const Eigen::VectorXd v0 = trainer.value().params();
  trainer.Collect(VehicleEnv(env_cfg_));
  const LearningCurveRow row = trainer.Update();
  EXPECT_EQ(trainer.policy().params(), p0);
  EXPECT_EQ(trainer.value().params(), v0);
  EXPECT_EQ(trainer.version(), 1);
  EXPECT_TRUE(trainer.buffer().empty());
  EXPECT_TRUE(std::isfinite(row.value_loss));
}

TEST_F(PpoTrainerTest, UpdateChangesParams) {
  PpoTrainer trainer = MakeTrainer(3);
  const Eigen::VectorXd p0 = trainer.policy().params();
  trainer.Iterate(VehicleEnv(env_cfg_));
  EXPECT_NE(trainer.policy().params(), p0);
  EXPECT_EQ(trainer.iteration(), 1);
}

TEST_F(PpoTrainerTest, ValueLossDropsOnRepeatedFits) {
  cfg_.learning_rate = 0.0;
  cfg_.value_learning_rate = 1e-2;
  cfg_.epochs = 20;
  PpoTrainer trainer = MakeTrainer(4);
  trainer.Collect(VehicleEnv(env_cfg_));
  const double first = trainer.Update().value_loss;
  double last = first;
  for (int k = 0; k < 3; ++k) last = trainer.Iterate(VehicleEnv(env_cfg_)).value_loss;
  EXPECT_LT(last, first);
}

TEST_F(PpoTrainerTest, TrainingIsDeterministic) {
  const PpoResult a = PpoTrain(MakeTrainer(5).policy(), MakeTrainer(5).value(),
                               env_cfg_, cfg_, 2, 5);
  const PpoResult b = PpoTrain(MakeTrainer(5).policy(), MakeTrainer(5).value(),
                               env_cfg_, cfg_, 2, 5);
  EXPECT_EQ(a.policy.params(), b.policy.params());
  ASSERT_EQ(a.curve.size(), 2u);
  EXPECT_DOUBLE_EQ(a.curve[1].mean_reward, b.curve[1].mean_reward);
}

}  // namespace
}  // namespace lpmbd
