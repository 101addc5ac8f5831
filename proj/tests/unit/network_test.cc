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

#include "lpmbd/network.h"

#include <sstream>

#include <gtest/gtest.h>

namespace lpmbd {
namespace {

// Central-difference gradient of <g, f(params)> for comparison with Backward.
Eigen::VectorXd NumericParamGrad(FeedforwardNet net, const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& g) {
  const Eigen::VectorXd p0 = net.params();
  Eigen::VectorXd out(p0.size());
  const double h = 1e-6;
  for (Eigen::Index k = 0; k < p0.size(); ++k) {
    Eigen::VectorXd p = p0;
    p[k] += h;
    net.set_params(p);
    const double up = g.dot(net.Forward(x));
    p[k] -= 2 * h;
    net.set_params(p);
    const double down = g.dot(net.Forward(x));
    out[k] = (up - down) / (2 * h);
  }
  return out;
}

TEST(NetworkTest, ParamCount) {
  Rng rng(0);
  const FeedforwardNet net({5, 8, 3}, rng);
  EXPECT_EQ(net.num_params(), 5 * 8 + 8 + 8 * 3 + 3);
  EXPECT_EQ(net.params().size(), net.num_params());
}

TEST(NetworkTest, ZeroNetOutputsZero) {
  const FeedforwardNet net({3, 4, 2});
  EXPECT_EQ(net.Forward(Eigen::Vector3d(1, 2, 3)), Eigen::Vector2d::Zero());
}

TEST(NetworkTest, ForwardMatchesManual) {
  FeedforwardNet net({2, 2, 1});
  net.weight(0) << 1.0, -1.0, 0.5, 2.0;
  net.bias(0) << 0.1, -0.2;
  net.weight(1) << 3.0, -1.0;
  net.bias(1) << 0.5;
  const Eigen::Vector2d x(0.3, -0.4);
  const Eigen::Vector2d h = (net.weight(0) * x + net.bias(0)).array().tanh();
  EXPECT_NEAR(net.Forward(x)[0], 3.0 * h[0] - h[1] + 0.5, 1e-15);
}

TEST(NetworkTest, ParamsRoundTrip) {
  Rng rng(1);
  FeedforwardNet net({4, 6, 6, 2}, rng);
  const Eigen::VectorXd p = Eigen::VectorXd::LinSpaced(net.num_params(), -1, 1);
  net.set_params(p);
  EXPECT_EQ(net.params(), p);
  EXPECT_ANY_THROW(net.set_params(Eigen::VectorXd::Zero(3)));
}

TEST(NetworkTest, RejectsWrongInputSize) {
  Rng rng(2);
  const FeedforwardNet net({3, 2}, rng);
  EXPECT_THROW(net.Forward(Eigen::VectorXd::Zero(4)), ParameterError);
}

class NetworkGradientTest : public ::testing::TestWithParam<int> {};

TEST_P(NetworkGradientTest, BackwardMatchesFiniteDifference) {
  Rng rng(100 + GetParam());
  const FeedforwardNet net({4, 7, 5, 3}, rng, 1.5);
  const Eigen::VectorXd x = StandardNormal(4, rng);
  const Eigen::VectorXd g = StandardNormal(3, rng);
  FeedforwardNet::Cache cache;
  net.Forward(x, cache);
  const FeedforwardNet::Gradients grad = net.Backward(cache, g);
  const Eigen::VectorXd num = NumericParamGrad(net, x, g);
  EXPECT_LT((grad.params - num).norm() / (num.norm() + 1e-12), 1e-6);

  const double h = 1e-6;
  for (int k = 0; k < 4; ++k) {
    Eigen::VectorXd xp = x, xm = x;
    xp[k] += h;
    xm[k] -= h;
    const double d = (g.dot(net.Forward(xp)) - g.dot(net.Forward(xm))) / (2 * h);
    EXPECT_NEAR(grad.input[k], d, 1e-6);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, NetworkGradientTest, ::testing::Range(0, 5));

TEST(NetworkTest, SaveLoadRoundTrip) {
  Rng rng(3);
  const FeedforwardNet net({5, 9, 2}, rng);
  std::stringstream buf;
  net.Save(buf);
  const FeedforwardNet back = FeedforwardNet::Load(buf);
  EXPECT_EQ(back.sizes(), net.sizes());
  EXPECT_EQ(back.params(), net.params());
}

TEST(AdamTest, FirstStepHasLearningRateMagnitude) {
  Adam adam(3, 0.01);
  const Eigen::Vector3d p(1, 2, 3);
  const Eigen::Vector3d g(0.5, -4.0, 1e-3);
  const Eigen::VectorXd next = adam.Step(p, g);
  // Bias correction makes the first update lr * g / (|g| + eps').
  EXPECT_NEAR(next[0], 1 - 0.01, 1e-6);
  EXPECT_NEAR(next[1], 2 + 0.01, 1e-6);
  EXPECT_NEAR(next[2], 3 - 0.01, 1e-4);
  Adam ascent(3, 0.01);
  EXPECT_NEAR(ascent.Step(p, g, true)[0], 1 + 0.01, 1e-6);
}

TEST(AdamTest, ZeroLearningRateLeavesParams) {
  Adam adam(2, 0.0);
  const Eigen::Vector2d p(0.3, -0.7);
  EXPECT_EQ(adam.Step(p, Eigen::Vector2d(5, 5)), Eigen::VectorXd(p));
}

TEST(AdamTest, MinimizesQuadratic) {
  Adam adam(2, 0.05);
  Eigen::VectorXd p = Eigen::Vector2d(3, -2);
  for (int k = 0; k < 2000; ++k) p = adam.Step(p, 2 * p);
  EXPECT_LT(p.norm(), 1e-2);
}

}  // namespace
}  // namespace lpmbd
