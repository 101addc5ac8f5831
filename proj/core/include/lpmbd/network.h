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

#ifndef LPMBD_NETWORK_H_
#define LPMBD_NETWORK_H_

#include <istream>
#include <ostream>
#include <vector>

#include "lpmbd/common.h"

namespace lpmbd {

// Fully connected net: tanh on hidden layers, identity on the output layer.
// Parameters are exposed as one flat vector (layer by layer, W column-major
// then b) so optimizers and finite-difference checks can treat them
// uniformly.
class FeedforwardNet {
 public:
  FeedforwardNet() = default;
  // sizes = {input, hidden..., output}; weights ~ N(0, init_scale^2 / fan_in),
  // biases zero.
  FeedforwardNet(std::vector<int> sizes, Rng& rng, double init_scale = 1.0);
  // All parameters zero.
  explicit FeedforwardNet(std::vector<int> sizes);

  const std::vector<int>& sizes() const { return sizes_; }
  int input_dim() const { return sizes_.front(); }
  int output_dim() const { return sizes_.back(); }
  int num_layers() const { return static_cast<int>(weights_.size()); }
  Eigen::Index num_params() const;

  Eigen::MatrixXd& weight(int layer) { return weights_[layer]; }
  Eigen::VectorXd& bias(int layer) { return biases_[layer]; }
  const Eigen::MatrixXd& weight(int layer) const { return weights_[layer]; }
  const Eigen::VectorXd& bias(int layer) const { return biases_[layer]; }

  Eigen::VectorXd params() const;
  void set_params(const Eigen::VectorXd& flat);

  // Activations of every layer, kept for the backward pass.
  struct Cache {
    std::vector<Eigen::VectorXd> activations;  // [0] = input, back = output
  };

  // Throws ParameterError on an input size mismatch.
  Eigen::VectorXd Forward(const Eigen::VectorXd& input) const;
  Eigen::VectorXd Forward(const Eigen::VectorXd& input, Cache& cache) const;

  struct Gradients {
    Eigen::VectorXd params;  // flat, same layout as params()
    Eigen::VectorXd input;
  };

  // Reverse-mode gradient of <output_grad, Forward(input)>.
  Gradients Backward(const Cache& cache, const Eigen::VectorXd& output_grad) const;

  // Text dump: "ffn <n_sizes> <sizes...>" then one parameter per line.
  void Save(std::ostream& out) const;
  static FeedforwardNet Load(std::istream& in);

 private:
  void CheckSizes() const;

  std::vector<int> sizes_;
  std::vector<Eigen::MatrixXd> weights_;
  std::vector<Eigen::VectorXd> biases_;
};

// Adam on a flat parameter vector; Step() performs gradient *ascent* when
// `maximize` is set.
class Adam {
 public:
  explicit Adam(Eigen::Index n, double learning_rate = 3e-4, double beta1 = 0.9,
                double beta2 = 0.999, double eps = 1e-8);

  Eigen::VectorXd Step(const Eigen::VectorXd& params, const Eigen::VectorXd& grad,
                       bool maximize = false);
  double learning_rate() const { return lr_; }
  void set_learning_rate(double lr) { lr_ = lr; }

 private:
  double lr_, beta1_, beta2_, eps_;
  Eigen::VectorXd m_, v_;
  long t_ = 0;
};

}  // namespace lpmbd

#endif  // LPMBD_NETWORK_H_
