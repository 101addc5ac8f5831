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

#include <cmath>
#include <iomanip>
#include <limits>
#include <string>

namespace lpmbd {

FeedforwardNet::FeedforwardNet(std::vector<int> sizes) : sizes_(std::move(sizes)) {
  CheckSizes();
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    weights_.push_back(Eigen::MatrixXd::Zero(sizes_[l + 1], sizes_[l]));
    biases_.push_back(Eigen::VectorXd::Zero(sizes_[l + 1]));
  }
}

FeedforwardNet::FeedforwardNet(std::vector<int> sizes, Rng& rng,
                               double init_scale)
    : FeedforwardNet(std::move(sizes)) {
  std::normal_distribution<double> normal(0.0, 1.0);
  for (auto& w : weights_) {
    const double scale = init_scale / std::sqrt(static_cast<double>(w.cols()));
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      for (Eigen::Index i = 0; i < w.rows(); ++i) w(i, j) = scale * normal(rng);
    }
  }
}

void FeedforwardNet::CheckSizes() const {
  if (sizes_.size() < 2) throw ParameterError("net needs at least two layer sizes");
  for (int s : sizes_) {
    if (s < 1) throw ParameterError("layer sizes must be positive");
  }
}

Eigen::Index FeedforwardNet::num_params() const {
  Eigen::Index n = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    n += weights_[l].size() + biases_[l].size();
  }
  return n;
}

Eigen::VectorXd FeedforwardNet::params() const {
  Eigen::VectorXd flat(num_params());
  Eigen::Index o = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    const auto& w = weights_[l];
    flat.segment(o, w.size()) = Eigen::Map<const Eigen::VectorXd>(w.data(), w.size());
    o += w.size();
    flat.segment(o, biases_[l].size()) = biases_[l];
    o += biases_[l].size();
  }
  return flat;
}

void FeedforwardNet::set_params(const Eigen::VectorXd& flat) {
  if (flat.size() != num_params()) {
    throw ParameterError("parameter vector has the wrong size");
  }
  Eigen::Index o = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    auto& w = weights_[l];
    Eigen::Map<Eigen::VectorXd>(w.data(), w.size()) = flat.segment(o, w.size());
    o += w.size();
    biases_[l] = flat.segment(o, biases_[l].size());
    o += biases_[l].size();
  }
}

Eigen::VectorXd FeedforwardNet::Forward(const Eigen::VectorXd& input) const {
  Cache cache;
  return Forward(input, cache);
}

Eigen::VectorXd FeedforwardNet::Forward(const Eigen::VectorXd& input,
                                        Cache& cache) const {
  if (input.size() != input_dim()) {
    throw ParameterError("net input has size " + std::to_string(input.size()) +
                         ", expected " + std::to_string(input_dim()));
  }
  cache.activations.clear();
  cache.activations.push_back(input);
  for (int l = 0; l < num_layers(); ++l) {
    Eigen::VectorXd z = weights_[l] * cache.activations.back() + biases_[l];
    if (l + 1 < num_layers()) z = z.array().tanh();
    cache.activations.push_back(std::move(z));
  }
  return cache.activations.back();
}

FeedforwardNet::Gradients FeedforwardNet::Backward(
    const Cache& cache, const Eigen::VectorXd& output_grad) const {
  if (cache.activations.size() != weights_.size() + 1) {
    throw std::logic_error("Backward needs the cache of a Forward call");
  }
  Gradients g;
  g.params.resize(num_params());
  std::vector<Eigen::Index> offsets(weights_.size());
  Eigen::Index o = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    offsets[l] = o;
    o += weights_[l].size() + biases_[l].size();
  }
  Eigen::VectorXd delta = output_grad;  // dL/dz of the current layer
  for (int l = num_layers() - 1; l >= 0; --l) {
    const Eigen::VectorXd& in = cache.activations[l];
    const Eigen::MatrixXd dw = delta * in.transpose();
    g.params.segment(offsets[l], dw.size()) =
        Eigen::Map<const Eigen::VectorXd>(dw.data(), dw.size());
    g.params.segment(offsets[l] + dw.size(), delta.size()) = delta;
    Eigen::VectorXd back = weights_[l].transpose() * delta;
    if (l > 0) {
      // in = tanh(z_prev), d tanh = 1 - tanh^2
      back = back.cwiseProduct((1.0 - in.array().square()).matrix());
    }
    delta = std::move(back);
  }
  g.input = std::move(delta);
  return g;
}

void FeedforwardNet::Save(std::ostream& out) const {
  out << "ffn " << sizes_.size();
  for (int s : sizes_) out << ' ' << s;
  out << '\n' << std::setprecision(std::numeric_limits<double>::max_digits10);
  const Eigen::VectorXd flat = params();
  for (Eigen::Index i = 0; i < flat.size(); ++i) out << flat[i] << '\n';
}

FeedforwardNet FeedforwardNet::Load(std::istream& in) {
  std::string tag;
  std::size_t n = 0;
  if (!(in >> tag >> n) || tag != "ffn") {
    throw ParameterError("not a network dump (missing 'ffn' header)");
  }
  std::vector<int> sizes(n);
  for (auto& s : sizes) {
    if (!(in >> s)) throw ParameterError("truncated network header");
  }
  FeedforwardNet net(sizes);
  Eigen::VectorXd flat(net.num_params());
  for (Eigen::Index i = 0; i < flat.size(); ++i) {
    if (!(in >> flat[i])) throw ParameterError("truncated network parameters");
  }
  net.set_params(flat);
  return net;
}

Adam::Adam(Eigen::Index n, double learning_rate, double beta1, double beta2,
           double eps)
    : lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(eps),
      m_(Eigen::VectorXd::Zero(n)), v_(Eigen::VectorXd::Zero(n)) {}

Eigen::VectorXd Adam::Step(const Eigen::VectorXd& params,
                           const Eigen::VectorXd& grad, bool maximize) {
  ++t_;
  const Eigen::VectorXd g = maximize ? Eigen::VectorXd(-grad) : grad;
  m_ = beta1_ * m_ + (1.0 - beta1_) * g;
  v_ = beta2_ * v_ + (1.0 - beta2_) * g.cwiseAbs2();
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  const Eigen::ArrayXd step =
      lr_ * (m_.array() / c1) / ((v_.array() / c2).sqrt() + eps_);
  return params - step.matrix();
}

}  // namespace lpmbd
