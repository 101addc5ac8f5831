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

#ifndef LPMBD_COMMON_H_
#define LPMBD_COMMON_H_

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace lpmbd {

// Flattened decision variable. For trajectory problems this is the control
// sequence u_{1:H} laid out step-major (u_1[0], u_1[1], ..., u_H[n_u-1]).
using DecisionVector = Eigen::VectorXd;

// Rolled-out states, one row per time step. Empty when a problem has no
// dynamics.
using StateTrajectory = Eigen::MatrixXd;

// Invalid construction parameters (schedules, configs, objectives).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A cost or constraint callback produced a non-finite value.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& what, int candidate)
      : std::runtime_error(what), candidate_(candidate) {}
  int candidate() const { return candidate_; }

 private:
  int candidate_;
};

// Every log-weight in a batch is -inf.
class DegenerateBatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Rng = std::mt19937_64;

// SplitMix64 finalizer; used to derive independent streams from a seed.
inline std::uint64_t MixSeed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic sub-stream `counter` of the run seeded with `seed`.
inline Rng StreamFor(std::uint64_t seed, std::uint64_t counter) {
  return Rng(MixSeed(MixSeed(seed) ^ MixSeed(counter + 0x632be59bd9b4e019ULL)));
}

inline DecisionVector StandardNormal(Eigen::Index dim, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  DecisionVector v(dim);
  for (Eigen::Index k = 0; k < dim; ++k) v[k] = normal(rng);
  return v;
}

}  // namespace lpmbd

#endif  // LPMBD_COMMON_H_
