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

#ifndef LPMBD_VEHICLE_ENV_H_
#define LPMBD_VEHICLE_ENV_H_

#include <cstdint>
#include <functional>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "lpmbd/common.h"
#include "lpmbd/target.h"

namespace lpmbd {

// Kinematic vehicle: position (m), yaw (rad, wrapped to (-pi, pi]), speed.
struct VehicleState {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
  double v = 0.0;
};

// Acceleration (m/s^2) and steering rate (rad/s).
struct Control {
  double a = 0.0;
  double w = 0.0;
};

double WrapAngle(double angle);

// Axis-aligned rectangle.
struct Obstacle {
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  Eigen::Vector2d half_extents = Eigen::Vector2d::Constant(0.8);

  // Euclidean distance from p to the rectangle (0 inside).
  double Distance(const Eigen::Vector2d& p) const;
  bool Collides(const Eigen::Vector2d& p, double inflation) const {
    return Distance(p) <= inflation;
  }
};

enum class PathKind { kSCurve, kOval };

const char* ToString(PathKind kind);
PathKind ParsePathKind(const std::string& name);  // throws ParameterError

// Densely sampled reference; `headings[k]` is the tangent yaw at points[k].
struct ReferencePath {
  PathKind kind = PathKind::kSCurve;
  bool closed = false;
  std::vector<Eigen::Vector2d> points;
  std::vector<double> headings;

  int size() const { return static_cast<int>(points.size()); }
  const Eigen::Vector2d& start() const { return points.front(); }
  const Eigen::Vector2d& goal() const { return points.back(); }
  double MaxGap() const;
};

// S-curve: y = 4 sin(2 pi x / 40) for x in [0, 100], dx = 0.05.
// Oval: ellipse with semi-axes 20 x 10 around the origin, counterclockwise
// from (20, 0), 2000 samples.
ReferencePath MakeReference(PathKind kind);

// Plain-text waypoints, one "x y" pair per line. Headings are recomputed by
// finite differences on load.
void WriteWaypoints(std::ostream& out, const ReferencePath& path);
ReferencePath ReadWaypoints(std::istream& in, PathKind kind, bool closed);

struct RefInfo {
  double theta_ref = 0.0;
  // Signed lateral offset, positive to the left of the path tangent.
  double d_lat = 0.0;
  int index = 0;
};

// Exhaustive nearest sample (lowest index wins ties).
RefInfo NearestReference(const ReferencePath& path, const Eigen::Vector2d& p);

// Hill-climbs from `hint` to a local nearest sample. Used on rollouts, where
// consecutive queries move a few samples at a time.
RefInfo NearestReferenceFrom(const ReferencePath& path,
                             const Eigen::Vector2d& p, int hint);

struct EnvConfig {
  double dt = 0.1;
  double a_min = -3.0, a_max = 3.0;
  double w_min = -0.6, w_max = 0.6;
  double w_lat = 1.0, w_yaw = 0.5, w_v = 1.0, w_collision = 100.0;
  Obstacle obstacle;
  double safety_radius = 0.5;
  PathKind reference = PathKind::kSCurve;
  double v_ref = 2.0;
  int episode_len = 400;
  // Physical units per decision unit: u = clamp(y * scale).
  double a_scale = 3.0, w_scale = 0.6;
  int horizon = 50;

  Control Clamp(const Control& u) const;
  Control FromDecision(double ya, double yw) const;
};

// Defaults for a reference kind, including the obstacle placed on the path.
EnvConfig DefaultEnvConfig(PathKind kind);

// Forward-Euler kinematics.
VehicleState StepDynamics(const VehicleState& s, const Control& u, double dt);

double Reward(const VehicleState& s, const RefInfo& ref, bool collided,
              const EnvConfig& cfg);

struct Observation {
  double d_lat = 0.0;
  double d_theta = 0.0;
  double d_vel = 0.0;
  double dx_obs = 0.0;
  double dy_obs = 0.0;

  static constexpr int kDim = 5;
  Eigen::VectorXd AsVector() const;
  // Divided by fixed scales (2 m, 0.5 rad, 1 m/s, 5 m, 5 m) and clipped to
  // [-4, 4]; this is what the scheduler policy sees.
  Eigen::VectorXd Normalized() const;
};

Observation Observe(const VehicleState& s, const ReferencePath& path,
                    const Obstacle& obstacle, const EnvConfig& cfg);

class VehicleEnv {
 public:
  explicit VehicleEnv(EnvConfig cfg);
  VehicleEnv(EnvConfig cfg, ReferencePath path);

  struct StepResult {
    double reward = 0.0;
    bool collided = false;
    RefInfo ref;
  };

  // Vehicle at the path start, aligned with the tangent, at v_ref.
  void Reset();
  StepResult Step(const Control& u);

  const VehicleState& state() const { return state_; }
  const ReferencePath& path() const { return path_; }
  const EnvConfig& config() const { return cfg_; }
  const RefInfo& ref() const { return ref_; }
  int time_step() const { return t_; }
  bool done() const { return t_ >= cfg_.episode_len; }
  Observation observation() const;
  double ObstacleDistance() const;

 private:
  EnvConfig cfg_;
  ReferencePath path_;
  VehicleState state_;
  RefInfo ref_;
  int t_ = 0;
};

// Rolls a normalized H x 2 control sequence forward from `s`; one row
// (x, y, theta, v) per step after each control.
StateTrajectory RolloutVehicle(const VehicleState& s, const DecisionVector& y,
                               const EnvConfig& cfg);

// Planning target over the next `cfg.horizon` controls: the mean stage
// penalty (negated reward) along the rollout.
TargetDensity MakeTrackingTarget(const VehicleEnv& env, double temperature = 0.1);

struct PlanDecision {
  Control u;
  int steps_chosen = 0;
  double sigma_chosen = 0.0;
};

// Maps the environment (and a per-step seed) to the control to apply.
using EpisodePlanner =
    std::function<PlanDecision(const VehicleEnv& env, std::uint64_t step_seed)>;

struct EpisodeLogRow {
  int step = 0;
  VehicleState state;  // after the control is applied
  Control u;
  double reward = 0.0;
  double d_lat = 0.0;
  int steps_chosen = 0;
  double sigma_chosen = 0.0;
  double plan_time_ms = 0.0;
  // Not part of the CSV schema; recomputable from (x, y) and the obstacle.
  bool collided = false;
  double obstacle_distance = 0.0;
};

struct EpisodeResult {
  double total_reward = 0.0;
  int collisions = 0;
  std::vector<EpisodeLogRow> log;
};

// Steps the environment for cfg.episode_len steps. Step k plans with seed
// MixSeed(seed ^ MixSeed(k)). With `record_timing` unset, plan_time_ms is 0
// so logs are byte-identical across runs.
EpisodeResult RunEpisode(const EpisodePlanner& planner, const EnvConfig& cfg,
                         std::uint64_t seed, bool record_timing = true);
EpisodeResult RunEpisode(const EpisodePlanner& planner, VehicleEnv env,
                         std::uint64_t seed, bool record_timing = true);

std::uint64_t EpisodeStepSeed(std::uint64_t seed, int step);

void WriteEpisodeCsv(std::ostream& out, const std::vector<EpisodeLogRow>& log);
std::vector<EpisodeLogRow> ReadEpisodeCsv(std::istream& in);

}  // namespace lpmbd

#endif  // LPMBD_VEHICLE_ENV_H_
