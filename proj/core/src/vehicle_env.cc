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

#include "lpmbd/vehicle_env.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "lpmbd/csv.h"

namespace lpmbd {
namespace {

constexpr double kPi = std::numbers::pi;

int WrapIndex(const ReferencePath& path, int i) {
  const int n = path.size();
  if (path.closed) return ((i % n) + n) % n;
  return std::clamp(i, 0, n - 1);
}

RefInfo MakeRefInfo(const ReferencePath& path, const Eigen::Vector2d& p, int k) {
  const double heading = path.headings[k];
  const Eigen::Vector2d o = p - path.points[k];
  RefInfo info;
  info.index = k;
  info.theta_ref = heading;
  info.d_lat = std::cos(heading) * o.y() - std::sin(heading) * o.x();
  return info;
}

std::vector<double> FiniteDifferenceHeadings(const std::vector<Eigen::Vector2d>& pts,
                                             bool closed) {
  const int n = static_cast<int>(pts.size());
  std::vector<double> headings(n);
  for (int k = 0; k < n; ++k) {
    int lo = k - 1, hi = k + 1;
    if (closed) {
      lo = (lo + n) % n;
      hi = hi % n;
    } else {
      lo = std::max(lo, 0);
      hi = std::min(hi, n - 1);
    }
    const Eigen::Vector2d d = pts[hi] - pts[lo];
    headings[k] = std::atan2(d.y(), d.x());
  }
  return headings;
}

}  // namespace

double WrapAngle(double angle) {
  double a = std::remainder(angle, 2.0 * kPi);  // [-pi, pi]
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

double Obstacle::Distance(const Eigen::Vector2d& p) const {
  const Eigen::Vector2d d =
      ((p - center).cwiseAbs() - half_extents).cwiseMax(0.0);
  return d.norm();
}

const char* ToString(PathKind kind) {
  return kind == PathKind::kSCurve ? "s_curve" : "oval";
}

PathKind ParsePathKind(const std::string& name) {
  if (name == "s_curve") return PathKind::kSCurve;
  if (name == "oval") return PathKind::kOval;
  throw ParameterError("unknown reference path '" + name +
                       "' (expected s_curve or oval)");
}

double ReferencePath::MaxGap() const {
  double gap = 0.0;
  for (int k = 1; k < size(); ++k) {
    gap = std::max(gap, (points[k] - points[k - 1]).norm());
  }
  return gap;
}

ReferencePath MakeReference(PathKind kind) {
  ReferencePath path;
  path.kind = kind;
  if (kind == PathKind::kSCurve) {
    constexpr double kAmp = 4.0, kPeriod = 40.0, kLength = 100.0, kDx = 0.05;
    const int n = static_cast<int>(std::lround(kLength / kDx)) + 1;
    for (int k = 0; k < n; ++k) {
      const double x = k * kDx;
      const double phase = 2.0 * kPi * x / kPeriod;
      path.points.emplace_back(x, kAmp * std::sin(phase));
      path.headings.push_back(
          std::atan(kAmp * 2.0 * kPi / kPeriod * std::cos(phase)));
    }
  } else {
    constexpr double kA = 20.0, kB = 10.0;
    constexpr int kN = 2000;
    path.closed = true;
    for (int k = 0; k < kN; ++k) {
      const double s = 2.0 * kPi * k / kN;
      path.points.emplace_back(kA * std::cos(s), kB * std::sin(s));
      path.headings.push_back(std::atan2(kB * std::cos(s), -kA * std::sin(s)));
    }
  }
  return path;
}

void WriteWaypoints(std::ostream& out, const ReferencePath& path) {
  for (const auto& p : path.points) {
    out << FormatNumber(p.x()) << ' ' << FormatNumber(p.y()) << '\n';
  }
}

ReferencePath ReadWaypoints(std::istream& in, PathKind kind, bool closed) {
  ReferencePath path;
  path.kind = kind;
  path.closed = closed;
  double x = 0.0, y = 0.0;
  while (in >> x >> y) path.points.emplace_back(x, y);
  if (path.points.size() < 2) {
    throw ParameterError("waypoint file needs at least two points");
  }
  path.headings = FiniteDifferenceHeadings(path.points, closed);
  return path;
}

RefInfo NearestReference(const ReferencePath& path, const Eigen::Vector2d& p) {
  int best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (int k = 0; k < path.size(); ++k) {
    const double d2 = (path.points[k] - p).squaredNorm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best = k;
    }
  }
  return MakeRefInfo(path, p, best);
}

RefInfo NearestReferenceFrom(const ReferencePath& path,
                             const Eigen::Vector2d& p, int hint) {
  int k = WrapIndex(path, hint);
  double d2 = (path.points[k] - p).squaredNorm();
  for (int dir : {1, -1}) {
    for (;;) {
      const int next = WrapIndex(path, k + dir);
      if (next == k) break;
      const double nd2 = (path.points[next] - p).squaredNorm();
      if (nd2 >= d2) break;
      k = next;
      d2 = nd2;
    }
  }
  return MakeRefInfo(path, p, k);
}

Control EnvConfig::Clamp(const Control& u) const {
  return {std::clamp(u.a, a_min, a_max), std::clamp(u.w, w_min, w_max)};
}

Control EnvConfig::FromDecision(double ya, double yw) const {
  return Clamp({ya * a_scale, yw * w_scale});
}

EnvConfig DefaultEnvConfig(PathKind kind) {
  EnvConfig cfg;
  cfg.reference = kind;
  if (kind == PathKind::kSCurve) {
    cfg.obstacle.center = Eigen::Vector2d(30.0, -4.0);  // trough of the S
  } else {
    cfg.obstacle.center = Eigen::Vector2d(0.0, 10.0);   // top of the oval
  }
  return cfg;
}

VehicleState StepDynamics(const VehicleState& s, const Control& u, double dt) {
  VehicleState n;
  n.x = s.x + s.v * std::cos(s.theta) * dt;
  n.y = s.y + s.v * std::sin(s.theta) * dt;
  n.theta = WrapAngle(s.theta + u.w * dt);
  n.v = s.v + u.a * dt;
  return n;
}

double Reward(const VehicleState& s, const RefInfo& ref, bool collided,
              const EnvConfig& cfg) {
  const double d_theta = WrapAngle(s.theta - ref.theta_ref);
  const double d_v = s.v - cfg.v_ref;
  return -cfg.w_lat * std::abs(ref.d_lat) - cfg.w_yaw * d_theta * d_theta -
         cfg.w_v * d_v * d_v - (collided ? cfg.w_collision : 0.0);
}

Eigen::VectorXd Observation::AsVector() const {
  Eigen::VectorXd v(kDim);
  v << d_lat, d_theta, d_vel, dx_obs, dy_obs;
  return v;
}

Eigen::VectorXd Observation::Normalized() const {
  Eigen::VectorXd v(kDim);
  v << d_lat / 2.0, d_theta / 0.5, d_vel / 1.0, dx_obs / 5.0, dy_obs / 5.0;
  return v.cwiseMax(-4.0).cwiseMin(4.0);
}

Observation Observe(const VehicleState& s, const ReferencePath& path,
                    const Obstacle& obstacle, const EnvConfig& cfg) {
  const RefInfo ref = NearestReference(path, Eigen::Vector2d(s.x, s.y));
  Observation o;
  o.d_lat = ref.d_lat;
  o.d_theta = WrapAngle(s.theta - ref.theta_ref);
  o.d_vel = s.v - cfg.v_ref;
  o.dx_obs = obstacle.center.x() - s.x;
  o.dy_obs = obstacle.center.y() - s.y;
  return o;
}

VehicleEnv::VehicleEnv(EnvConfig cfg)
    : VehicleEnv(cfg, MakeReference(cfg.reference)) {}

VehicleEnv::VehicleEnv(EnvConfig cfg, ReferencePath path)
    : cfg_(std::move(cfg)), path_(std::move(path)) {
  if (!(cfg_.dt > 0.0)) throw ParameterError("dt must be > 0");
  if (cfg_.w_lat < 0 || cfg_.w_yaw < 0 || cfg_.w_v < 0 || cfg_.w_collision < 0) {
    throw ParameterError("reward weights must be >= 0");
  }
  if (path_.points.empty()) throw ParameterError("empty reference path");
  Reset();
}

void VehicleEnv::Reset() {
  state_ = {path_.start().x(), path_.start().y(), path_.headings.front(),
            cfg_.v_ref};
  ref_ = NearestReference(path_, path_.start());
  t_ = 0;
}

VehicleEnv::StepResult VehicleEnv::Step(const Control& u) {
  state_ = StepDynamics(state_, cfg_.Clamp(u), cfg_.dt);
  const Eigen::Vector2d p(state_.x, state_.y);
  ref_ = NearestReference(path_, p);
  StepResult r;
  r.ref = ref_;
  r.collided = cfg_.obstacle.Collides(p, cfg_.safety_radius);
  r.reward = Reward(state_, ref_, r.collided, cfg_);
  ++t_;
  return r;
}

Observation VehicleEnv::observation() const {
  return Observe(state_, path_, cfg_.obstacle, cfg_);
}

double VehicleEnv::ObstacleDistance() const {
  return cfg_.obstacle.Distance(Eigen::Vector2d(state_.x, state_.y));
}

StateTrajectory RolloutVehicle(const VehicleState& s, const DecisionVector& y,
                               const EnvConfig& cfg) {
  const Eigen::Index h = y.size() / 2;
  StateTrajectory states(h, 4);
  VehicleState cur = s;
  for (Eigen::Index k = 0; k < h; ++k) {
    cur = StepDynamics(cur, cfg.FromDecision(y[2 * k], y[2 * k + 1]), cfg.dt);
    states.row(k) << cur.x, cur.y, cur.theta, cur.v;
  }
  return states;
}

TargetDensity MakeTrackingTarget(const VehicleEnv& env, double temperature) {
  const EnvConfig& cfg = env.config();
  const ReferencePath* path = &env.path();
  const VehicleState start = env.state();
  const int hint = env.ref().index;

  TargetDensity t;
  t.name = "vehicle_tracking";
  t.dim = 2 * cfg.horizon;
  t.temperature = temperature;
  t.rollout = [start, cfg](const DecisionVector& y) {
    return RolloutVehicle(start, y, cfg);
  };
  t.cost = [cfg, path, hint](const DecisionVector&, const StateTrajectory& xs) {
    double total = 0.0;
    int k_ref = hint;
    for (Eigen::Index k = 0; k < xs.rows(); ++k) {
      const Eigen::Vector2d p(xs(k, 0), xs(k, 1));
      const RefInfo ref = NearestReferenceFrom(*path, p, k_ref);
      k_ref = ref.index;
      const VehicleState s{xs(k, 0), xs(k, 1), xs(k, 2), xs(k, 3)};
      const bool hit = cfg.obstacle.Collides(p, cfg.safety_radius);
      total -= Reward(s, ref, hit, cfg);
    }
    return xs.rows() > 0 ? total / static_cast<double>(xs.rows()) : 0.0;
  };
  return t;
}

std::uint64_t EpisodeStepSeed(std::uint64_t seed, int step) {
  return MixSeed(seed ^ MixSeed(static_cast<std::uint64_t>(step) + 1));
}

EpisodeResult RunEpisode(const EpisodePlanner& planner, const EnvConfig& cfg,
                         std::uint64_t seed, bool record_timing) {
  return RunEpisode(planner, VehicleEnv(cfg), seed, record_timing);
}

EpisodeResult RunEpisode(const EpisodePlanner& planner, VehicleEnv env,
                         std::uint64_t seed, bool record_timing) {
  env.Reset();
  EpisodeResult result;
  result.log.reserve(env.config().episode_len);
  while (!env.done()) {
    const int k = env.time_step();
    const auto t0 = std::chrono::steady_clock::now();
    const PlanDecision decision = planner(env, EpisodeStepSeed(seed, k));
    const auto t1 = std::chrono::steady_clock::now();
    const Control u = env.config().Clamp(decision.u);
    const auto step = env.Step(u);

    EpisodeLogRow row;
    row.step = k;
    row.state = env.state();
    row.u = u;
    row.reward = step.reward;
    row.d_lat = step.ref.d_lat;
    row.steps_chosen = decision.steps_chosen;
    row.sigma_chosen = decision.sigma_chosen;
    row.plan_time_ms =
        record_timing
            ? std::chrono::duration<double, std::milli>(t1 - t0).count()
            : 0.0;
    row.collided = step.collided;
    row.obstacle_distance = env.ObstacleDistance();
    result.total_reward += step.reward;
    result.collisions += step.collided ? 1 : 0;
    result.log.push_back(row);
  }
  return result;
}

void WriteEpisodeCsv(std::ostream& out, const std::vector<EpisodeLogRow>& log) {
  CsvWriter csv(out, {"step", "x", "y", "theta", "v", "a", "w", "reward",
                      "d_lat", "T_chosen", "sigma_chosen", "plan_time_ms"});
  for (const auto& r : log) {
    csv << r.step << r.state.x << r.state.y << r.state.theta << r.state.v
        << r.u.a << r.u.w << r.reward << r.d_lat << r.steps_chosen
        << r.sigma_chosen << r.plan_time_ms;
    csv.EndRow();
  }
}

std::vector<EpisodeLogRow> ReadEpisodeCsv(std::istream& in) {
  const CsvTable table = ReadCsv(in);
  std::vector<EpisodeLogRow> log(table.rows.size());
  for (std::size_t k = 0; k < log.size(); ++k) {
    auto& r = log[k];
    r.step = static_cast<int>(table.Number(k, "step"));
    r.state = {table.Number(k, "x"), table.Number(k, "y"),
               table.Number(k, "theta"), table.Number(k, "v")};
    r.u = {table.Number(k, "a"), table.Number(k, "w")};
    r.reward = table.Number(k, "reward");
    r.d_lat = table.Number(k, "d_lat");
    r.steps_chosen = static_cast<int>(table.Number(k, "T_chosen"));
    r.sigma_chosen = table.Number(k, "sigma_chosen");
    r.plan_time_ms = table.Number(k, "plan_time_ms");
  }
  return log;
}

}  // namespace lpmbd
