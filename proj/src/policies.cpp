/*
 * Copyright (C) 2026 The loomcas Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
*/

#include "loomcas/errors.hpp"
#include "loomcas/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace loomcas {

PathPoint ReferencePath::at(double t) const
{
  if (kind == Kind::Polynomial) {
    auto horner = [t](const std::vector<double>& c) {
      double acc = 0.0;
      for (auto it = c.rbegin(); it != c.rend(); ++it)
        acc = acc * t + *it;
      return acc;
    };
    return {horner(x_coeffs), horner(y_coeffs)};
  }

  if (t <= waypoints.front().t)
    return {waypoints.front().x, waypoints.front().y};
  if (t >= waypoints.back().t)
    return {waypoints.back().x, waypoints.back().y};
  auto hi = std::upper_bound(waypoints.begin(), waypoints.end(), t,
    [](double tv, const TimedWaypoint& w) { return tv < w.t; });
  auto lo = hi - 1;
  const double s = (t - lo->t) / (hi->t - lo->t);
  return {lo->x + s * (hi->x - lo->x), lo->y + s * (hi->y - lo->y)};
}

void ReferencePath::validate() const
{
  if (kind == Kind::Polynomial) {
    if (x_coeffs.empty() || y_coeffs.empty())
      throw ConfigError("reference_path: polynomial needs x and y coefficients");
    return;
  }
  if (waypoints.empty())
    throw ConfigError("reference_path: waypoint path needs at least one point");
  for (std::size_t i = 1; i < waypoints.size(); ++i)
    if (!(waypoints[i].t > waypoints[i - 1].t))
      throw ConfigError("reference_path: waypoint times must increase strictly");
}

double cross_track_error(const ReferencePath& path, PathPoint p, double t0, double t1,
                         double resolution)
{
  double best = std::numeric_limits<double>::infinity();
  PathPoint prev = path.at(t0);
  best = std::hypot(p.x - prev.x, p.y - prev.y);
  for (double t = t0 + resolution; t <= t1 + 0.5 * resolution; t += resolution) {
    const PathPoint cur = path.at(std::min(t, t1));
    // Distance to the chord between consecutive samples.
    const double sx = cur.x - prev.x, sy = cur.y - prev.y;
    const double len2 = sx * sx + sy * sy;
    double u = len2 > 0.0 ? ((p.x - prev.x) * sx + (p.y - prev.y) * sy) / len2 : 0.0;
    u = std::clamp(u, 0.0, 1.0);
    best = std::min(best, std::hypot(p.x - (prev.x + u * sx), p.y - (prev.y + u * sy)));
    prev = cur;
  }
  return best;
}

std::string to_string(PolicyKind kind)
{
  switch (kind) {
    case PolicyKind::Static: return "static";
    case PolicyKind::HeadOn: return "head_on";
    case PolicyKind::Pursuit: return "pursuit";
    case PolicyKind::ZigZag: return "zig_zag";
    case PolicyKind::ScriptedWaypoints: return "scripted_waypoints";
    case PolicyKind::External: return "external";
  }
  return "unknown";
}

PolicyKind policy_kind_from_string(const std::string& id)
{
  for (PolicyKind k : {PolicyKind::Static, PolicyKind::HeadOn, PolicyKind::Pursuit,
                       PolicyKind::ZigZag, PolicyKind::ScriptedWaypoints, PolicyKind::External})
    if (to_string(k) == id)
      return k;
  throw ConfigError("unknown obstacle policy id '" + id + "'");
}

namespace {

double steer_towards(double heading_now, double heading_goal, double gain)
{
  return gain * wrap_angle(heading_goal - heading_now);
}

class StaticPolicy : public ObstaclePolicy
{
public:
  ObstacleIntent command(double, const VehicleState& self, const VehicleState&) override
  {
    return {0.0, self.v};
  }
  PolicyKind kind() const override { return PolicyKind::Static; }
};

class HeadOnPolicy : public ObstaclePolicy
{
public:
  explicit HeadOnPolicy(std::optional<double> speed) : speed_(speed) {}
  ObstacleIntent command(double, const VehicleState& self, const VehicleState&) override
  {
    return {0.0, speed_.value_or(self.v)};
  }
  PolicyKind kind() const override { return PolicyKind::HeadOn; }

private:
  std::optional<double> speed_;
};

class PursuitPolicy : public ObstaclePolicy
{
public:
  PursuitPolicy(std::optional<double> speed, double gain, double start)
    : speed_(speed), gain_(gain), start_(start) {}

  ObstacleIntent command(double t, const VehicleState& self, const VehicleState& robot) override
  {
    const double speed = speed_.value_or(self.v);
    if (t < start_)
      return {0.0, speed};
    const double bearing = std::atan2(robot.y - self.y, robot.x - self.x);
    return {steer_towards(self.psi, bearing, gain_), speed};
  }
  PolicyKind kind() const override { return PolicyKind::Pursuit; }

private:
  std::optional<double> speed_;
  double gain_;
  double start_;
};

class ZigZagPolicy : public ObstaclePolicy
{
public:
  ZigZagPolicy(const ObstaclePolicySpec& spec, double base_heading)
    : speed_(spec.speed), gain_(spec.gain), period_(spec.period),
      amplitude_(spec.amplitude), base_(base_heading), start_(spec.start_time) {}

  // Square-wave heading set-point: +amplitude for the first half period, then -amplitude.
  double setpoint(double t) const
  {
    const double phase = std::fmod(std::max(0.0, t - start_), period_);
    return wrap_angle(base_ + (phase < 0.5 * period_ ? amplitude_ : -amplitude_));
  }

  ObstacleIntent command(double t, const VehicleState& self, const VehicleState&) override
  {
    const double speed = speed_.value_or(self.v);
    if (t < start_)
      return {0.0, speed};
    return {steer_towards(self.psi, setpoint(t), gain_), speed};
  }
  PolicyKind kind() const override { return PolicyKind::ZigZag; }

private:
  std::optional<double> speed_;
  double gain_, period_, amplitude_, base_, start_;
};

class WaypointPolicy : public ObstaclePolicy
{
public:
  explicit WaypointPolicy(const ObstaclePolicySpec& spec)
    : speed_(spec.speed), gain_(spec.gain), tolerance_(spec.waypoint_tolerance),
      points_(spec.waypoints) {}

  ObstacleIntent command(double, const VehicleState& self, const VehicleState&) override
  {
    const double speed = speed_.value_or(self.v);
    while (next_ < points_.size() &&
           std::hypot(points_[next_].x - self.x, points_[next_].y - self.y) <= tolerance_)
      ++next_;
    if (next_ >= points_.size())
      return {0.0, 0.0};
    const auto& p = points_[next_];
    return {steer_towards(self.psi, std::atan2(p.y - self.y, p.x - self.x), gain_), speed};
  }
  PolicyKind kind() const override { return PolicyKind::ScriptedWaypoints; }

private:
  std::optional<double> speed_;
  double gain_, tolerance_;
  std::vector<PathPoint> points_;
  std::size_t next_ = 0;
};

} // namespace

ObstacleIntent ExternalPolicy::command(double, const VehicleState& self, const VehicleState&)
{
  if (!command_)
    return {0.0, self.v};
  return *command_;
}

void ExternalPolicy::set_command(double turn_rate, double speed)
{
  command_ = ObstacleIntent{turn_rate, speed};
}

std::unique_ptr<ObstaclePolicy> make_policy(
  const ObstaclePolicySpec& spec, const VehicleState& obstacle_init, const VehicleState& robot_init)
{
  switch (spec.kind) {
    case PolicyKind::Static:
      return std::make_unique<StaticPolicy>();
    case PolicyKind::HeadOn:
      return std::make_unique<HeadOnPolicy>(spec.speed);
    case PolicyKind::Pursuit:
      return std::make_unique<PursuitPolicy>(spec.speed, spec.gain, spec.start_time);
    case PolicyKind::ZigZag: {
      const double base = spec.base_heading.value_or(
        std::atan2(robot_init.y - obstacle_init.y, robot_init.x - obstacle_init.x));
      return std::make_unique<ZigZagPolicy>(spec, base);
    }
    case PolicyKind::ScriptedWaypoints:
      if (spec.waypoints.empty())
        throw ConfigError("scripted_waypoints policy needs waypoints");
      return std::make_unique<WaypointPolicy>(spec);
    case PolicyKind::External:
      return std::make_unique<ExternalPolicy>();
  }
  throw ConfigError("unknown obstacle policy");
}

AgentRates clamp_obstacle_intent(
  const ObstacleIntent& intent, const VehicleState& self, double dt, const EnvelopeBounds& b)
{
  AgentRates rates;
  const double turn = std::isfinite(intent.turn_rate) ? intent.turn_rate : 0.0;
  const double speed = std::isfinite(intent.speed) ? intent.speed : self.v;
  rates.turn_rate = std::clamp(turn, -b.psi_dot_o_max, b.psi_dot_o_max);
  const double target = std::clamp(speed, 0.0, b.v_o_max);
  rates.accel = std::clamp((target - self.v) / dt, -b.a_o_max, b.a_o_max);
  return rates;
}

} // namespace loomcas
