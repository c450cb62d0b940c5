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

#include "loomcas/geometry.hpp"

#include "loomcas/errors.hpp"

#include <algorithm>
#include <cmath>

namespace loomcas {

double wrap_angle(double theta)
{
  if (!std::isfinite(theta))
    throw DomainError("wrap_angle: non-finite angle");
  // IEEE remainder is exact and odd-symmetric; its result lies in [-pi, pi].
  return std::remainder(theta, 2.0 * kPi);
}

namespace {

struct Derivative
{
  double dx, dy, dpsi, dv;
};

Derivative unicycle_rhs(double psi, double v, double turn_rate, double accel)
{
  return {v * std::cos(psi), v * std::sin(psi), turn_rate, accel};
}

} // namespace

VehicleState step_unicycle(const VehicleState& s, double turn_rate, double accel, double dt)
{
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw DomainError("step_unicycle: dt must be positive and finite");
  if (!std::isfinite(s.x) || !std::isfinite(s.y) || !std::isfinite(s.psi) ||
      !std::isfinite(s.v) || !std::isfinite(turn_rate) || !std::isfinite(accel))
    throw DomainError("step_unicycle: non-finite input");

  const double h = dt;
  const Derivative k1 = unicycle_rhs(s.psi, s.v, turn_rate, accel);
  const Derivative k2 = unicycle_rhs(
    s.psi + 0.5 * h * k1.dpsi, s.v + 0.5 * h * k1.dv, turn_rate, accel);
  const Derivative k3 = unicycle_rhs(
    s.psi + 0.5 * h * k2.dpsi, s.v + 0.5 * h * k2.dv, turn_rate, accel);
  const Derivative k4 = unicycle_rhs(
    s.psi + h * k3.dpsi, s.v + h * k3.dv, turn_rate, accel);

  VehicleState out;
  out.x = s.x + h / 6.0 * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx);
  out.y = s.y + h / 6.0 * (k1.dy + 2.0 * k2.dy + 2.0 * k3.dy + k4.dy);
  out.psi = wrap_angle(s.psi + h * turn_rate);
  // accel == 0 leaves v bit-identical.
  out.v = accel == 0.0 ? s.v : std::max(0.0, s.v + h * accel);
  return out;
}

RelativeGeometry relative_geometry(
  const VehicleState& robot,
  const VehicleState& obstacle,
  const AgentRates& robot_rates,
  const AgentRates& obstacle_rates)
{
  const double dx = obstacle.x - robot.x;
  const double dy = obstacle.y - robot.y;
  const double rho = std::hypot(dx, dy);
  if (!std::isfinite(rho))
    throw DomainError("relative_geometry: non-finite state");
  if (rho == 0.0)
    throw CoincidenceError("relative_geometry: robot and obstacle coincide");

  RelativeGeometry g;
  g.rho = rho;
  g.lambda = std::atan2(dy, dx);

  const double rel_r = robot.psi - g.lambda;
  const double rel_o = obstacle.psi - g.lambda;
  const double cr = std::cos(rel_r), sr = std::sin(rel_r);
  const double co = std::cos(rel_o), so = std::sin(rel_o);

  g.rho_dot = obstacle.v * co - robot.v * cr;
  g.lambda_dot = (obstacle.v * so - robot.v * sr) / rho;
  g.rho_ddot = robot.v * sr * (robot_rates.turn_rate - g.lambda_dot)
             - robot_rates.accel * cr
             - obstacle.v * so * (obstacle_rates.turn_rate - g.lambda_dot)
             + obstacle_rates.accel * co;
  return g;
}

} // namespace loomcas
