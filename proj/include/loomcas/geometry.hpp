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

#pragma once

#include <numbers>

namespace loomcas {

inline constexpr double kPi = std::numbers::pi;

// Planar pose and speed of one unicycle agent (robot or obstacle).
struct VehicleState
{
  double x = 0.0;    // m
  double y = 0.0;    // m
  double psi = 0.0;  // rad, wrapped to [-pi, pi]
  double v = 0.0;    // m/s, >= 0
};

// Heading rate and longitudinal acceleration applied to an agent.
struct AgentRates
{
  double turn_rate = 0.0;  // rad/s
  double accel = 0.0;      // m/s^2
};

// Exact relative geometry of the obstacle as seen from the robot.
struct RelativeGeometry
{
  double rho = 0.0;         // m, > 0
  double lambda = 0.0;      // rad, line-of-sight angle in [-pi, pi]
  double rho_dot = 0.0;     // m/s
  double lambda_dot = 0.0;  // rad/s
  double rho_ddot = 0.0;    // m/s^2
};

/// Principal value of an angle, in [-pi, pi]. Throws DomainError on non-finite input.
double wrap_angle(double theta);

/// One RK4 step of x' = v cos psi, y' = v sin psi, psi' = turn_rate, v' = accel.
/// The heading is re-wrapped and the speed clamped at zero afterwards.
VehicleState step_unicycle(const VehicleState& s, double turn_rate, double accel, double dt);

/// Distance, line-of-sight angle and their derivatives.
///
/// rho_ddot uses the supplied heading rates and accelerations of both agents;
/// with the defaults it is the value for constant-velocity motion.
/// Throws CoincidenceError when the agents coincide.
RelativeGeometry relative_geometry(
  const VehicleState& robot,
  const VehicleState& obstacle,
  const AgentRates& robot_rates = {},
  const AgentRates& obstacle_rates = {});

} // namespace loomcas
