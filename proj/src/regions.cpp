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

#include "loomcas/regions.hpp"

#include "loomcas/errors.hpp"
#include "loomcas/sensing.hpp"

#include <cmath>

namespace loomcas {

EngagementState make_engagement_state(const RelativeGeometry& truth, const VehicleState& robot)
{
  EngagementState x;
  x.x1 = loom(truth.rho, truth.rho_dot);
  x.x2 = truth.lambda;
  x.x3 = truth.lambda_dot;
  x.x4 = 1.0 / truth.rho;
  x.x5 = robot.psi;
  x.x6 = robot.v;
  return x;
}

double delta_t(double x5, double x2, double beta)
{
  if (!(beta > 0.0))
    throw DomainError("delta_t: beta must be positive");
  return (kPi - std::abs(wrap_angle(x5 - x2))) / beta;
}

RegionVerdict classify(const EngagementState& x, const DesignParams& d, const EnvelopeBounds& b)
{
  if (!(x.x4 > 0.0))
    throw DomainError("classify: x4 must be positive");

  const double gamma = d.tau_safe * d.beta + kPi;
  const double heading_gap = std::abs(wrap_angle(x.x5 - x.x2));
  const double dt_buffer = (kPi - heading_gap) / d.beta;
  const double rho = 1.0 / x.x4;

  const double a1_boundary = -1.0 / (d.tau_safe + dt_buffer);
  const double a2_boundary = d.r + (x.x6 + b.v_o_max) * dt_buffer;

  RegionVerdict v;
  v.delta_t = dt_buffer;
  v.in_antitarget = x.x1 <= -1.0 / d.tau_safe || rho <= d.r;
  v.in_avoidance_a1 = x.x1 <= a1_boundary;
  v.in_avoidance_a2 = rho <= a2_boundary;
  // gamma - heading_gap >= gamma - pi = tau_safe * beta > 0.
  v.a1_value = x.x1 + d.beta / (gamma - heading_gap);
  v.a2_value = rho - a2_boundary;
  v.in_conflict = (a1_boundary < x.x1 && x.x1 <= -d.beta / gamma) &&
                  (a2_boundary < rho && rho <= d.omega);
  return v;
}

bool los_rate_bound_check(const EngagementState& x, double los_rate_bound)
{
  return std::abs(x.x3) <= los_rate_bound;
}

} // namespace loomcas
