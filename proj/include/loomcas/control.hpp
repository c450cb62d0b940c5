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

#include "loomcas/geometry.hpp"
#include "loomcas/params.hpp"

#include <optional>
#include <utility>

namespace loomcas {

// Everything the avoidance law may read. There is deliberately no distance
// or inverse-distance field here.
struct MeasurableState
{
  double x1 = 0.0;   // measured loom, 1/s (<= 0)
  double x2 = 0.0;   // measured line-of-sight angle, rad
  double x3 = 0.0;   // measured line-of-sight rate, rad/s
  double x5 = 0.0;   // own heading, rad
  double x6 = 0.0;   // own speed, m/s
  double a_r = 0.0;  // acceleration commanded on the previous tick, m/s^2
};

struct AlphaTerms
{
  int alpha0 = 1;       // +1 / -1, side of the line of sight
  double alpha1 = 0.0;  // 1/s^2, >= 0
  double alpha2 = 0.0;  // rad/s, >= 0 for x1 <= 0
};

struct ControlCommand
{
  double turn_rate = 0.0;     // u, rad/s
  double accel = 0.0;         // u_v, m/s^2
  double ca_component = 0.0;  // u_ca, rad/s (zero when disengaged)
  double tr_component = 0.0;  // u_tr, rad/s
  bool engaged = false;
};

struct TrackingCommand
{
  double u_tr = 0.0;   // rad/s
  double v_cmd = 0.0;  // m/s
};

// Gains of the path-following law u_tr = -heading_gain sin(psi_e),
// V = speed_gain D cos(psi_e).
struct TrackingGains
{
  double heading_gain = 3.0;
  double speed_gain = 1.5;
};

// Loom-threshold hysteresis gate. Owned by one episode loop.
struct GateState
{
  bool engaged = false;
  int engage_events = 0;
  int disengage_events = 0;
};

// Where the loom gate engages the avoidance component.
//  Approach:       as soon as measured loom drops below -h (any sustained approach);
//                  releases when loom returns to zero (obstacle receding).
//  ConflictBound:  at the conflict-region bound -beta / gamma; releases at -beta / gamma + h.
// h = hysteresis_fraction * beta / gamma in both modes.
enum class GateMode { Approach, ConflictBound };

struct ControlOptions
{
  GateMode gate = GateMode::Approach;
  double hysteresis_fraction = 0.05;
  // Explicit engage level on measured loom (1/s); overrides the mode.
  std::optional<double> engage_loom;
  // Actuator limit on u_ca for robustness experiments; unset in certification runs.
  std::optional<double> ca_saturation;
  // Mutation used to check that the monitors are not vacuous.
  bool flip_avoidance_sign = false;
  // Disables the avoidance component entirely (pure tracking baseline).
  bool avoidance_enabled = true;
};

AlphaTerms alpha_terms(const MeasurableState& m, const DesignParams& d, const EnvelopeBounds& b);

/// Avoidance component of the heading-rate command.
double avoidance_control(const MeasurableState& m, const DesignParams& d, const EnvelopeBounds& b);

/// Path follower towards a (virtual) target point, saturated to the envelope.
TrackingCommand tracking_control(
  const VehicleState& robot, double target_x, double target_y, const EnvelopeBounds& b,
  const TrackingGains& gains = {});

/// Longitudinal acceleration that reaches v_cmd within one control period,
/// limited to a_r_max.
double speed_tracking_accel(
  double v_cmd, double v_now, double control_period, const EnvelopeBounds& b);

/// Loom levels (engage, release) of the gate for the given options.
std::pair<double, double> gate_levels(const DesignParams& d, const ControlOptions& opts);

/// Sum of tracking and (gated) avoidance components.
ControlCommand compose(
  const MeasurableState& m, const TrackingCommand& tr, double accel,
  const DesignParams& d, const EnvelopeBounds& b, GateState& gate,
  const ControlOptions& opts = {});

} // namespace loomcas
