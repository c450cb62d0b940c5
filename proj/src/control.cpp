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

#include "loomcas/control.hpp"

#include <algorithm>
#include <cmath>

namespace loomcas {

AlphaTerms alpha_terms(const MeasurableState& m, const DesignParams& d, const EnvelopeBounds& b)
{
  const double gap = wrap_angle(m.x5 - m.x2);
  const double dt_buffer = (kPi - std::abs(gap)) / d.beta;
  const double s = std::sin(gap);
  const double c = std::cos(gap);

  AlphaTerms a;
  a.alpha0 = gap >= 0.0 ? 1 : -1;
  const double numerator = d.k * m.x1 * m.x1
                         + m.x6 * std::max(0.0, -m.x3 * s)
                         - std::min(0.0, -m.a_r * c);
  a.alpha1 = numerator / (d.r + (m.x6 + b.v_o_max) * dt_buffer);
  a.alpha2 = -2.0 * d.beta * d.omega * m.x1 / (m.x6 + b.v_o_max);
  return a;
}

double avoidance_control(const MeasurableState& m, const DesignParams& d, const EnvelopeBounds& b)
{
  const AlphaTerms a = alpha_terms(m, d, b);
  const double gamma = d.tau_safe * d.beta + kPi;
  return a.alpha0 * (gamma * gamma / d.beta * (m.x1 * m.x1 + a.alpha1) + a.alpha2) + m.x3;
}

TrackingCommand tracking_control(
  const VehicleState& robot, double target_x, double target_y, const EnvelopeBounds& b,
  const TrackingGains& gains)
{
  const double ex = target_x - robot.x;
  const double ey = target_y - robot.y;
  const double dist = std::hypot(ex, ey);
  const double psi_e = dist > 0.0 ? wrap_angle(robot.psi - std::atan2(ey, ex)) : 0.0;

  TrackingCommand cmd;
  cmd.u_tr = std::clamp(-gains.heading_gain * std::sin(psi_e), -b.u_tr_max, b.u_tr_max);
  cmd.v_cmd = std::clamp(gains.speed_gain * dist * std::cos(psi_e), b.v_r_min, b.v_r_max);
  return cmd;
}

double speed_tracking_accel(
  double v_cmd, double v_now, double control_period, const EnvelopeBounds& b)
{
  return std::clamp((v_cmd - v_now) / control_period, -b.a_r_max, b.a_r_max);
}

std::pair<double, double> gate_levels(const DesignParams& d, const ControlOptions& opts)
{
  const double width = opts.hysteresis_fraction * -engage_threshold(d);
  double engage = opts.gate == GateMode::Approach ? -width : engage_threshold(d);
  if (opts.engage_loom)
    engage = *opts.engage_loom;
  return {engage, engage + width};
}

ControlCommand compose(
  const MeasurableState& m, const TrackingCommand& tr, double accel,
  const DesignParams& d, const EnvelopeBounds& b, GateState& gate,
  const ControlOptions& opts)
{
  const auto [threshold, release] = gate_levels(d, opts);

  if (!gate.engaged && m.x1 <= threshold) {
    gate.engaged = true;
    ++gate.engage_events;
  } else if (gate.engaged && m.x1 >= release) {
    gate.engaged = false;
    ++gate.disengage_events;
  }

  ControlCommand cmd;
  cmd.tr_component = tr.u_tr;
  cmd.accel = accel;
  cmd.engaged = gate.engaged && opts.avoidance_enabled;
  if (cmd.engaged) {
    double u_ca = avoidance_control(m, d, b);
    if (opts.flip_avoidance_sign)
      u_ca = -u_ca;
    if (opts.ca_saturation)
      u_ca = std::clamp(u_ca, -*opts.ca_saturation, *opts.ca_saturation);
    cmd.ca_component = u_ca;
  }
  cmd.turn_rate = cmd.ca_component + cmd.tr_component;
  return cmd;
}

} // namespace loomcas
