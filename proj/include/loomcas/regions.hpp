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

namespace loomcas {

// Engagement state x1..x6. x4 (inverse distance) is truth-side only: the
// control module reads MeasurableState, which has no such field.
struct EngagementState
{
  double x1 = 0.0;  // loom, 1/s (<= 0)
  double x2 = 0.0;  // line-of-sight angle, rad
  double x3 = 0.0;  // line-of-sight rate, rad/s
  double x4 = 0.0;  // inverse distance, 1/m (> 0)
  double x5 = 0.0;  // robot heading, rad
  double x6 = 0.0;  // robot speed, m/s
};

struct RegionVerdict
{
  bool in_antitarget = false;
  bool in_avoidance_a1 = false;
  bool in_avoidance_a2 = false;
  bool in_conflict = false;
  double a1_value = 0.0;  // 1/s, <= 0 inside A1
  double a2_value = 0.0;  // m, <= 0 inside A2
  double delta_t = 0.0;   // s

  bool in_avoidance() const { return in_avoidance_a1 || in_avoidance_a2; }
};

EngagementState make_engagement_state(const RelativeGeometry& truth, const VehicleState& robot);

/// Heading-dependent extra time buffer (pi - |wrap(x5 - x2)|) / beta.
double delta_t(double x5, double x2, double beta);

/// Membership of the anti-target, avoidance and conflict sets, with margins.
/// Throws DomainError for x4 <= 0.
RegionVerdict classify(const EngagementState& x, const DesignParams& d, const EnvelopeBounds& b);

/// |x3| <= L. Only meaningful outside the anti-target set.
bool los_rate_bound_check(const EngagementState& x, double los_rate_bound);

} // namespace loomcas
