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
#include "loomcas/regions.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace loomcas;
using doctest::Approx;

namespace {

const DesignParams kDesign;
const EnvelopeBounds kEnvelope;

MeasurableState measurable(const EngagementState& x, double a_r)
{
  return {x.x1, x.x2, x.x3, x.x5, x.x6, a_r};
}

} // namespace

TEST_CASE("alpha terms")
{
  const MeasurableState m{-2.0, 0.0, 0.0, 0.0, 0.5, 0.0};
  const AlphaTerms a = alpha_terms(m, kDesign, kEnvelope);
  CHECK(a.alpha0 == 1);
  CHECK(a.alpha1 == Approx(2.2900801580943856).epsilon(1e-12));
  CHECK(a.alpha2 == Approx(17.64).epsilon(1e-12));

  const AlphaTerms z = alpha_terms({0.0, 0.4, 0.0, 1.0, 0.3, 0.0}, kDesign, kEnvelope);
  CHECK(z.alpha1 == 0.0);
  CHECK(z.alpha2 == 0.0);

  CHECK(alpha_terms({-1, 0.5, 0, 0.4, 0.3, 0}, kDesign, kEnvelope).alpha0 == -1);
  CHECK(alpha_terms({-1, 0.4, 0, 0.5, 0.3, 0}, kDesign, kEnvelope).alpha0 == 1);
}

TEST_CASE("avoidance control")
{
  const MeasurableState m{-2.0, 0.0, 0.0, 0.0, 0.5, 0.0};
  CHECK(avoidance_control(m, kDesign, kEnvelope) == Approx(57.161809802497507).epsilon(1e-12));
  CHECK(avoidance_control({0.0, 0.3, 0.0, 0.3, 0.3, 0.0}, kDesign, kEnvelope) == 0.0);

  const MeasurableState m2{-1.5, 0.4, 0.7, 1.2, 0.35, -2.0};
  const MeasurableState mirror{-1.5, 0.4, -0.7, 0.4 - (1.2 - 0.4), 0.35, -2.0};
  CHECK(avoidance_control(mirror, kDesign, kEnvelope) ==
        Approx(-avoidance_control(m2, kDesign, kEnvelope)).epsilon(1e-12));
}

TEST_CASE("tracking control saturations")
{
  const TrackingCommand a = tracking_control({0, 0, 0, 0.3}, 1.0, 0.0, kEnvelope);
  CHECK(a.u_tr == Approx(0.0).scale(1.0));
  CHECK(a.v_cmd == 0.5);

  const TrackingCommand b = tracking_control({0, 0, kPi / 2, 0.3}, 1.0, 0.0, kEnvelope);
  CHECK(b.u_tr == -1.0);

  const TrackingCommand c = tracking_control({1, 2, 0.4, 0.3}, 1.0, 2.0, kEnvelope);
  CHECK(c.v_cmd == 0.2);
  CHECK(c.u_tr == 0.0);

  const TrackingCommand d = tracking_control({0, 0, 0, 0.3}, 0.1, 0.01, kEnvelope);
  const double psi_e = -std::atan2(0.01, 0.1);
  CHECK(d.u_tr == Approx(-3.0 * std::sin(psi_e)));
  CHECK(d.v_cmd == Approx(std::max(0.2, 1.5 * std::hypot(0.1, 0.01) * std::cos(psi_e))));

  CHECK(speed_tracking_accel(0.5, 0.2, 0.02, kEnvelope) == 3.5);
  CHECK(speed_tracking_accel(0.25, 0.2, 0.02, kEnvelope) == Approx(2.5));
  CHECK(speed_tracking_accel(0.2, 0.5, 0.02, kEnvelope) == -3.5);
}

TEST_CASE("gate levels")
{
  const double h = 0.05 * 1.0013362826986915;
  const auto [e1, r1] = gate_levels(kDesign, {});
  CHECK(e1 == Approx(-h));
  CHECK(r1 == Approx(0.0).scale(1.0));

  ControlOptions cb;
  cb.gate = GateMode::ConflictBound;
  const auto [e2, r2] = gate_levels(kDesign, cb);
  CHECK(e2 == Approx(-1.0013362826986915).epsilon(1e-12));
  CHECK(r2 == Approx(-1.0013362826986915 + h).epsilon(1e-12));

  ControlOptions fixed;
  fixed.engage_loom = -0.3;
  CHECK(gate_levels(kDesign, fixed).first == -0.3);
}

TEST_CASE("compose: no loom is pure tracking")
{
  GateState gate;
  const TrackingCommand tr{0.4, 0.3};
  const ControlCommand c = compose({0.0, 0.0, 0.0, 0.0, 0.3, 0.0}, tr, 1.0, kDesign, kEnvelope, gate);
  CHECK_FALSE(c.engaged);
  CHECK(c.turn_rate == 0.4);
  CHECK(c.ca_component == 0.0);
  CHECK(c.accel == 1.0);
}

TEST_CASE("compose: hysteresis produces one engage and one release")
{
  for (GateMode mode : {GateMode::Approach, GateMode::ConflictBound}) {
    ControlOptions opts;
    opts.gate = mode;
    const auto [engage, release] = gate_levels(kDesign, opts);
    GateState gate;
    const TrackingCommand tr{0.1, 0.3};
    // Loom sweeps down through the engage level, dithers between the levels, then recovers.
    std::vector<double> path;
    for (double x = 0.0; x >= engage - 0.5; x -= 0.01)
      path.push_back(x);
    for (int i = 0; i < 10; ++i)
      path.push_back(i % 2 ? engage + 0.3 * (release - engage) : engage + 0.6 * (release - engage));
    for (double x = engage; x <= 0.0; x += 0.01)
      path.push_back(x);
    path.push_back(0.0);

    bool was = false;
    for (double x1 : path) {
      const ControlCommand c = compose({x1, 0.1, 0.05, 0.5, 0.3, 0.0}, tr, 0.0, kDesign, kEnvelope, gate, opts);
      if (c.engaged) {
        CHECK(c.turn_rate == Approx(c.ca_component + c.tr_component));
      } else {
        CHECK(c.turn_rate == c.tr_component);
      }
      was = c.engaged;
    }
    CHECK_FALSE(was);
    CHECK(gate.engage_events == 1);
    CHECK(gate.disengage_events == 1);
  }
}

TEST_CASE("compose options")
{
  GateState g1, g2, g3;
  const MeasurableState m{-1.2, 0.0, 0.1, 0.3, 0.3, 0.0};
  const TrackingCommand tr{0.0, 0.3};
  ControlOptions flip;
  flip.flip_avoidance_sign = true;
  ControlOptions sat;
  sat.ca_saturation = 2.0;
  const ControlCommand a = compose(m, tr, 0.0, kDesign, kEnvelope, g1);
  const ControlCommand b = compose(m, tr, 0.0, kDesign, kEnvelope, g2, flip);
  const ControlCommand c = compose(m, tr, 0.0, kDesign, kEnvelope, g3, sat);
  CHECK(a.engaged);
  CHECK(b.ca_component == -a.ca_component);
  CHECK(c.ca_component == 2.0);

  ControlOptions off;
  off.avoidance_enabled = false;
  GateState g4;
  CHECK(compose(m, tr, 0.0, kDesign, kEnvelope, g4, off).ca_component == 0.0);
}

TEST_CASE("sign and bound properties on the conflict region")
{
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const DerivedConstants dc = derive(kEnvelope, kDesign);
  const double gamma = dc.gamma;
  int sampled = 0;
  while (sampled < 100000) {
    EngagementState x;
    x.x2 = -kPi + 2 * kPi * unit(rng);
    x.x5 = wrap_angle(x.x2 + (-kPi + 2 * kPi * unit(rng)));
    x.x6 = kEnvelope.v_r_min + (kEnvelope.v_r_max - kEnvelope.v_r_min) * unit(rng);
    const double dt = delta_t(x.x5, x.x2, kDesign.beta);
    const double lo1 = -1.0 / (kDesign.tau_safe + dt), hi1 = -kDesign.beta / gamma;
    const double lo2 = kDesign.r + (x.x6 + kEnvelope.v_o_max) * dt, hi2 = kDesign.omega;
    if (!(lo1 < hi1) || !(lo2 < hi2))
      continue;
    x.x1 = hi1 - (hi1 - lo1) * unit(rng) * 0.999999;
    x.x4 = 1.0 / (hi2 - (hi2 - lo2) * unit(rng) * 0.999999);
    x.x3 = dc.los_rate_bound * (2 * unit(rng) - 1);
    REQUIRE(classify(x, kDesign, kEnvelope).in_conflict);
    const MeasurableState m = measurable(x, kEnvelope.a_r_max * (2 * unit(rng) - 1));
    const AlphaTerms a = alpha_terms(m, kDesign, kEnvelope);
    const double u = avoidance_control(m, kDesign, kEnvelope);
    REQUIRE(a.alpha1 >= 0.0);
    REQUIRE(a.alpha2 >= 0.0);
    REQUIRE(a.alpha0 * (u - x.x3) > 0.0);
    REQUIRE(std::abs(u) <= dc.u_max);
    ++sampled;
  }
}
