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
#include "loomcas/geometry.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace loomcas;
using doctest::Approx;

namespace {

// Closed-form unicycle motion with constant turn rate and zero acceleration.
VehicleState arc(const VehicleState& s, double u, double t)
{
  VehicleState n = s;
  if (std::abs(u) < 1e-12) {
    n.x += s.v * std::cos(s.psi) * t;
    n.y += s.v * std::sin(s.psi) * t;
  } else {
    n.x += s.v / u * (std::sin(s.psi + u * t) - std::sin(s.psi));
    n.y += s.v / u * (std::cos(s.psi) - std::cos(s.psi + u * t));
  }
  n.psi = s.psi + u * t;
  return n;
}

// Exact position under constant turn rate u and acceleration a, by fine
// midpoint quadrature of the velocity (independent of the library's RK4).
std::pair<double, double> position(const VehicleState& s, double u, double a, double t)
{
  const int n = 2000;
  const double h = t / n;
  double x = s.x, y = s.y;
  for (int i = 0; i < n; ++i) {
    const double tm = (i + 0.5) * h;
    const double v = s.v + a * tm;
    const double psi = s.psi + u * tm;
    x += h * v * std::cos(psi);
    y += h * v * std::sin(psi);
  }
  return {x, y};
}

double dist_at(const VehicleState& r, AgentRates rr, const VehicleState& o, AgentRates ro, double t)
{
  const auto [xr, yr] = position(r, rr.turn_rate, rr.accel, t);
  const auto [xo, yo] = position(o, ro.turn_rate, ro.accel, t);
  return std::hypot(xo - xr, yo - yr);
}

double bearing_at(const VehicleState& r, AgentRates rr, const VehicleState& o, AgentRates ro, double t)
{
  const auto [xr, yr] = position(r, rr.turn_rate, rr.accel, t);
  const auto [xo, yo] = position(o, ro.turn_rate, ro.accel, t);
  return std::atan2(yo - yr, xo - xr);
}

} // namespace

TEST_CASE("wrap_angle")
{
  CHECK(wrap_angle(0.0) == 0.0);
  CHECK(wrap_angle(1.5 * kPi) == Approx(-0.5 * kPi).epsilon(1e-15));
  CHECK(wrap_angle(-1.5 * kPi) == Approx(0.5 * kPi).epsilon(1e-15));
  CHECK(std::abs(wrap_angle(kPi)) == Approx(kPi));
  CHECK_THROWS_AS(wrap_angle(std::numeric_limits<double>::quiet_NaN()), DomainError);
  CHECK_THROWS_AS(wrap_angle(std::numeric_limits<double>::infinity()), DomainError);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> any(-100.0, 100.0);
  for (int i = 0; i < 10000; ++i) {
    const double th = any(rng);
    const double w = wrap_angle(th);
    REQUIRE(w >= -kPi);
    REQUIRE(w <= kPi);
    const double k = (th - w) / (2.0 * kPi);
    REQUIRE(std::abs(k - std::round(k)) < 1e-9);
  }
}

TEST_CASE("step_unicycle straight lines")
{
  const VehicleState a = step_unicycle({0, 0, 0, 1}, 0.0, 0.0, 0.1);
  CHECK(a.x == Approx(0.1).epsilon(1e-15));
  CHECK(a.y == Approx(0.0));
  CHECK(a.psi == 0.0);
  CHECK(a.v == 1.0);

  const VehicleState b = step_unicycle({0, 0, kPi / 2, 1}, 0.0, 0.0, 0.1);
  CHECK(b.x == Approx(0.0).epsilon(1e-15));
  CHECK(b.y == Approx(0.1).epsilon(1e-15));
  CHECK(b.psi == Approx(kPi / 2));
}

TEST_CASE("step_unicycle follows the unit circle")
{
  VehicleState s{0, 0, 0, 1};
  for (int i = 0; i < 100; ++i)
    s = step_unicycle(s, 1.0, 0.0, 0.01);
  CHECK(s.x == Approx(0.8414709848078965).epsilon(1e-6));
  CHECK(s.y == Approx(0.45969769413186023).epsilon(1e-6));
  CHECK(s.psi == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("step_unicycle matches the closed-form arc")
{
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0), v(0.0, 2.0), psi(-kPi, kPi);
  for (int i = 0; i < 500; ++i) {
    const VehicleState s0{0.0, 0.0, psi(rng), v(rng)};
    const double w = u(rng);
    VehicleState s = s0;
    for (int k = 0; k < 200; ++k)
      s = step_unicycle(s, w, 0.0, 0.005);
    const VehicleState e = arc(s0, w, 1.0);
    REQUIRE(s.x == Approx(e.x).epsilon(1e-9).scale(1.0));
    REQUIRE(s.y == Approx(e.y).epsilon(1e-9).scale(1.0));
    REQUIRE(s.v == s0.v);
    REQUIRE(std::abs(wrap_angle(s.psi - e.psi)) < 1e-9);
  }
}

TEST_CASE("step_unicycle speed handling")
{
  VehicleState s{0, 0, 0, 0.3};
  s = step_unicycle(s, 0.0, -10.0, 0.1);
  CHECK(s.v == 0.0);
  s = step_unicycle({0, 0, 0, 1.0}, 0.0, 0.5, 0.2);
  CHECK(s.v == Approx(1.1));
  CHECK(s.x == Approx(0.2 + 0.5 * 0.5 * 0.04));

  CHECK_THROWS_AS(step_unicycle({0, 0, 0, 1}, 0.0, 0.0, 0.0), DomainError);
  CHECK_THROWS_AS(step_unicycle({0, 0, 0, 1}, std::nan(""), 0.0, 0.1), DomainError);
}

TEST_CASE("relative_geometry examples")
{
  const RelativeGeometry a = relative_geometry({0, 0, 0, 1}, {2, 0, kPi, 1});
  CHECK(a.rho == 2.0);
  CHECK(a.lambda == 0.0);
  CHECK(a.rho_dot == Approx(-2.0));
  CHECK(a.lambda_dot == Approx(0.0).epsilon(1e-15));

  const RelativeGeometry b = relative_geometry({0, 0, 0, 1}, {0, 2, 0, 0});
  CHECK(b.rho == 2.0);
  CHECK(b.lambda == Approx(kPi / 2));
  CHECK(b.rho_dot == Approx(0.0).epsilon(1e-15));
  CHECK(b.lambda_dot == Approx(0.5));
  // Finite difference of the integrated positions.
  const double h = 1e-5;
  const double lam1 = bearing_at({0, 0, 0, 1}, {}, {0, 2, 0, 0}, {}, h);
  CHECK((lam1 - b.lambda) / h == Approx(0.5).epsilon(1e-6));

  const RelativeGeometry c = relative_geometry({0, 0, 0, 0}, {3, 4, 0, 0});
  CHECK(c.rho == 5.0);
  CHECK(c.lambda == Approx(std::atan2(4.0, 3.0)));
  CHECK(c.rho_dot == 0.0);
  CHECK(c.lambda_dot == 0.0);

  CHECK_THROWS_AS(relative_geometry({1, 1, 0, 1}, {1, 1, 0, 1}), CoincidenceError);
}

TEST_CASE("relative_geometry closing speed equals the projected relative velocity")
{
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> pos(-10.0, 10.0), psi(-kPi, kPi), v(0.0, 2.0);
  for (int i = 0; i < 2000; ++i) {
    const VehicleState r{pos(rng), pos(rng), psi(rng), v(rng)};
    const VehicleState o{pos(rng), pos(rng), psi(rng), v(rng)};
    const double dx = o.x - r.x, dy = o.y - r.y;
    const double rho = std::hypot(dx, dy);
    const double dvx = o.v * std::cos(o.psi) - r.v * std::cos(r.psi);
    const double dvy = o.v * std::sin(o.psi) - r.v * std::sin(r.psi);
    const RelativeGeometry g = relative_geometry(r, o);
    REQUIRE(g.rho_dot == Approx((dx * dvx + dy * dvy) / rho).epsilon(1e-12).scale(1.0));
    REQUIRE(g.lambda_dot == Approx((dx * dvy - dy * dvx) / (rho * rho)).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("relative_geometry derivatives agree with finite differences of the motion")
{
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> pos(-5.0, 5.0), psi(-kPi, kPi), v(0.1, 2.0),
    u(-1.0, 1.0), acc(-1.0, 1.0);
  const double h = 1e-4;
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    const VehicleState r{pos(rng), pos(rng), psi(rng), v(rng)};
    const VehicleState o{pos(rng), pos(rng), psi(rng), v(rng)};
    const AgentRates rr{u(rng), acc(rng)}, ro{u(rng), acc(rng)};
    const RelativeGeometry g = relative_geometry(r, o, rr, ro);
    if (g.rho < 0.5)
      continue;
    const double rp = dist_at(r, rr, o, ro, h), rm = dist_at(r, rr, o, ro, -h);
    const double lp = bearing_at(r, rr, o, ro, h), lm = bearing_at(r, rr, o, ro, -h);
    REQUIRE((rp - rm) / (2 * h) == Approx(g.rho_dot).epsilon(1e-5).scale(1.0));
    REQUIRE(wrap_angle(lp - lm) / (2 * h) == Approx(g.lambda_dot).epsilon(1e-5).scale(1.0));
    REQUIRE((rp - 2 * g.rho + rm) / (h * h) == Approx(g.rho_ddot).epsilon(1e-3).scale(1.0));
    ++checked;
  }
  CHECK(checked > 200);
}

TEST_CASE("relative_geometry is invariant under rigid motions")
{
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> pos(-5.0, 5.0), psi(-kPi, kPi), v(0.0, 2.0), u(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const VehicleState r{pos(rng), pos(rng), psi(rng), v(rng)};
    const VehicleState o{pos(rng), pos(rng), psi(rng), v(rng)};
    const AgentRates rr{u(rng), u(rng)}, ro{u(rng), u(rng)};
    const double th = psi(rng), tx = pos(rng), ty = pos(rng);
    auto move = [&](const VehicleState& s) {
      return VehicleState{std::cos(th) * s.x - std::sin(th) * s.y + tx,
                          std::sin(th) * s.x + std::cos(th) * s.y + ty, wrap_angle(s.psi + th), s.v};
    };
    const RelativeGeometry a = relative_geometry(r, o, rr, ro);
    const RelativeGeometry b = relative_geometry(move(r), move(o), rr, ro);
    REQUIRE(b.rho == Approx(a.rho).epsilon(1e-12));
    REQUIRE(b.rho_dot == Approx(a.rho_dot).epsilon(1e-9).scale(1.0));
    REQUIRE(b.rho_ddot == Approx(a.rho_ddot).epsilon(1e-9).scale(1.0));
    REQUIRE(b.lambda_dot == Approx(a.lambda_dot).epsilon(1e-9).scale(1.0));
    REQUIRE(std::abs(wrap_angle(b.lambda - a.lambda - th)) < 1e-9);
  }
}
