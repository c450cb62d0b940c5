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

#include "loomcas/params.hpp"

#include "loomcas/errors.hpp"
#include "loomcas/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace loomcas {

namespace {

bool finite_all(std::initializer_list<double> values)
{
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

} // namespace

void EnvelopeBounds::validate() const
{
  if (!finite_all({v_r_min, v_r_max, v_o_max, psi_dot_o_max, a_r_max, a_o_max, u_tr_max}))
    throw ConfigError("envelope: non-finite value");
  if (!(v_r_max > v_r_min && v_r_min > 0.0))
    throw ConfigError("envelope: need v_r_max > v_r_min > 0");
  if (!(v_o_max > 0.0))
    throw ConfigError("envelope: need v_o_max > 0");
  if (psi_dot_o_max < 0.0 || a_r_max < 0.0 || a_o_max < 0.0 || u_tr_max < 0.0)
    throw ConfigError("envelope: rate and acceleration bounds must be non-negative");
}

void DesignParams::validate() const
{
  if (!finite_all({r, rho_safe, tau_safe, beta, omega, k}))
    throw ConfigError("design: non-finite value");
  if (!(rho_safe > 0.0 && r >= rho_safe))
    throw ConfigError("design: need r >= rho_safe > 0");
  if (!(tau_safe > 0.0 && beta > 0.0))
    throw ConfigError("design: need tau_safe > 0 and beta > 0");
  if (!(omega > 0.0 && k > 0.0))
    throw ConfigError("design: need omega > 0 and k > 0");
}

DerivedConstants derive(const EnvelopeBounds& b, const DesignParams& d)
{
  DerivedConstants c;
  c.gamma = d.tau_safe * d.beta + kPi;
  c.los_rate_bound = (b.v_r_max + b.v_o_max) / d.r;

  // The time constant in the first and third terms is taken as tau_safe.
  const double tau = d.tau_safe;
  const double g2 = c.gamma * c.gamma;
  const double inflated_radius = d.r + (b.v_r_min + b.v_o_max) * kPi / d.beta;
  c.u_max = g2 / d.beta * (d.k / (tau * tau) + b.v_r_max * c.los_rate_bound / inflated_radius)
          + 2.0 * g2 / (b.v_r_min * tau)
          + c.los_rate_bound;
  return c;
}

double engage_threshold(const DesignParams& d)
{
  return -d.beta / (d.tau_safe * d.beta + kPi);
}

bool FeasibilityReport::all_satisfied() const
{
  return std::all_of(conditions.begin(), conditions.end(),
    [](const FeasibilityCondition& c) { return c.satisfied; });
}

const FeasibilityCondition& FeasibilityReport::at(const std::string& name) const
{
  for (const auto& c : conditions)
    if (c.name == name)
      return c;
  throw std::out_of_range("no feasibility condition named " + name);
}

namespace {

FeasibilityCondition make_condition(
  std::string name, std::string description, Relation rel, double lhs, double rhs)
{
  FeasibilityCondition c;
  c.name = std::move(name);
  c.description = std::move(description);
  c.relation = rel;
  c.lhs = lhs;
  c.rhs = rhs;
  switch (rel) {
    case Relation::Greater:
      c.margin = lhs - rhs;
      c.satisfied = lhs > rhs;
      break;
    case Relation::Less:
      c.margin = rhs - lhs;
      c.satisfied = lhs < rhs;
      break;
    case Relation::GreaterEqual:
      c.margin = lhs - rhs;
      c.satisfied = lhs >= rhs;
      break;
  }
  return c;
}

const char* relation_symbol(Relation rel)
{
  switch (rel) {
    case Relation::Greater: return ">";
    case Relation::Less: return "<";
    case Relation::GreaterEqual: return ">=";
  }
  return "?";
}

} // namespace

FeasibilityReport check_feasibility(const EnvelopeBounds& b, const DesignParams& d)
{
  FeasibilityReport report;
  report.derived = derive(b, d);
  const double gamma = report.derived.gamma;
  const double beta = d.beta;
  const double b2w = beta * beta * d.omega;

  report.conditions.push_back(make_condition(
    "C1", "omega > r + (v_r_max + v_o_max) * pi / beta", Relation::Greater,
    d.omega, d.r + (b.v_r_max + b.v_o_max) * kPi / beta));

  report.conditions.push_back(make_condition(
    "C2", "u_tr_max < min(beta^2 omega / (v_r_max gamma), beta)", Relation::Less,
    b.u_tr_max, std::min(b2w / (b.v_r_max * gamma), beta)));

  report.conditions.push_back(make_condition(
    "C3", "a_r_max < beta^2 omega / (gamma pi)", Relation::Less,
    b.a_r_max, b2w / (gamma * kPi)));

  const double ratio = gamma / beta;
  report.conditions.push_back(make_condition(
    "C4", "k >= (gamma / beta)^2 (v_o_max psi_dot_o_max + a_o_max)", Relation::GreaterEqual,
    d.k, ratio * ratio * (b.v_o_max * b.psi_dot_o_max + b.a_o_max)));

  report.notes.push_back("u_max uses tau_safe as its time constant");
  if (b.a_o_max == 0.0)
    report.notes.push_back("a_o_max = 0: obstacle assumed to hold constant speed");
  return report;
}

std::string FeasibilityReport::to_text() const
{
  std::ostringstream os;
  char line[256];
  for (const auto& c : conditions) {
    std::snprintf(line, sizeof(line), "%-3s %-4s lhs=%-12.6g %-2s rhs=%-12.6g margin=%+.6g  (%s)\n",
      c.name.c_str(), c.satisfied ? "ok" : "FAIL", c.lhs, relation_symbol(c.relation), c.rhs,
      c.margin, c.description.c_str());
    os << line;
  }
  std::snprintf(line, sizeof(line), "gamma=%.6f  L=%.6f rad/s  u_max=%.4f rad/s\n",
    derived.gamma, derived.los_rate_bound, derived.u_max);
  os << line;
  for (const auto& n : notes)
    os << "note: " << n << '\n';
  os << (all_satisfied() ? "feasible\n" : "INFEASIBLE\n");
  return os.str();
}

} // namespace loomcas
