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

#include <string>
#include <vector>

namespace loomcas {

// Physical bounds on both agents and on the exogenous tracking law.
struct EnvelopeBounds
{
  double v_r_min = 0.2;        // m/s
  double v_r_max = 0.5;        // m/s
  double v_o_max = 2.0;        // m/s
  double psi_dot_o_max = 0.5;  // rad/s
  double a_r_max = 3.5;        // m/s^2
  double a_o_max = 0.0;        // m/s^2, constant-speed obstacle by default
  double u_tr_max = 1.0;       // rad/s

  void validate() const;  // throws ConfigError
};

// Designer constants of the avoidance law.
struct DesignParams
{
  double r = 0.5;         // m, analysis radius (>= rho_safe)
  double rho_safe = 0.5;  // m
  double tau_safe = 0.5;  // s
  double beta = 6.3;      // rad/s
  double omega = 1.75;    // m
  double k = 1.0;

  void validate() const;  // throws ConfigError
};

struct DerivedConstants
{
  double gamma = 0.0;           // tau_safe * beta + pi
  double los_rate_bound = 0.0;  // L = (v_r_max + v_o_max) / r
  double u_max = 0.0;           // conservative bound on |u_ca|
};

DerivedConstants derive(const EnvelopeBounds& b, const DesignParams& d);

/// Loom level at which the avoidance component engages: -beta / gamma.
double engage_threshold(const DesignParams& d);

enum class Relation { Greater, Less, GreaterEqual };

struct FeasibilityCondition
{
  std::string name;         // "C1".."C4"
  std::string description;
  Relation relation = Relation::Greater;  // lhs <relation> rhs
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = false;
  double margin = 0.0;      // positive side = satisfied
};

struct FeasibilityReport
{
  std::vector<FeasibilityCondition> conditions;
  DerivedConstants derived;
  std::vector<std::string> notes;

  bool all_satisfied() const;
  const FeasibilityCondition& at(const std::string& name) const;
  std::string to_text() const;
};

/// Evaluates the sufficient conditions on omega, u_tr_max, a_r_max and k.
/// Infeasibility is reported, never thrown.
FeasibilityReport check_feasibility(const EnvelopeBounds& b, const DesignParams& d);

} // namespace loomcas
