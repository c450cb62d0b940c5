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

#include "loomcas/params.hpp"
#include "loomcas/regions.hpp"

#include <cstddef>
#include <span>

namespace loomcas {

struct Barriers
{
  double a1 = 0.0;  // 1/s
  double a2 = 0.0;  // m
};

// One sample of the runtime certificate along a trajectory.
struct CertificateSample
{
  double a1 = 0.0;
  double a2 = 0.0;
  double v = 0.0;              // log(a1 + 1) + log(a2 + 1); NaN where undefined
  double v_dot_numeric = 0.0;  // filled in by monitor()
  bool in_conflict = false;
  bool on_symmetry_surface = false;
};

struct MonitorOptions
{
  double epsilon = 0.05;           // tolerance on V-dot, 1/s (10 dt at dt = 0.005)
  double symmetry_band = 0.02;     // rad, |x5 - x2| below this is excluded
};

struct CertificateVerdict
{
  bool pass = true;
  std::size_t n_samples = 0;
  std::size_t n_conflict = 0;   // samples inside the conflict region
  std::size_t n_checked = 0;    // conflict samples actually tested
  std::size_t n_violations = 0;
  double worst_v_dot = 0.0;     // minimum V-dot over checked samples
  std::size_t worst_index = 0;
};

/// Barrier functions whose zero level sets are the avoidance-set boundaries.
/// Throws DomainError for x4 <= 0.
Barriers barriers(const EngagementState& x, const DesignParams& d, const EnvelopeBounds& b);

/// log(a1 + 1) + log(a2 + 1), NaN unless both barriers exceed -1.
double lyapunov(const Barriers& ab);

CertificateSample certificate_sample(
  const EngagementState& x, const DesignParams& d, const EnvelopeBounds& b,
  const MonitorOptions& opts = {});

/// Central-difference V-dot over a uniformly sampled trace; PASS iff
/// V-dot >= -epsilon at every conflict sample off the symmetry surface.
/// Writes v_dot_numeric back into the samples. Throws InsufficientData for
/// fewer than three samples.
CertificateVerdict monitor(std::span<CertificateSample> trace, double dt,
                           const MonitorOptions& opts = {});

} // namespace loomcas
