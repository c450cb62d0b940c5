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

#include "loomcas/certificate.hpp"

#include "loomcas/errors.hpp"

#include <cmath>
#include <limits>

namespace loomcas {

Barriers barriers(const EngagementState& x, const DesignParams& d, const EnvelopeBounds& b)
{
  if (!(x.x4 > 0.0))
    throw DomainError("barriers: x4 must be positive");
  const double gamma = d.tau_safe * d.beta + kPi;
  const double gap = std::abs(wrap_angle(x.x5 - x.x2));
  Barriers ab;
  ab.a1 = x.x1 + d.beta / (gamma - gap);
  ab.a2 = 1.0 / x.x4 - (d.r + (x.x6 + b.v_o_max) * ((kPi - gap) / d.beta));
  return ab;
}

double lyapunov(const Barriers& ab)
{
  if (ab.a1 > -1.0 && ab.a2 > -1.0)
    return std::log(ab.a1 + 1.0) + std::log(ab.a2 + 1.0);
  return std::numeric_limits<double>::quiet_NaN();
}

CertificateSample certificate_sample(
  const EngagementState& x, const DesignParams& d, const EnvelopeBounds& b,
  const MonitorOptions& opts)
{
  const Barriers ab = barriers(x, d, b);
  CertificateSample s;
  s.a1 = ab.a1;
  s.a2 = ab.a2;
  s.v = lyapunov(ab);
  s.in_conflict = classify(x, d, b).in_conflict;
  s.on_symmetry_surface = std::abs(wrap_angle(x.x5 - x.x2)) < opts.symmetry_band;
  return s;
}

CertificateVerdict monitor(std::span<CertificateSample> trace, double dt,
                           const MonitorOptions& opts)
{
  if (trace.size() < 3)
    throw InsufficientData("monitor: need at least three samples");
  if (!(dt > 0.0))
    throw DomainError("monitor: dt must be positive");

  CertificateVerdict verdict;
  verdict.n_samples = trace.size();
  verdict.worst_v_dot = std::numeric_limits<double>::infinity();

  const std::size_t n = trace.size();
  for (std::size_t i = 0; i < n; ++i) {
    auto& s = trace[i];
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i + 1 == n ? i : i + 1;
    s.v_dot_numeric = (trace[hi].v - trace[lo].v) / (static_cast<double>(hi - lo) * dt);

    if (!s.in_conflict)
      continue;
    ++verdict.n_conflict;
    if (s.on_symmetry_surface || i == 0 || i + 1 == n || !std::isfinite(s.v_dot_numeric))
      continue;
    ++verdict.n_checked;
    if (s.v_dot_numeric < verdict.worst_v_dot) {
      verdict.worst_v_dot = s.v_dot_numeric;
      verdict.worst_index = i;
    }
    if (s.v_dot_numeric < -opts.epsilon)
      ++verdict.n_violations;
  }
  verdict.pass = verdict.n_violations == 0;
  if (verdict.n_checked == 0)
    verdict.worst_v_dot = 0.0;
  return verdict;
}

} // namespace loomcas
