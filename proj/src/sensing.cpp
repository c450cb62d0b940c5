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

#include "loomcas/sensing.hpp"

#include "loomcas/errors.hpp"

#include <algorithm>
#include <cmath>

namespace loomcas {

void SensorConfig::validate() const
{
  const bool ok = noise_std_loom >= 0.0 && noise_std_lambda >= 0.0 &&
                  noise_std_lambda_dot >= 0.0 && latency >= 0.0 && rate > 0.0 &&
                  std::isfinite(rate) && std::isfinite(latency);
  if (!ok)
    throw ConfigError("sensor: noise/latency must be non-negative and rate positive");
}

double loom(double rho, double rho_dot)
{
  if (!(rho > 0.0))
    throw DomainError("loom: rho must be positive");
  return std::min(rho_dot / rho, 0.0);
}

double retinal_angle(double rho, double width)
{
  if (!(rho > 0.0) || !(width > 0.0))
    throw DomainError("retinal_angle: rho and width must be positive");
  return 2.0 * std::atan(width / (2.0 * rho));
}

double retinal_ttc(double theta, double theta_dot)
{
  if (theta_dot == 0.0)
    throw UndefinedTtc("retinal_ttc: theta_dot is zero");
  return theta / theta_dot;
}

Measurement exact_measurement(const RelativeGeometry& truth, double t)
{
  return {loom(truth.rho, truth.rho_dot), truth.lambda, truth.lambda_dot, t};
}

Sensor::Sensor(const SensorConfig& cfg) : cfg_(cfg), rng_(cfg.seed)
{
  cfg_.validate();
}

void Sensor::reset()
{
  rng_.seed(cfg_.seed);
  unit_normal_.reset();
  pending_.clear();
  released_.reset();
  next_sample_index_ = 0;
}

std::optional<Measurement> Sensor::observe(const RelativeGeometry& truth, double t)
{
  const double period = 1.0 / cfg_.rate;
  // Half a microsecond of slack absorbs accumulated step-time rounding.
  constexpr double slack = 5e-7;
  if (static_cast<double>(next_sample_index_) * period <= t + slack) {
    Measurement m = exact_measurement(truth, t);
    // Draw order is fixed so a given seed always yields the same sequence.
    if (cfg_.noise_std_loom > 0.0)
      m.loom = std::min(0.0, m.loom + cfg_.noise_std_loom * unit_normal_(rng_));
    if (cfg_.noise_std_lambda > 0.0)
      m.lambda = wrap_angle(m.lambda + cfg_.noise_std_lambda * unit_normal_(rng_));
    if (cfg_.noise_std_lambda_dot > 0.0)
      m.lambda_dot += cfg_.noise_std_lambda_dot * unit_normal_(rng_);
    pending_.push_back(m);
    next_sample_index_ = static_cast<std::int64_t>(std::floor((t + slack) / period)) + 1;
  }

  while (!pending_.empty() && pending_.front().stamp + cfg_.latency <= t + slack) {
    released_ = pending_.front();
    pending_.pop_front();
  }
  return released_;
}

} // namespace loomcas
