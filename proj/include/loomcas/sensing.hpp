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

#include <cstdint>
#include <deque>
#include <optional>
#include <random>

namespace loomcas {

// The measurable triple available to the avoidance system.
struct Measurement
{
  double loom = 0.0;        // 1/s, always <= 0
  double lambda = 0.0;      // rad
  double lambda_dot = 0.0;  // rad/s
  double stamp = 0.0;       // s, time at which the triple was sampled
};

struct SensorConfig
{
  double noise_std_loom = 0.0;        // 1/s
  double noise_std_lambda = 0.0;      // rad
  double noise_std_lambda_dot = 0.0;  // rad/s
  double latency = 0.0;               // s
  double rate = 50.0;                 // Hz
  std::uint64_t seed = 0;

  void validate() const;  // throws ConfigError
};

/// Loom, min(rho_dot / rho, 0): negative inverse time-to-collision while approaching.
double loom(double rho, double rho_dot);

/// Angle subtended on the retina by an object of the given width at distance rho.
double retinal_angle(double rho, double width);

/// theta / theta_dot, the retinal estimate of time-to-collision.
double retinal_ttc(double theta, double theta_dot);

/// Exact (loom, lambda, lambda_dot) for a ground-truth geometry, stamped at t.
Measurement exact_measurement(const RelativeGeometry& truth, double t);

// Samples the truth at cfg.rate, adds seeded Gaussian noise, and releases each
// sample after cfg.latency (zero-order hold, no interpolation).
// Owned by a single episode; not thread-safe.
class Sensor
{
public:
  explicit Sensor(const SensorConfig& cfg);

  /// Feed the truth at time t and return the freshest sample at least
  /// `latency` old, or nothing if no sample has matured yet.
  std::optional<Measurement> observe(const RelativeGeometry& truth, double t);

  void reset();
  const SensorConfig& config() const { return cfg_; }

private:
  SensorConfig cfg_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> unit_normal_{0.0, 1.0};
  std::deque<Measurement> pending_;
  std::optional<Measurement> released_;
  std::int64_t next_sample_index_ = 0;
};

} // namespace loomcas
