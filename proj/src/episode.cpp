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
#include "loomcas/sim.hpp"

#include <cmath>
#include <limits>

namespace loomcas {

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

SensorConfig seeded_sensor(const ScenarioConfig& cfg)
{
  SensorConfig s = cfg.sensor;
  s.seed = splitmix64(cfg.seed ^ splitmix64(cfg.sensor.seed));
  return s;
}

bool finite_state(const VehicleState& s)
{
  return std::isfinite(s.x) && std::isfinite(s.y) && std::isfinite(s.psi) && std::isfinite(s.v);
}

} // namespace

void ScenarioConfig::validate() const
{
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw ConfigError("scenario: dt must be positive");
  if (!(duration > dt))
    throw ConfigError("scenario: duration must exceed dt");
  if (!finite_state(robot_init) || !finite_state(obstacle_init))
    throw ConfigError("scenario: non-finite initial state");
  if (robot_init.v < 0.0 || obstacle_init.v < 0.0)
    throw ConfigError("scenario: speeds must be non-negative");
  design.validate();
  envelope.validate();
  sensor.validate();
  reference_path.validate();
  if (obstacle_init.v > envelope.v_o_max)
    throw ConfigError("scenario: initial obstacle speed exceeds v_o_max");
  if (obstacle_policy.speed && (*obstacle_policy.speed < 0.0))
    throw ConfigError("scenario: policy speed must be non-negative");
  if (obstacle_policy.period <= 0.0)
    throw ConfigError("scenario: zig-zag period must be positive");
  const double ratio = 1.0 / (sensor.rate * dt);
  if (std::abs(ratio - std::round(ratio)) > 1e-6 || std::round(ratio) < 1.0)
    throw ConfigError("scenario: control period must be an integer multiple of dt");
}

int ScenarioConfig::control_every() const
{
  return static_cast<int>(std::round(1.0 / (sensor.rate * dt)));
}

Episode::Episode(ScenarioConfig cfg, bool keep_trace)
  : cfg_(std::move(cfg)), keep_trace_(keep_trace), sensor_((cfg_.validate(), seeded_sensor(cfg_))),
    min_rho_(std::numeric_limits<double>::infinity())
{
  derived_ = derive(cfg_.envelope, cfg_.design);
  robot_ = cfg_.robot_init;
  robot_.psi = wrap_angle(robot_.psi);
  obstacle_ = cfg_.obstacle_init;
  obstacle_.psi = wrap_angle(obstacle_.psi);
  control_every_ = cfg_.control_every();
  total_steps_ = static_cast<std::int64_t>(std::llround(cfg_.duration / cfg_.dt)) + 1;

  const RelativeGeometry g0 = relative_geometry(robot_, obstacle_);
  if (cfg_.require_initial_outside_avoidance) {
    const RegionVerdict v0 = classify(make_engagement_state(g0, robot_), cfg_.design, cfg_.envelope);
    if (v0.in_avoidance())
      throw RejectedScenario("initial state lies inside the avoidance set");
  }
  policy_ = make_policy(cfg_.obstacle_policy, obstacle_, robot_);
  if (keep_trace_)
    trace_.reserve(static_cast<std::size_t>(total_steps_));
  cert_.reserve(static_cast<std::size_t>(total_steps_));
}

void Episode::set_obstacle_policy(std::unique_ptr<ObstaclePolicy> policy)
{
  policy_ = std::move(policy);
}

bool Episode::finished() const
{
  return fault_ || k_ >= total_steps_;
}

double Episode::time() const
{
  return static_cast<double>(k_) * cfg_.dt;
}

const TraceRecord& Episode::step()
{
  if (finished())
    return last_;

  const double t = time();
  TraceRecord rec;
  rec.step = k_;
  rec.t = t;
  rec.robot = robot_;
  rec.obstacle = obstacle_;

  RelativeGeometry truth;
  try {
    truth = relative_geometry(robot_, obstacle_);
  } catch (const CoincidenceError&) {
    fault_ = true;
    antitarget_hit_ = true;
    min_rho_ = 0.0;
    last_ = rec;
    return last_;
  }

  const std::optional<Measurement> meas = sensor_.observe(truth, t);
  if (k_ % control_every_ == 0) {
    const double period = cfg_.dt * control_every_;
    const PathPoint target = cfg_.reference_path.at(t);
    const TrackingCommand tr =
      tracking_control(robot_, target.x, target.y, cfg_.envelope, cfg_.tracking);
    const double accel = speed_tracking_accel(tr.v_cmd, robot_.v, period, cfg_.envelope);
    const double prev_accel = cmd_.accel;
    if (meas) {
      MeasurableState m;
      m.x1 = meas->loom;
      m.x2 = meas->lambda;
      m.x3 = meas->lambda_dot;
      m.x5 = robot_.psi;
      m.x6 = robot_.v;
      m.a_r = prev_accel;
      cmd_ = compose(m, tr, accel, cfg_.design, cfg_.envelope, gate_, cfg_.control);
    } else {
      cmd_ = ControlCommand{};
      cmd_.tr_component = tr.u_tr;
      cmd_.turn_rate = tr.u_tr;
      cmd_.accel = accel;
    }
  }

  const ObstacleIntent intent = policy_->command(t, obstacle_, robot_);
  const AgentRates obstacle_rates = clamp_obstacle_intent(intent, obstacle_, cfg_.dt, cfg_.envelope);
  const AgentRates robot_rates{cmd_.turn_rate, cmd_.accel};
  truth = relative_geometry(robot_, obstacle_, robot_rates, obstacle_rates);

  rec.truth = truth;
  rec.x = make_engagement_state(truth, robot_);
  rec.has_meas = meas.has_value();
  if (meas)
    rec.meas = *meas;
  rec.cmd = cmd_;
  rec.obstacle_rates = obstacle_rates;
  rec.verdict = classify(rec.x, cfg_.design, cfg_.envelope);
  rec.cert = certificate_sample(rec.x, cfg_.design, cfg_.envelope, cfg_.monitor);

  min_rho_ = std::min(min_rho_, truth.rho);
  min_loom_ = std::min(min_loom_, rec.x.x1);
  antitarget_hit_ = antitarget_hit_ || rec.verdict.in_antitarget;
  if (!rec.verdict.in_antitarget && !los_rate_bound_check(rec.x, derived_.los_rate_bound))
    los_ok_ = false;
  if (cmd_.engaged && !prev_engaged_)
    intervals_.push_back({t, t});
  if (cmd_.engaged)
    intervals_.back().t_end = t;
  else if (prev_engaged_)
    intervals_.back().t_end = t;
  prev_engaged_ = cmd_.engaged;

  cert_.push_back(rec.cert);
  if (keep_trace_)
    trace_.push_back(rec);
  last_ = rec;

  robot_ = step_unicycle(robot_, cmd_.turn_rate, cmd_.accel, cfg_.dt);
  obstacle_ = step_unicycle(obstacle_, obstacle_rates.turn_rate, obstacle_rates.accel, cfg_.dt);
  ++k_;
  return last_;
}

EpisodeResult Episode::result()
{
  EpisodeResult r;
  r.n_samples = cert_.size();
  r.min_rho = min_rho_;
  r.min_loom = min_loom_;
  r.min_ttc = min_loom_ < 0.0 ? -1.0 / min_loom_ : std::numeric_limits<double>::infinity();
  r.engaged_intervals = intervals_;
  r.antitarget_hit = antitarget_hit_;
  r.collision_fault = fault_;
  r.los_rate_bound_ok = los_ok_;
  const double t_end = std::max(0.0, time() - cfg_.dt);
  r.final_cross_track = cross_track_error(
    cfg_.reference_path, {robot_.x, robot_.y}, 0.0, t_end + 5.0, 0.01);
  if (cert_.size() >= 3) {
    std::vector<CertificateSample> samples = cert_;
    r.certificate = monitor(samples, cfg_.dt, cfg_.monitor);
    // Keep the monitored V-dot on the stored trace for export.
    if (keep_trace_)
      for (std::size_t i = 0; i < trace_.size() && i < samples.size(); ++i)
        trace_[i].cert.v_dot_numeric = samples[i].v_dot_numeric;
  }
  return r;
}

std::pair<std::vector<TraceRecord>, EpisodeResult> run_episode(
  const ScenarioConfig& cfg, bool keep_trace)
{
  Episode ep(cfg, keep_trace);
  while (!ep.finished())
    ep.step();
  EpisodeResult r = ep.result();
  return {ep.trace(), std::move(r)};
}

} // namespace loomcas
