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

#include "loomcas/certificate.hpp"
#include "loomcas/control.hpp"
#include "loomcas/geometry.hpp"
#include "loomcas/params.hpp"
#include "loomcas/regions.hpp"
#include "loomcas/sensing.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace loomcas {

// ---------------------------------------------------------------------------
// Reference path

struct PathPoint
{
  double x = 0.0;
  double y = 0.0;
};

struct TimedWaypoint
{
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
};

// Time-parameterised virtual target: either polynomials x(t), y(t) or
// piecewise-linear interpolation between timed waypoints.
struct ReferencePath
{
  enum class Kind { Polynomial, Waypoints };

  Kind kind = Kind::Polynomial;
  std::vector<double> x_coeffs{0.0};  // ascending powers of t
  std::vector<double> y_coeffs{0.0};
  std::vector<TimedWaypoint> waypoints;

  PathPoint at(double t) const;
  void validate() const;
};

/// Smallest distance from p to the path sampled on [t0, t1] at the given resolution.
double cross_track_error(const ReferencePath& path, PathPoint p, double t0, double t1,
                         double resolution = 0.01);

// ---------------------------------------------------------------------------
// Obstacle policies

enum class PolicyKind { Static, HeadOn, Pursuit, ZigZag, ScriptedWaypoints, External };

std::string to_string(PolicyKind kind);
PolicyKind policy_kind_from_string(const std::string& id);  // throws ConfigError

struct ObstaclePolicySpec
{
  PolicyKind kind = PolicyKind::HeadOn;
  std::optional<double> speed;         // m/s; default holds the initial speed
  double gain = 2.0;                   // heading P-gain for steering policies, 1/s
  double period = 4.0;                 // zig-zag period, s
  double amplitude = kPi / 4.0;        // zig-zag heading swing, rad
  std::optional<double> base_heading;  // zig-zag centre heading; default: bearing to the robot at t0
  double start_time = 0.0;             // policy holds still (zero turn, hold speed) before this
  std::vector<PathPoint> waypoints;
  double waypoint_tolerance = 0.2;     // m
};

// What the policy would like to do; clamped to the envelope before use.
struct ObstacleIntent
{
  double turn_rate = 0.0;  // rad/s
  double speed = 0.0;      // m/s
};

class ObstaclePolicy
{
public:
  virtual ~ObstaclePolicy() = default;
  virtual ObstacleIntent command(double t, const VehicleState& self, const VehicleState& robot) = 0;
  virtual PolicyKind kind() const = 0;
};

// Policy whose command is set from outside (the live console).
class ExternalPolicy : public ObstaclePolicy
{
public:
  ObstacleIntent command(double t, const VehicleState& self, const VehicleState& robot) override;
  PolicyKind kind() const override { return PolicyKind::External; }

  void set_command(double turn_rate, double speed);
  bool has_command() const { return command_.has_value(); }

private:
  std::optional<ObstacleIntent> command_;
};

std::unique_ptr<ObstaclePolicy> make_policy(
  const ObstaclePolicySpec& spec, const VehicleState& obstacle_init, const VehicleState& robot_init);

/// Clamps an intent to the obstacle envelope: |turn| <= psi_dot_o_max,
/// speed target in [0, v_o_max], |accel| <= a_o_max over one step of dt.
AgentRates clamp_obstacle_intent(
  const ObstacleIntent& intent, const VehicleState& self, double dt, const EnvelopeBounds& b);

// ---------------------------------------------------------------------------
// Scenario and trace

struct ScenarioConfig
{
  std::string name = "scenario";
  double dt = 0.005;        // physics step, s
  double duration = 20.0;   // s
  VehicleState robot_init;
  VehicleState obstacle_init;
  ObstaclePolicySpec obstacle_policy;
  ReferencePath reference_path;
  SensorConfig sensor;      // control runs at sensor.rate
  DesignParams design;
  EnvelopeBounds envelope;
  TrackingGains tracking;
  ControlOptions control;
  MonitorOptions monitor;
  std::uint64_t seed = 0;
  // Reject scenarios whose initial state lies inside the avoidance set.
  bool require_initial_outside_avoidance = true;

  void validate() const;  // throws ConfigError
  int control_every() const;  // physics steps per control tick
};

struct TraceRecord
{
  std::int64_t step = 0;
  double t = 0.0;
  VehicleState robot;
  VehicleState obstacle;
  RelativeGeometry truth;
  EngagementState x;
  bool has_meas = false;
  Measurement meas;
  ControlCommand cmd;
  AgentRates obstacle_rates;
  RegionVerdict verdict;
  CertificateSample cert;
};

struct EngagedInterval
{
  double t_start = 0.0;
  double t_end = 0.0;
};

struct EpisodeResult
{
  std::size_t n_samples = 0;
  double min_rho = 0.0;        // m
  double min_ttc = 0.0;        // s; +inf if never approaching
  double min_loom = 0.0;       // 1/s
  std::vector<EngagedInterval> engaged_intervals;
  bool antitarget_hit = false;
  bool collision_fault = false;
  bool los_rate_bound_ok = true;   // |x3| <= L at every sample outside T
  double final_cross_track = 0.0;  // m, distance to the reference path at the end
  CertificateVerdict certificate;
};

// One closed-loop run, advanced one physics step at a time.
// Single owner; not thread-safe.
class Episode
{
public:
  /// Throws ConfigError for invalid configs and RejectedScenario when the
  /// initial state is inside the avoidance set.
  explicit Episode(ScenarioConfig cfg, bool keep_trace = true);

  /// Records the current sample, then integrates both agents over dt.
  /// Returns the recorded sample.
  const TraceRecord& step();

  bool finished() const;
  double time() const;
  std::int64_t total_steps() const { return total_steps_; }

  /// Replaces the obstacle policy (e.g. hands control to a human).
  void set_obstacle_policy(std::unique_ptr<ObstaclePolicy> policy);
  ObstaclePolicy& obstacle_policy() { return *policy_; }

  const ScenarioConfig& config() const { return cfg_; }
  const std::vector<TraceRecord>& trace() const { return trace_; }
  const TraceRecord& last() const { return last_; }
  const VehicleState& robot() const { return robot_; }
  const VehicleState& obstacle() const { return obstacle_; }

  /// Summary so far (runs the certificate monitor over all recorded samples).
  EpisodeResult result();

private:
  ScenarioConfig cfg_;
  bool keep_trace_;
  std::unique_ptr<ObstaclePolicy> policy_;
  Sensor sensor_;
  GateState gate_;
  DerivedConstants derived_;
  VehicleState robot_;
  VehicleState obstacle_;
  ControlCommand cmd_;
  std::int64_t k_ = 0;
  std::int64_t total_steps_ = 0;
  int control_every_ = 1;
  bool fault_ = false;

  TraceRecord last_;
  std::vector<TraceRecord> trace_;
  std::vector<CertificateSample> cert_;

  // Running statistics.
  double min_rho_;
  double min_loom_ = 0.0;
  bool antitarget_hit_ = false;
  bool los_ok_ = true;
  std::vector<EngagedInterval> intervals_;
  bool prev_engaged_ = false;
};

/// Runs a scenario to completion. The trace is returned only if requested.
std::pair<std::vector<TraceRecord>, EpisodeResult> run_episode(
  const ScenarioConfig& cfg, bool keep_trace = true);

// ---------------------------------------------------------------------------
// Falsification

struct FalsifyOptions
{
  std::size_t n_episodes = 1000;
  std::uint64_t seed = 7;
  // Relative weights of pursuit, zig-zag and head-on obstacles.
  std::array<double, 3> mix{1.0, 1.0, 1.0};
  double min_distance = 3.0;   // m, initial separation range
  double max_distance = 8.0;
  double min_speed = 0.0;      // m/s, obstacle speed range (upper end v_o_max)
  std::optional<double> max_speed;
  double aim_jitter = 0.15;    // rad, uniform perturbation of the collision-course heading
  unsigned threads = 0;        // 0: hardware concurrency
  std::size_t max_counterexamples = 20;
};

struct Counterexample
{
  std::size_t episode = 0;
  PolicyKind policy = PolicyKind::HeadOn;
  double obstacle_speed = 0.0;
  double min_rho = 0.0;
  double min_ttc = 0.0;
  bool collision_fault = false;
};

struct FalsificationReport
{
  std::size_t n_episodes = 0;
  std::size_t n_antitarget_hits = 0;
  std::size_t n_rejected_draws = 0;  // initial draws inside A, redrawn
  std::vector<Counterexample> counterexamples;
  double worst_min_rho = 0.0;
  double worst_min_ttc = 0.0;
  std::size_t certificate_passes = 0;
  double certificate_pass_rate = 0.0;
  std::size_t conflict_samples = 0;
  std::size_t certificate_violations = 0;
  double worst_v_dot = 0.0;
  std::array<std::size_t, 3> episodes_per_policy{0, 0, 0};  // pursuit, zig-zag, head-on
};

/// Draws the scenario for one falsification episode (deterministic in seed and index).
ScenarioConfig falsification_scenario(
  const ScenarioConfig& base, const FalsifyOptions& opts, std::size_t index,
  std::size_t* rejected_draws = nullptr);

/// Randomised search for trajectories entering the anti-target set.
/// Throws ConfigError when n_episodes == 0.
FalsificationReport falsify(const ScenarioConfig& base, const FalsifyOptions& opts);

} // namespace loomcas
