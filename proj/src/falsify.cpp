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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

namespace loomcas {

namespace {

std::uint64_t episode_seed(std::uint64_t seed, std::size_t index)
{
  std::uint64_t x = seed * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(index) + 1;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Heading that puts a straight-line obstacle on a collision course with a
// robot moving at constant velocity; falls back to the current bearing.
double collision_course(const VehicleState& obstacle, double speed, const VehicleState& robot)
{
  const double dx = robot.x - obstacle.x;
  const double dy = robot.y - obstacle.y;
  const double vx = robot.v * std::cos(robot.psi);
  const double vy = robot.v * std::sin(robot.psi);
  const double a = vx * vx + vy * vy - speed * speed;
  const double b = 2.0 * (dx * vx + dy * vy);
  const double c = dx * dx + dy * dy;
  double t_hit = -1.0;
  if (std::abs(a) < 1e-12) {
    if (b < 0.0)
      t_hit = -c / b;
  } else {
    const double disc = b * b - 4.0 * a * c;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      const double r1 = (-b - sq) / (2.0 * a);
      const double r2 = (-b + sq) / (2.0 * a);
      const double lo = std::min(r1, r2), hi = std::max(r1, r2);
      t_hit = lo > 0.0 ? lo : (hi > 0.0 ? hi : -1.0);
    }
  }
  if (t_hit > 0.0)
    return std::atan2(dy + vy * t_hit, dx + vx * t_hit);
  return std::atan2(dy, dx);
}

PolicyKind pick_policy(std::mt19937_64& rng, const std::array<double, 3>& mix)
{
  std::discrete_distribution<int> pick({mix[0], mix[1], mix[2]});
  switch (pick(rng)) {
    case 0: return PolicyKind::Pursuit;
    case 1: return PolicyKind::ZigZag;
    default: return PolicyKind::HeadOn;
  }
}

int policy_slot(PolicyKind k)
{
  switch (k) {
    case PolicyKind::Pursuit: return 0;
    case PolicyKind::ZigZag: return 1;
    default: return 2;
  }
}

} // namespace

ScenarioConfig falsification_scenario(
  const ScenarioConfig& base, const FalsifyOptions& opts, std::size_t index,
  std::size_t* rejected_draws)
{
  std::mt19937_64 rng(episode_seed(opts.seed, index));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

  const double v_hi = std::min(opts.max_speed.value_or(base.envelope.v_o_max), base.envelope.v_o_max);
  const double v_lo = std::clamp(opts.min_speed, 0.0, v_hi);

  for (int attempt = 0; attempt < 1000; ++attempt) {
    ScenarioConfig cfg = base;
    cfg.seed = episode_seed(opts.seed ^ 0x5bd1e995ULL, index);
    cfg.name = base.name + "/falsify-" + std::to_string(index);

    const PolicyKind kind = pick_policy(rng, opts.mix);
    const double distance = uniform(opts.min_distance, opts.max_distance);
    const double bearing = uniform(-kPi, kPi);
    const double speed = uniform(v_lo, v_hi);

    VehicleState obstacle;
    obstacle.x = cfg.robot_init.x + distance * std::cos(bearing);
    obstacle.y = cfg.robot_init.y + distance * std::sin(bearing);
    obstacle.v = speed;
    const double aim = collision_course(obstacle, speed, cfg.robot_init);
    obstacle.psi = wrap_angle(aim + uniform(-opts.aim_jitter, opts.aim_jitter));
    cfg.obstacle_init = obstacle;

    ObstaclePolicySpec spec;
    spec.kind = kind;
    spec.speed = speed;
    if (kind == PolicyKind::ZigZag) {
      spec.period = uniform(3.0, 8.0);
      spec.amplitude = uniform(kPi / 8.0, kPi / 3.0);
      spec.base_heading = obstacle.psi;
    }
    cfg.obstacle_policy = spec;

    const RelativeGeometry g0 = relative_geometry(cfg.robot_init, obstacle);
    const RegionVerdict v0 =
      classify(make_engagement_state(g0, cfg.robot_init), cfg.design, cfg.envelope);
    if (!v0.in_avoidance())
      return cfg;
    if (rejected_draws)
      ++*rejected_draws;
  }
  throw RejectedScenario("falsify: could not draw an initial state outside the avoidance set");
}

FalsificationReport falsify(const ScenarioConfig& base, const FalsifyOptions& opts)
{
  if (opts.n_episodes == 0)
    throw ConfigError("falsify: n_episodes must be at least 1");
  base.validate();

  struct Slot
  {
    EpisodeResult result;
    PolicyKind policy = PolicyKind::HeadOn;
    double speed = 0.0;
    std::size_t rejected = 0;
  };
  std::vector<Slot> slots(opts.n_episodes);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < slots.size(); i = next++) {
      Slot& s = slots[i];
      const ScenarioConfig cfg = falsification_scenario(base, opts, i, &s.rejected);
      s.policy = cfg.obstacle_policy.kind;
      s.speed = cfg.obstacle_init.v;
      s.result = run_episode(cfg, false).second;
    }
  };

  unsigned n_threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, slots.size()));
  {
    std::vector<std::jthread> pool;
    for (unsigned i = 1; i < n_threads; ++i)
      pool.emplace_back(worker);
    worker();
  }

  // Merge in index order so the report does not depend on scheduling.
  FalsificationReport rep;
  rep.n_episodes = slots.size();
  rep.worst_min_rho = std::numeric_limits<double>::infinity();
  rep.worst_min_ttc = std::numeric_limits<double>::infinity();
  rep.worst_v_dot = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const Slot& s = slots[i];
    const EpisodeResult& r = s.result;
    rep.n_rejected_draws += s.rejected;
    ++rep.episodes_per_policy[static_cast<std::size_t>(policy_slot(s.policy))];
    rep.worst_min_rho = std::min(rep.worst_min_rho, r.min_rho);
    rep.worst_min_ttc = std::min(rep.worst_min_ttc, r.min_ttc);
    if (r.certificate.pass)
      ++rep.certificate_passes;
    rep.conflict_samples += r.certificate.n_conflict;
    rep.certificate_violations += r.certificate.n_violations;
    if (r.certificate.n_checked > 0)
      rep.worst_v_dot = std::min(rep.worst_v_dot, r.certificate.worst_v_dot);
    if (r.antitarget_hit) {
      ++rep.n_antitarget_hits;
      if (rep.counterexamples.size() < opts.max_counterexamples)
        rep.counterexamples.push_back({i, s.policy, s.speed, r.min_rho, r.min_ttc, r.collision_fault});
    }
  }
  if (!std::isfinite(rep.worst_v_dot))
    rep.worst_v_dot = 0.0;
  rep.certificate_pass_rate =
    static_cast<double>(rep.certificate_passes) / static_cast<double>(rep.n_episodes);
  return rep;
}

} // namespace loomcas
