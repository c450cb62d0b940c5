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

#include "loomcas/io.hpp"

#include "loomcas/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>

namespace loomcas {

namespace {

// Reads members of one JSON object and rejects anything it did not ask for.
class Section
{
public:
  Section(const Json& obj, std::string path) : obj_(obj), path_(std::move(path))
  {
    if (!obj_.is_object())
      throw ConfigError(path_ + ": expected an object");
  }

  template <typename T>
  void get(const char* key, T& out)
  {
    seen_.insert(key);
    auto it = obj_.find(key);
    if (it == obj_.end())
      return;
    try {
      out = it->template get<T>();
    } catch (const Json::exception&) {
      throw ConfigError(path_ + "." + key + ": wrong type");
    }
  }

  template <typename T>
  void get(const char* key, std::optional<T>& out)
  {
    seen_.insert(key);
    auto it = obj_.find(key);
    if (it == obj_.end() || it->is_null())
      return;
    try {
      out = it->template get<T>();
    } catch (const Json::exception&) {
      throw ConfigError(path_ + "." + key + ": wrong type");
    }
  }

  const Json* child(const char* key)
  {
    seen_.insert(key);
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  std::string path(const char* key) const { return path_ + "." + key; }

  void finish() const
  {
    for (auto it = obj_.begin(); it != obj_.end(); ++it)
      if (!seen_.count(it.key()))
        throw ConfigError(path_ + ": unknown key '" + it.key() + "'");
  }

private:
  const Json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

VehicleState vehicle_from(const Json& j, const std::string& path)
{
  Section s(j, path);
  VehicleState v;
  s.get("x", v.x);
  s.get("y", v.y);
  s.get("psi", v.psi);
  s.get("v", v.v);
  s.finish();
  return v;
}

Json vehicle_json(const VehicleState& v)
{
  return {{"x", v.x}, {"y", v.y}, {"psi", v.psi}, {"v", v.v}};
}

EnvelopeBounds envelope_from(const Json& j)
{
  Section s(j, "envelope");
  EnvelopeBounds b;
  s.get("v_r_min", b.v_r_min);
  s.get("v_r_max", b.v_r_max);
  s.get("v_o_max", b.v_o_max);
  s.get("psi_dot_o_max", b.psi_dot_o_max);
  s.get("a_r_max", b.a_r_max);
  s.get("a_o_max", b.a_o_max);
  s.get("u_tr_max", b.u_tr_max);
  s.finish();
  return b;
}

DesignParams design_from(const Json& j)
{
  Section s(j, "design");
  DesignParams d;
  s.get("r", d.r);
  s.get("rho_safe", d.rho_safe);
  s.get("tau_safe", d.tau_safe);
  s.get("beta", d.beta);
  s.get("omega", d.omega);
  s.get("k", d.k);
  s.finish();
  return d;
}

ObstaclePolicySpec policy_from(const Json& j)
{
  Section s(j, "scenario.obstacle_policy");
  ObstaclePolicySpec p;
  std::string kind = to_string(p.kind);
  s.get("kind", kind);
  p.kind = policy_kind_from_string(kind);
  s.get("speed", p.speed);
  s.get("gain", p.gain);
  s.get("period", p.period);
  s.get("amplitude", p.amplitude);
  s.get("base_heading", p.base_heading);
  s.get("start_time", p.start_time);
  s.get("waypoint_tolerance", p.waypoint_tolerance);
  if (const Json* w = s.child("waypoints")) {
    std::vector<std::array<double, 2>> pts;
    try {
      pts = w->get<std::vector<std::array<double, 2>>>();
    } catch (const Json::exception&) {
      throw ConfigError("scenario.obstacle_policy.waypoints: expected [[x, y], ...]");
    }
    for (const auto& q : pts)
      p.waypoints.push_back({q[0], q[1]});
  }
  s.finish();
  return p;
}

ReferencePath path_from(const Json& j)
{
  Section s(j, "scenario.reference_path");
  ReferencePath p;
  std::string kind = "polynomial";
  s.get("kind", kind);
  if (kind == "polynomial") {
    p.kind = ReferencePath::Kind::Polynomial;
    s.get("x", p.x_coeffs);
    s.get("y", p.y_coeffs);
  } else if (kind == "waypoints") {
    p.kind = ReferencePath::Kind::Waypoints;
    if (const Json* w = s.child("points")) {
      std::vector<std::array<double, 3>> pts;
      try {
        pts = w->get<std::vector<std::array<double, 3>>>();
      } catch (const Json::exception&) {
        throw ConfigError("scenario.reference_path.points: expected [[t, x, y], ...]");
      }
      for (const auto& q : pts)
        p.waypoints.push_back({q[0], q[1], q[2]});
    }
  } else {
    throw ConfigError("scenario.reference_path.kind: expected 'polynomial' or 'waypoints'");
  }
  s.finish();
  return p;
}

SensorConfig sensor_from(const Json& j)
{
  Section s(j, "scenario.sensor");
  SensorConfig c;
  s.get("noise_std_loom", c.noise_std_loom);
  s.get("noise_std_lambda", c.noise_std_lambda);
  s.get("noise_std_lambda_dot", c.noise_std_lambda_dot);
  s.get("latency", c.latency);
  s.get("rate", c.rate);
  s.get("seed", c.seed);
  s.finish();
  return c;
}

std::string gate_name(GateMode g)
{
  return g == GateMode::Approach ? "approach" : "conflict_bound";
}

ControlOptions control_from(const Json& j)
{
  Section s(j, "scenario.control");
  ControlOptions c;
  std::string gate = gate_name(c.gate);
  s.get("gate", gate);
  if (gate == "approach")
    c.gate = GateMode::Approach;
  else if (gate == "conflict_bound")
    c.gate = GateMode::ConflictBound;
  else
    throw ConfigError("scenario.control.gate: expected 'approach' or 'conflict_bound'");
  s.get("hysteresis_fraction", c.hysteresis_fraction);
  s.get("engage_loom", c.engage_loom);
  s.get("ca_saturation", c.ca_saturation);
  s.get("flip_avoidance_sign", c.flip_avoidance_sign);
  s.get("avoidance_enabled", c.avoidance_enabled);
  s.finish();
  return c;
}

template <typename T>
Json optional_json(const std::optional<T>& v)
{
  return v ? Json(*v) : Json(nullptr);
}

// Non-finite numbers are not representable in JSON; they become null.
Json num(double v)
{
  return std::isfinite(v) ? Json(v) : Json(nullptr);
}

void put(std::ostream& os, double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  os << buf;
}

} // namespace

Json read_json_file(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("'" + path.string() + "': " + e.what());
  }
}

void apply_override(Json& doc, const std::string& assignment)
{
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("override '" + assignment + "': expected key.path=value");
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);

  Json value = Json::parse(text, nullptr, false);
  if (value.is_discarded())
    value = text;

  Json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty())
      throw ConfigError("override '" + assignment + "': empty key segment");
    if (!node->is_object()) {
      if (!node->is_null())
        throw ConfigError("override '" + assignment + "': '" + part + "' is not inside an object");
      *node = Json::object();
    }
    node = &(*node)[part];
    if (dot == std::string::npos)
      break;
    start = dot + 1;
  }
  *node = std::move(value);
}

ScenarioConfig scenario_from_json(const Json& doc)
{
  Section top(doc, "config");
  ScenarioConfig cfg;
  if (const Json* j = top.child("envelope"))
    cfg.envelope = envelope_from(*j);
  if (const Json* j = top.child("design"))
    cfg.design = design_from(*j);
  if (const Json* sc = top.child("scenario")) {
    Section s(*sc, "scenario");
    s.get("name", cfg.name);
    s.get("dt", cfg.dt);
    s.get("duration", cfg.duration);
    s.get("seed", cfg.seed);
    s.get("require_initial_outside_avoidance", cfg.require_initial_outside_avoidance);
    if (const Json* j = s.child("robot"))
      cfg.robot_init = vehicle_from(*j, s.path("robot"));
    if (const Json* j = s.child("obstacle"))
      cfg.obstacle_init = vehicle_from(*j, s.path("obstacle"));
    if (const Json* j = s.child("obstacle_policy"))
      cfg.obstacle_policy = policy_from(*j);
    if (const Json* j = s.child("reference_path"))
      cfg.reference_path = path_from(*j);
    if (const Json* j = s.child("sensor"))
      cfg.sensor = sensor_from(*j);
    if (const Json* j = s.child("tracking")) {
      Section t(*j, s.path("tracking"));
      t.get("heading_gain", cfg.tracking.heading_gain);
      t.get("speed_gain", cfg.tracking.speed_gain);
      t.finish();
    }
    if (const Json* j = s.child("control"))
      cfg.control = control_from(*j);
    if (const Json* j = s.child("monitor")) {
      Section m(*j, s.path("monitor"));
      m.get("epsilon", cfg.monitor.epsilon);
      m.get("symmetry_band", cfg.monitor.symmetry_band);
      m.finish();
    }
    s.finish();
  }
  top.finish();
  return cfg;
}

Json to_json(const EnvelopeBounds& b)
{
  return {{"v_r_min", b.v_r_min}, {"v_r_max", b.v_r_max}, {"v_o_max", b.v_o_max},
          {"psi_dot_o_max", b.psi_dot_o_max}, {"a_r_max", b.a_r_max},
          {"a_o_max", b.a_o_max}, {"u_tr_max", b.u_tr_max}};
}

Json to_json(const DesignParams& d)
{
  return {{"r", d.r}, {"rho_safe", d.rho_safe}, {"tau_safe", d.tau_safe},
          {"beta", d.beta}, {"omega", d.omega}, {"k", d.k}};
}

Json to_json(const ScenarioConfig& cfg)
{
  const ObstaclePolicySpec& p = cfg.obstacle_policy;
  Json waypoints = Json::array();
  for (const auto& w : p.waypoints)
    waypoints.push_back({w.x, w.y});

  Json path;
  if (cfg.reference_path.kind == ReferencePath::Kind::Polynomial) {
    path = {{"kind", "polynomial"}, {"x", cfg.reference_path.x_coeffs}, {"y", cfg.reference_path.y_coeffs}};
  } else {
    Json pts = Json::array();
    for (const auto& w : cfg.reference_path.waypoints)
      pts.push_back({w.t, w.x, w.y});
    path = {{"kind", "waypoints"}, {"points", pts}};
  }

  const SensorConfig& s = cfg.sensor;
  const ControlOptions& c = cfg.control;
  Json scenario = {
    {"name", cfg.name},
    {"dt", cfg.dt},
    {"duration", cfg.duration},
    {"seed", cfg.seed},
    {"require_initial_outside_avoidance", cfg.require_initial_outside_avoidance},
    {"robot", vehicle_json(cfg.robot_init)},
    {"obstacle", vehicle_json(cfg.obstacle_init)},
    {"obstacle_policy",
     {{"kind", to_string(p.kind)}, {"speed", optional_json(p.speed)}, {"gain", p.gain},
      {"period", p.period}, {"amplitude", p.amplitude},
      {"base_heading", optional_json(p.base_heading)}, {"start_time", p.start_time},
      {"waypoints", waypoints}, {"waypoint_tolerance", p.waypoint_tolerance}}},
    {"reference_path", path},
    {"sensor",
     {{"noise_std_loom", s.noise_std_loom}, {"noise_std_lambda", s.noise_std_lambda},
      {"noise_std_lambda_dot", s.noise_std_lambda_dot}, {"latency", s.latency},
      {"rate", s.rate}, {"seed", s.seed}}},
    {"tracking", {{"heading_gain", cfg.tracking.heading_gain}, {"speed_gain", cfg.tracking.speed_gain}}},
    {"control",
     {{"gate", gate_name(c.gate)}, {"hysteresis_fraction", c.hysteresis_fraction},
      {"engage_loom", optional_json(c.engage_loom)}, {"ca_saturation", optional_json(c.ca_saturation)},
      {"flip_avoidance_sign", c.flip_avoidance_sign}, {"avoidance_enabled", c.avoidance_enabled}}},
    {"monitor", {{"epsilon", cfg.monitor.epsilon}, {"symmetry_band", cfg.monitor.symmetry_band}}},
  };
  return {{"envelope", to_json(cfg.envelope)}, {"design", to_json(cfg.design)}, {"scenario", scenario}};
}

Json to_json(const FeasibilityReport& report)
{
  Json conds = Json::array();
  for (const auto& c : report.conditions) {
    const char* rel = c.relation == Relation::Greater ? ">" : c.relation == Relation::Less ? "<" : ">=";
    conds.push_back({{"name", c.name}, {"description", c.description}, {"relation", rel},
                     {"lhs", num(c.lhs)}, {"rhs", num(c.rhs)}, {"satisfied", c.satisfied},
                     {"margin", num(c.margin)}});
  }
  return {{"conditions", conds},
          {"all_satisfied", report.all_satisfied()},
          {"derived",
           {{"gamma", report.derived.gamma}, {"los_rate_bound", report.derived.los_rate_bound},
            {"u_max", num(report.derived.u_max)}}},
          {"notes", report.notes}};
}

Json to_json(const CertificateVerdict& v)
{
  return {{"pass", v.pass}, {"n_samples", v.n_samples}, {"n_conflict", v.n_conflict},
          {"n_checked", v.n_checked}, {"n_violations", v.n_violations},
          {"worst_v_dot", num(v.worst_v_dot)}, {"worst_index", v.worst_index}};
}

Json to_json(const EpisodeResult& r)
{
  Json intervals = Json::array();
  for (const auto& iv : r.engaged_intervals)
    intervals.push_back({iv.t_start, iv.t_end});
  return {{"n_samples", r.n_samples},
          {"min_rho", num(r.min_rho)},
          {"min_ttc", num(r.min_ttc)},
          {"min_loom", num(r.min_loom)},
          {"engaged_intervals", intervals},
          {"antitarget_hit", r.antitarget_hit},
          {"collision_fault", r.collision_fault},
          {"los_rate_bound_ok", r.los_rate_bound_ok},
          {"final_cross_track", num(r.final_cross_track)},
          {"certificate", to_json(r.certificate)}};
}

Json to_json(const FalsificationReport& r)
{
  Json cex = Json::array();
  for (const auto& c : r.counterexamples)
    cex.push_back({{"episode", c.episode}, {"policy", to_string(c.policy)},
                   {"obstacle_speed", c.obstacle_speed}, {"min_rho", num(c.min_rho)},
                   {"min_ttc", num(c.min_ttc)}, {"collision_fault", c.collision_fault}});
  return {{"n_episodes", r.n_episodes},
          {"n_antitarget_hits", r.n_antitarget_hits},
          {"n_rejected_draws", r.n_rejected_draws},
          {"worst_min_rho", num(r.worst_min_rho)},
          {"worst_min_ttc", num(r.worst_min_ttc)},
          {"certificate_passes", r.certificate_passes},
          {"certificate_pass_rate", r.certificate_pass_rate},
          {"conflict_samples", r.conflict_samples},
          {"certificate_violations", r.certificate_violations},
          {"worst_v_dot", num(r.worst_v_dot)},
          {"episodes_per_policy",
           {{"pursuit", r.episodes_per_policy[0]}, {"zig_zag", r.episodes_per_policy[1]},
            {"head_on", r.episodes_per_policy[2]}}},
          {"counterexamples", cex}};
}

Json to_json(const TraceRecord& q)
{
  Json meas = q.has_meas
    ? Json{{"loom", q.meas.loom}, {"lambda", q.meas.lambda}, {"lambda_dot", q.meas.lambda_dot},
           {"stamp", q.meas.stamp}}
    : Json(nullptr);
  return {
    {"step", q.step},
    {"t", q.t},
    {"robot", vehicle_json(q.robot)},
    {"obstacle", vehicle_json(q.obstacle)},
    {"truth",
     {{"rho", q.truth.rho}, {"lambda", q.truth.lambda}, {"rho_dot", q.truth.rho_dot},
      {"lambda_dot", q.truth.lambda_dot}, {"rho_ddot", q.truth.rho_ddot}}},
    {"x", {q.x.x1, q.x.x2, q.x.x3, q.x.x4, q.x.x5, q.x.x6}},
    {"meas", meas},
    {"cmd",
     {{"u", q.cmd.turn_rate}, {"accel", q.cmd.accel}, {"u_ca", q.cmd.ca_component},
      {"u_tr", q.cmd.tr_component}, {"engaged", q.cmd.engaged}}},
    {"obstacle_rates", {{"turn_rate", q.obstacle_rates.turn_rate}, {"accel", q.obstacle_rates.accel}}},
    {"verdict",
     {{"T", q.verdict.in_antitarget}, {"A1", q.verdict.in_avoidance_a1}, {"A2", q.verdict.in_avoidance_a2},
      {"conflict", q.verdict.in_conflict}, {"a1_value", num(q.verdict.a1_value)},
      {"a2_value", num(q.verdict.a2_value)}, {"delta_t", q.verdict.delta_t}}},
    {"cert",
     {{"a1", num(q.cert.a1)}, {"a2", num(q.cert.a2)}, {"v", num(q.cert.v)},
      {"v_dot", num(q.cert.v_dot_numeric)}, {"in_conflict", q.cert.in_conflict},
      {"symmetry", q.cert.on_symmetry_surface}}},
  };
}

const std::vector<std::string>& trace_csv_columns()
{
  static const std::vector<std::string> cols = {
    "step", "t",
    "robot_x", "robot_y", "robot_psi", "robot_v",
    "obstacle_x", "obstacle_y", "obstacle_psi", "obstacle_v",
    "rho", "lambda", "rho_dot", "lambda_dot", "rho_ddot",
    "x1", "x2", "x3", "x4", "x5", "x6",
    "has_meas", "meas_loom", "meas_lambda", "meas_lambda_dot", "meas_stamp",
    "u", "accel", "u_ca", "u_tr", "engaged",
    "obstacle_turn_rate", "obstacle_accel",
    "in_T", "in_A1", "in_A2", "in_conflict", "a1_value", "a2_value", "delta_t",
    "cert_a1", "cert_a2", "cert_v", "cert_v_dot", "cert_in_conflict", "cert_symmetry",
  };
  return cols;
}

void write_trace_csv(std::ostream& os, std::span<const TraceRecord> trace)
{
  os << "# loomcas trace v" << kTraceFormatVersion << '\n';
  const auto& cols = trace_csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i)
    os << (i ? "," : "") << cols[i];
  os << '\n';

  for (const TraceRecord& q : trace) {
    const double values[] = {
      q.robot.x, q.robot.y, q.robot.psi, q.robot.v,
      q.obstacle.x, q.obstacle.y, q.obstacle.psi, q.obstacle.v,
      q.truth.rho, q.truth.lambda, q.truth.rho_dot, q.truth.lambda_dot, q.truth.rho_ddot,
      q.x.x1, q.x.x2, q.x.x3, q.x.x4, q.x.x5, q.x.x6,
    };
    os << q.step << ',';
    put(os, q.t);
    for (double v : values) {
      os << ',';
      put(os, v);
    }
    os << ',' << int(q.has_meas);
    for (double v : {q.meas.loom, q.meas.lambda, q.meas.lambda_dot, q.meas.stamp}) {
      os << ',';
      put(os, v);
    }
    for (double v : {q.cmd.turn_rate, q.cmd.accel, q.cmd.ca_component, q.cmd.tr_component}) {
      os << ',';
      put(os, v);
    }
    os << ',' << int(q.cmd.engaged);
    for (double v : {q.obstacle_rates.turn_rate, q.obstacle_rates.accel}) {
      os << ',';
      put(os, v);
    }
    os << ',' << int(q.verdict.in_antitarget) << ',' << int(q.verdict.in_avoidance_a1)
       << ',' << int(q.verdict.in_avoidance_a2) << ',' << int(q.verdict.in_conflict);
    for (double v : {q.verdict.a1_value, q.verdict.a2_value, q.verdict.delta_t,
                     q.cert.a1, q.cert.a2, q.cert.v, q.cert.v_dot_numeric}) {
      os << ',';
      put(os, v);
    }
    os << ',' << int(q.cert.in_conflict) << ',' << int(q.cert.on_symmetry_surface) << '\n';
  }
}

void write_trace_jsonl(std::ostream& os, std::span<const TraceRecord> trace)
{
  for (const TraceRecord& q : trace)
    os << to_json(q).dump() << '\n';
}

void write_plot_csv(std::ostream& os, std::span<const TraceRecord> trace)
{
  os << "t,rho,ttc,u_ca,u_tr,engaged\n";
  for (const TraceRecord& q : trace) {
    put(os, q.t);
    os << ',';
    put(os, q.truth.rho);
    os << ',';
    if (q.x.x1 < 0.0)
      put(os, -1.0 / q.x.x1);
    os << ',';
    put(os, q.cmd.ca_component);
    os << ',';
    put(os, q.cmd.tr_component);
    os << ',' << int(q.cmd.engaged) << '\n';
  }
}

} // namespace loomcas
