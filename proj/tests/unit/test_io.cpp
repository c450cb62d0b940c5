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
#include "loomcas/io.hpp"

#include <doctest.h>

#include <sstream>

using namespace loomcas;

TEST_CASE("overrides use dotted keys")
{
  Json doc = {{"design", {{"beta", 6.3}}}};
  apply_override(doc, "design.beta=7.5");
  apply_override(doc, "scenario.name=sweep-1");
  apply_override(doc, "scenario.robot.v=0.4");
  apply_override(doc, "scenario.reference_path.x=[0,1]");
  CHECK(doc["design"]["beta"] == 7.5);
  CHECK(doc["scenario"]["name"] == "sweep-1");
  CHECK(doc["scenario"]["robot"]["v"] == 0.4);
  const ScenarioConfig cfg = scenario_from_json(doc);
  CHECK(cfg.design.beta == 7.5);
  CHECK(cfg.robot_init.v == 0.4);
  CHECK(cfg.reference_path.x_coeffs.size() == 2);

  CHECK_THROWS_AS(apply_override(doc, "design.beta"), ConfigError);
  CHECK_THROWS_AS(apply_override(doc, "design..beta=1"), ConfigError);
  CHECK_THROWS_AS(apply_override(doc, "design.beta.x=1"), ConfigError);
}

TEST_CASE("config parsing rejects unknown keys and wrong types")
{
  CHECK_THROWS_AS(scenario_from_json({{"desing", Json::object()}}), ConfigError);
  CHECK_THROWS_AS(scenario_from_json({{"design", {{"betta", 1.0}}}}), ConfigError);
  CHECK_THROWS_AS(scenario_from_json({{"design", {{"beta", "x"}}}}), ConfigError);
  CHECK_THROWS_AS(scenario_from_json({{"scenario", {{"obstacle_policy", {{"kind", "nope"}}}}}}), ConfigError);
  CHECK_THROWS_AS(scenario_from_json({{"scenario", {{"control", {{"gate", "late"}}}}}}), ConfigError);
  CHECK_THROWS_AS(scenario_from_json(Json::array()), ConfigError);
  CHECK_THROWS_AS(read_json_file("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("config round trip")
{
  ScenarioConfig cfg;
  cfg.name = "rt";
  cfg.seed = 42;
  cfg.obstacle_policy.kind = PolicyKind::ScriptedWaypoints;
  cfg.obstacle_policy.waypoints = {{1, 2}, {3, 4}};
  cfg.obstacle_policy.speed = 1.5;
  cfg.reference_path.kind = ReferencePath::Kind::Waypoints;
  cfg.reference_path.waypoints = {{0, 0, 0}, {1, 1, 1}};
  cfg.control.gate = GateMode::ConflictBound;
  cfg.control.ca_saturation = 10.0;
  cfg.sensor.latency = 0.02;
  cfg.design.omega = 2.0;
  const Json j = to_json(cfg);
  const ScenarioConfig back = scenario_from_json(j);
  CHECK(to_json(back) == j);
  CHECK(back.control.gate == GateMode::ConflictBound);
  CHECK(back.obstacle_policy.waypoints.size() == 2);
  CHECK(*back.obstacle_policy.speed == 1.5);
}

TEST_CASE("trace exports")
{
  ScenarioConfig cfg;
  cfg.duration = 0.05;
  cfg.robot_init = {0, 0, 0, 0.3};
  cfg.obstacle_init = {6, 0, kPi, 1.0};
  cfg.reference_path.x_coeffs = {0.3, 0.3};
  const auto [trace, result] = run_episode(cfg);
  REQUIRE(trace.size() == 11);

  std::ostringstream csv;
  write_trace_csv(csv, trace);
  std::istringstream in(csv.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "# loomcas trace v1");
  std::getline(in, line);
  CHECK(std::count(line.begin(), line.end(), ',') + 1 == static_cast<long>(trace_csv_columns().size()));
  int rows = 0;
  while (std::getline(in, line)) {
    CHECK(std::count(line.begin(), line.end(), ',') + 1 == static_cast<long>(trace_csv_columns().size()));
    ++rows;
  }
  CHECK(rows == 11);

  std::ostringstream jsonl;
  write_trace_jsonl(jsonl, trace);
  std::istringstream jin(jsonl.str());
  std::getline(jin, line);
  const Json first = Json::parse(line);
  CHECK(first["t"] == 0.0);
  CHECK(first["truth"]["rho"] == 6.0);
  CHECK(first["cmd"]["engaged"] == true);

  std::ostringstream plot;
  write_plot_csv(plot, trace);
  std::istringstream pin(plot.str());
  std::getline(pin, line);
  CHECK(line == "t,rho,ttc,u_ca,u_tr,engaged");
  std::getline(pin, line);
  CHECK(line.rfind("0,6,4.6153846153846", 0) == 0);

  const Json r = to_json(result);
  CHECK(r["engaged_intervals"].size() == 1);
  CHECK(r["certificate"]["pass"] == true);
}

TEST_CASE("feasibility report json")
{
  const Json j = to_json(check_feasibility({}, {}));
  CHECK(j["all_satisfied"] == true);
  CHECK(j["conditions"].size() == 4);
  CHECK(j["conditions"][3]["relation"] == ">=");
}
