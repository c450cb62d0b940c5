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

#include "loomcas/bridge.hpp"
#include "loomcas/control.hpp"
#include "loomcas/errors.hpp"
#include "loomcas/io.hpp"
#include "loomcas/regions.hpp"
#include "loomcas/sensing.hpp"
#include "loomcas/sim.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <tuple>

namespace py = pybind11;
using namespace loomcas;

namespace {

using State4 = std::tuple<double, double, double, double>;

VehicleState vehicle(const State4& s)
{
  return {std::get<0>(s), std::get<1>(s), std::get<2>(s), std::get<3>(s)};
}

ScenarioConfig config_from(const std::string& text)
{
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return scenario_from_json(doc);
}

std::string run_episode_json(const std::string& config, bool keep_trace)
{
  const ScenarioConfig cfg = config_from(config);
  cfg.validate();
  auto [trace, result] = run_episode(cfg, keep_trace);
  Json out = {{"result", to_json(result)}};
  if (keep_trace) {
    Json rows = Json::array();
    for (const TraceRecord& r : trace)
      rows.push_back(to_json(r));
    out["trace"] = std::move(rows);
  }
  return out.dump();
}

std::string falsify_json(const std::string& config, std::size_t n, std::uint64_t seed, unsigned threads)
{
  const ScenarioConfig cfg = config_from(config);
  cfg.validate();
  FalsifyOptions opts;
  opts.n_episodes = n;
  opts.seed = seed;
  opts.threads = threads;
  FalsificationReport r;
  {
    py::gil_scoped_release release;
    r = falsify(cfg, opts);
  }
  return to_json(r).dump();
}

py::dict classify_dict(const std::tuple<double, double, double, double, double, double>& x,
                       const std::string& config)
{
  const ScenarioConfig cfg = config_from(config);
  const auto [x1, x2, x3, x4, x5, x6] = x;
  const RegionVerdict v = classify({x1, x2, x3, x4, x5, x6}, cfg.design, cfg.envelope);
  py::dict d;
  d["antitarget"] = v.in_antitarget;
  d["a1"] = v.in_avoidance_a1;
  d["a2"] = v.in_avoidance_a2;
  d["conflict"] = v.in_conflict;
  d["a1_value"] = v.a1_value;
  d["a2_value"] = v.a2_value;
  d["delta_t"] = v.delta_t;
  return d;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
  m.doc() = "Loom-based collision avoidance core";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<RejectedScenario>(m, "RejectedScenario", PyExc_RuntimeError);

  m.attr("PROTOCOL_VERSION") = kProtocolVersion;
  m.attr("TRACE_FORMAT_VERSION") = kTraceFormatVersion;

  m.def("wrap_angle", &wrap_angle, py::arg("theta"));

  m.def(
    "step_unicycle",
    [](const State4& s, double turn_rate, double accel, double dt) {
      const VehicleState n = step_unicycle(vehicle(s), turn_rate, accel, dt);
      return State4{n.x, n.y, n.psi, n.v};
    },
    py::arg("state"), py::arg("turn_rate"), py::arg("accel"), py::arg("dt"),
    "One RK4 step of the unicycle; state is (x, y, psi, v).");

  m.def(
    "relative_geometry",
    [](const State4& robot, const State4& obstacle, std::pair<double, double> robot_rates,
       std::pair<double, double> obstacle_rates) {
      const RelativeGeometry g = relative_geometry(
        vehicle(robot), vehicle(obstacle), {robot_rates.first, robot_rates.second},
        {obstacle_rates.first, obstacle_rates.second});
      py::dict d;
      d["rho"] = g.rho;
      d["lambda"] = g.lambda;
      d["rho_dot"] = g.rho_dot;
      d["lambda_dot"] = g.lambda_dot;
      d["rho_ddot"] = g.rho_ddot;
      return d;
    },
    py::arg("robot"), py::arg("obstacle"), py::arg("robot_rates") = std::pair{0.0, 0.0},
    py::arg("obstacle_rates") = std::pair{0.0, 0.0});

  m.def("loom", &loom, py::arg("rho"), py::arg("rho_dot"));

  m.def(
    "check_feasibility",
    [](const std::string& config) {
      const ScenarioConfig cfg = config_from(config);
      return to_json(check_feasibility(cfg.envelope, cfg.design)).dump();
    },
    py::arg("config") = "{}");

  m.def("classify", &classify_dict, py::arg("x"), py::arg("config") = "{}");

  m.def(
    "avoidance_control",
    [](const std::tuple<double, double, double, double, double, double>& ms, const std::string& config) {
      const ScenarioConfig cfg = config_from(config);
      const auto [x1, x2, x3, x5, x6, a_r] = ms;
      return avoidance_control({x1, x2, x3, x5, x6, a_r}, cfg.design, cfg.envelope);
    },
    py::arg("m"), py::arg("config") = "{}", "m is (x1, x2, x3, x5, x6, a_r).");

  m.def("run_episode", &run_episode_json, py::arg("config"), py::arg("trace") = false);
  m.def("falsify", &falsify_json, py::arg("config"), py::arg("n_episodes") = 1000, py::arg("seed") = 7,
        py::arg("threads") = 0);

  py::class_<Session>(m, "Session")
    .def(py::init([](const std::string& config) { return std::make_unique<Session>(config_from(config)); }),
         py::arg("config"))
    .def("push", &Session::push, py::arg("frame"))
    .def("tick", [](Session& s) {
      std::vector<std::string> out;
      for (const Json& f : s.tick())
        out.push_back(f.dump());
      return out;
    })
    .def("handle", [](Session& s, const std::string& text) -> std::optional<std::string> {
      if (auto err = s.handle(text))
        return err->dump();
      return std::nullopt;
    })
    .def("state_frame", [](const Session& s) { return s.state_frame().dump(); })
    .def_property_readonly("paused", &Session::paused);
}
