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
#include "loomcas/errors.hpp"

#include <boost/asio/connect.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>
#include <doctest.h>

#include <chrono>
#include <thread>

using namespace loomcas;
using doctest::Approx;

namespace {

ScenarioConfig console_scenario()
{
  ScenarioConfig cfg = scenario_from_json(read_json_file(std::string(LOOMCAS_SCENARIO_DIR) + "/scenario1.json"));
  cfg.envelope.a_o_max = 1.0;
  cfg.design.k = 2.0;
  cfg.duration = 60.0;
  return cfg;
}

Json last_state(std::vector<Json> frames)
{
  REQUIRE_FALSE(frames.empty());
  REQUIRE(frames.back()["type"] == "state");
  return frames.back();
}

} // namespace

TEST_CASE("state frames carry the protocol fields")
{
  Session s(console_scenario());
  const Json f = last_state(s.tick());
  CHECK(f["v"] == kProtocolVersion);
  for (const char* key : {"t", "robot", "obstacle", "meas", "cmd", "verdict", "cert"})
    CHECK(f.contains(key));
  for (const char* key : {"x", "y", "psi", "v"})
    CHECK(f["robot"].contains(key));
  for (const char* key : {"loom", "lambda", "lambda_dot"})
    CHECK(f["meas"].contains(key));
  for (const char* key : {"u", "u_ca", "u_tr", "engaged"})
    CHECK(f["cmd"].contains(key));
  for (const char* key : {"T", "A1", "A2", "conflict"})
    CHECK(f["verdict"].contains(key));
  for (const char* key : {"a1", "a2", "v"})
    CHECK(f["cert"].contains(key));
  CHECK(f["t"].get<double>() == Approx(0.02));
}

TEST_CASE("malformed frames are answered with an error frame")
{
  Session s(console_scenario());
  for (const char* bad : {"not json", "[1,2]", "{}", R"({"type":"warp"})",
                          R"({"type":"obstacle_cmd","turn_rate":"left","speed":1})",
                          R"({"type":"obstacle_cmd","speed":1})",
                          R"({"type":"control","action":"explode"})",
                          R"({"type":"control","action":"set_scenario"})",
                          R"({"type":"control","action":"set_scenario","config":{"design":{"beta":-1}}})"}) {
    const auto err = s.handle(bad);
    REQUIRE(err.has_value());
    CHECK((*err)["type"] == "error");
    CHECK((*err)["v"] == kProtocolVersion);
  }
  s.push("garbage");
  const auto frames = s.tick();
  REQUIRE(frames.size() == 2);
  CHECK(frames[0]["type"] == "error");
  CHECK(frames[1]["type"] == "state");
}

TEST_CASE("obstacle commands are clamped to the envelope")
{
  Session s(console_scenario());
  CHECK_FALSE(s.handle(R"({"type":"obstacle_cmd","turn_rate":4.0,"speed":10.0})").has_value());
  REQUIRE(s.obstacle_command().has_value());
  CHECK(s.obstacle_command()->speed == 2.0);
  CHECK(s.obstacle_command()->turn_rate == 0.5);

  Json f;
  for (int i = 0; i < 100; ++i)
    f = last_state(s.tick());
  CHECK(f["obstacle_cmd"]["speed"] == 2.0);
  CHECK(f["obstacle"]["v"].get<double>() == Approx(2.0));

  s.handle(R"({"type":"obstacle_cmd","turn_rate":-1.0,"speed":-3.0})");
  CHECK(s.obstacle_command()->speed == 0.0);
  CHECK(s.obstacle_command()->turn_rate == -0.5);
}

TEST_CASE("pause, resume, reset and set_scenario")
{
  Session s(console_scenario());
  s.tick();
  s.push(R"({"type":"control","action":"pause"})");
  const double t0 = last_state(s.tick())["t"];
  CHECK(last_state(s.tick())["t"] == t0);
  CHECK(s.paused());
  s.push(R"({"type":"control","action":"resume"})");
  CHECK(last_state(s.tick())["t"].get<double>() > t0);

  s.handle(R"({"type":"obstacle_cmd","turn_rate":0.1,"speed":1.0})");
  s.push(R"({"type":"control","action":"reset"})");
  const Json after = last_state(s.tick());
  CHECK(after["t"].get<double>() == Approx(0.02));
  CHECK(after["obstacle_cmd"].is_null());

  Json doc = to_json(console_scenario());
  doc["scenario"]["obstacle"]["x"] = 7.0;
  const Json msg = {{"type", "control"}, {"action", "set_scenario"}, {"config", doc}};
  CHECK_FALSE(s.handle(msg.dump()).has_value());
  CHECK(s.config().obstacle_init.x == 7.0);
}

TEST_CASE("conflict-bound gate engages as loom crosses -beta / gamma")
{
  ScenarioConfig cfg = console_scenario();
  cfg.control.gate = GateMode::ConflictBound;
  cfg.require_initial_outside_avoidance = true;
  Session s(cfg);
  s.handle(R"({"type":"obstacle_cmd","turn_rate":0.0,"speed":1.0})");
  double prev_loom = 0.0;
  bool found = false;
  for (int i = 0; i < 500 && !found; ++i) {
    const Json f = last_state(s.tick());
    const double loom = f["meas"]["loom"];
    if (f["cmd"]["engaged"] == true) {
      CHECK(loom <= -1.0013362826986915);
      CHECK(prev_loom > -1.0013362826986915);
      found = true;
    }
    prev_loom = loom;
  }
  CHECK(found);
}

TEST_CASE("sessions are isolated")
{
  Session a(console_scenario()), b(console_scenario());
  a.handle(R"({"type":"obstacle_cmd","turn_rate":0.5,"speed":0.5})");
  for (int i = 0; i < 50; ++i) {
    a.tick();
    b.tick();
  }
  CHECK(a.episode().obstacle().psi != b.episode().obstacle().psi);
  CHECK_FALSE(b.obstacle_command().has_value());
}

TEST_CASE("websocket server streams at the session rate and clamps commands")
{
  namespace beast = boost::beast;
  namespace websocket = beast::websocket;
  namespace net = boost::asio;

  ServerOptions opts;
  opts.port = 0;
  Server server(console_scenario(), opts);
  const auto port = server.port();
  std::thread runner([&] { server.run(); });

  net::io_context ioc;
  net::ip::tcp::resolver resolver(ioc);
  websocket::stream<net::ip::tcp::socket> ws(ioc);
  net::connect(ws.next_layer(), resolver.resolve("127.0.0.1", std::to_string(port)));
  ws.handshake("127.0.0.1", "/");

  beast::flat_buffer buf;
  auto read_frame = [&] {
    buf.clear();
    ws.read(buf);
    return Json::parse(beast::buffers_to_string(buf.data()));
  };

  // Warm up, then time 100 frames.
  for (int i = 0; i < 5; ++i)
    read_frame();
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < 100; ++i)
    CHECK(read_frame()["v"] == kProtocolVersion);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double hz = 100.0 / secs;
  CHECK(hz > 45.0);
  CHECK(hz < 55.0);

  ws.write(net::buffer(std::string(R"({"type":"obstacle_cmd","turn_rate":0.0,"speed":10.0})")));
  Json f;
  for (int i = 0; i < 10; ++i) {
    f = read_frame();
    if (f["type"] == "state" && !f["obstacle_cmd"].is_null())
      break;
  }
  CHECK(f["obstacle_cmd"]["speed"] == 2.0);

  ws.write(net::buffer(std::string("{broken")));
  bool saw_error = false;
  for (int i = 0; i < 10 && !saw_error; ++i)
    saw_error = read_frame()["type"] == "error";
  CHECK(saw_error);
  CHECK(read_frame()["type"] == "state");

  ws.close(websocket::close_code::normal);
  server.stop();
  runner.join();
}
