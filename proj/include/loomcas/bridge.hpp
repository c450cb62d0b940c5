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

#include "loomcas/io.hpp"
#include "loomcas/sim.hpp"

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace loomcas {

inline constexpr int kProtocolVersion = 1;

// One live simulation driven by a console client.
//
// Inbound frames (JSON text):
//   {"type": "obstacle_cmd", "turn_rate": <rad/s>, "speed": <m/s>}
//   {"type": "control", "action": "pause" | "resume" | "reset"}
//   {"type": "control", "action": "set_scenario", "config": {<scenario document>}}
// Outbound frames carry "v": kProtocolVersion and "type": "state" or "error".
//
// Single owner; the server delivers inbound text through push() and calls
// tick() at the session rate from the same strand.
class Session
{
public:
  explicit Session(ScenarioConfig base);

  /// Queues one inbound frame for the next tick.
  void push(std::string text);

  /// Drains the inbound queue, advances the simulation by one control period
  /// (unless paused or finished) and returns the frames to send, state last.
  std::vector<Json> tick();

  /// Handles a single inbound frame now. Returns an error frame on rejection.
  std::optional<Json> handle(const std::string& text);

  Json state_frame() const;

  bool paused() const { return paused_; }
  const Episode& episode() const { return *episode_; }
  const ScenarioConfig& config() const { return cfg_; }

  /// Latest human command after clamping to the envelope, if any.
  const std::optional<ObstacleIntent>& obstacle_command() const { return human_; }

private:
  void restart();

  ScenarioConfig cfg_;
  std::unique_ptr<Episode> episode_;
  std::deque<std::string> inbound_;
  std::optional<ObstacleIntent> human_;
  ExternalPolicy* external_ = nullptr;
  bool paused_ = false;
};

/// Builds an error frame.
Json error_frame(const std::string& message);

struct ServerOptions
{
  std::uint16_t port = 8765;  // 0 picks a free port
  std::string address = "127.0.0.1";
  double rate = 50.0;         // frames per second per session
  std::size_t max_outbound = 4;  // queued frames per client; the oldest is dropped
};

// Websocket server: one Session per connection, real-time paced.
class Server
{
public:
  Server(ScenarioConfig base, ServerOptions opts);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Port actually bound (useful with port 0).
  std::uint16_t port() const;

  /// Serves until stop() is called. Blocks.
  void run();
  void stop();

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

} // namespace loomcas
