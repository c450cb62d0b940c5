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

#include <algorithm>
#include <cmath>

namespace loomcas {

Json error_frame(const std::string& message)
{
  return {{"v", kProtocolVersion}, {"type", "error"}, {"message", message}};
}

Session::Session(ScenarioConfig base) : cfg_(std::move(base))
{
  restart();
}

void Session::restart()
{
  episode_ = std::make_unique<Episode>(cfg_, false);
  human_.reset();
  external_ = nullptr;
  inbound_.clear();
}

void Session::push(std::string text)
{
  inbound_.push_back(std::move(text));
}

std::optional<Json> Session::handle(const std::string& text)
{
  const Json msg = Json::parse(text, nullptr, false);
  if (msg.is_discarded() || !msg.is_object())
    return error_frame("malformed frame: expected a JSON object");
  const auto type = msg.find("type");
  if (type == msg.end() || !type->is_string())
    return error_frame("missing 'type'");

  if (*type == "obstacle_cmd") {
    const auto turn = msg.find("turn_rate");
    const auto speed = msg.find("speed");
    if (turn == msg.end() || speed == msg.end() || !turn->is_number() || !speed->is_number())
      return error_frame("obstacle_cmd needs numeric 'turn_rate' and 'speed'");
    const double u = turn->get<double>();
    const double s = speed->get<double>();
    if (!std::isfinite(u) || !std::isfinite(s))
      return error_frame("obstacle_cmd values must be finite");

    const EnvelopeBounds& b = cfg_.envelope;
    human_ = ObstacleIntent{std::clamp(u, -b.psi_dot_o_max, b.psi_dot_o_max),
                            std::clamp(s, 0.0, b.v_o_max)};
    if (!external_) {
      auto policy = std::make_unique<ExternalPolicy>();
      external_ = policy.get();
      episode_->set_obstacle_policy(std::move(policy));
    }
    external_->set_command(human_->turn_rate, human_->speed);
    return std::nullopt;
  }

  if (*type == "control") {
    const auto action = msg.find("action");
    if (action == msg.end() || !action->is_string())
      return error_frame("control needs 'action'");
    if (*action == "pause") {
      paused_ = true;
    } else if (*action == "resume") {
      paused_ = false;
    } else if (*action == "reset") {
      restart();
    } else if (*action == "set_scenario") {
      const auto doc = msg.find("config");
      if (doc == msg.end())
        return error_frame("set_scenario needs 'config'");
      try {
        ScenarioConfig next = scenario_from_json(*doc);
        Episode probe(next, false);
        cfg_ = std::move(next);
      } catch (const std::exception& e) {
        return error_frame(std::string("set_scenario rejected: ") + e.what());
      }
      restart();
    } else {
      return error_frame("unknown control action");
    }
    return std::nullopt;
  }

  return error_frame("unknown message type");
}

std::vector<Json> Session::tick()
{
  std::vector<Json> out;
  while (!inbound_.empty()) {
    const std::string text = std::move(inbound_.front());
    inbound_.pop_front();
    if (auto err = handle(text))
      out.push_back(std::move(*err));
  }

  if (!paused_) {
    const int n = cfg_.control_every();
    for (int i = 0; i < n && !episode_->finished(); ++i)
      episode_->step();
  }
  out.push_back(state_frame());
  return out;
}

Json Session::state_frame() const
{
  const TraceRecord& q = episode_->last();
  const VehicleState& robot = episode_->robot();
  const VehicleState& obstacle = episode_->obstacle();

  Json human = human_ ? Json{{"turn_rate", human_->turn_rate}, {"speed", human_->speed}}
                      : Json(nullptr);
  auto num = [](double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); };
  return {
    {"v", kProtocolVersion},
    {"type", "state"},
    {"t", episode_->time()},
    {"robot", {{"x", robot.x}, {"y", robot.y}, {"psi", robot.psi}, {"v", robot.v}}},
    {"obstacle", {{"x", obstacle.x}, {"y", obstacle.y}, {"psi", obstacle.psi}, {"v", obstacle.v}}},
    {"meas", {{"loom", q.meas.loom}, {"lambda", q.meas.lambda}, {"lambda_dot", q.meas.lambda_dot}}},
    {"cmd",
     {{"u", q.cmd.turn_rate}, {"u_ca", q.cmd.ca_component}, {"u_tr", q.cmd.tr_component},
      {"engaged", q.cmd.engaged}}},
    {"verdict",
     {{"T", q.verdict.in_antitarget}, {"A1", q.verdict.in_avoidance_a1},
      {"A2", q.verdict.in_avoidance_a2}, {"conflict", q.verdict.in_conflict}}},
    {"cert", {{"a1", num(q.cert.a1)}, {"a2", num(q.cert.a2)}, {"v", num(q.cert.v)}}},
    {"obstacle_cmd", human},
    {"paused", paused_},
    {"finished", episode_->finished()},
  };
}

} // namespace loomcas
