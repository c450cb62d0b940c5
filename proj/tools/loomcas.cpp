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
#include "loomcas/io.hpp"
#include "loomcas/params.hpp"
#include "loomcas/sim.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace loomcas;

namespace {

enum Exit { kOk = 0, kDomainFailure = 1, kUsage = 2 };

struct Common
{
  std::string config;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, Common& c)
{
  cmd->add_option("-c,--config", c.config, "Scenario/parameter JSON file")->required();
  cmd->add_option("--set", c.overrides, "Override a value, e.g. design.beta=6.3 (repeatable)");
}

Json load_document(const Common& c)
{
  Json doc = read_json_file(c.config);
  for (const auto& o : c.overrides)
    apply_override(doc, o);
  return doc;
}

// Creates <out>/run-NNNN with the first free index; never reuses a directory.
fs::path make_run_dir(const fs::path& out)
{
  fs::create_directories(out);
  for (int i = 1; i < 100000; ++i) {
    char name[16];
    std::snprintf(name, sizeof name, "run-%04d", i);
    const fs::path dir = out / name;
    if (fs::create_directory(dir))
      return dir;
  }
  throw std::runtime_error("no free run directory under " + out.string());
}

void write_json(const fs::path& path, const Json& j)
{
  std::ofstream os(path);
  os << j.dump(2) << '\n';
  if (!os)
    throw std::runtime_error("cannot write " + path.string());
}

void setup_logging()
{
  auto logger = spdlog::stderr_color_mt("loomcas");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* lvl = std::getenv("LOOMCAS_LOG")) {
    const auto level = spdlog::level::from_str(lvl);
    if (level == spdlog::level::off && std::string(lvl) != "off")
      spdlog::warn("LOOMCAS_LOG: unknown level '{}'", lvl);
    else
      spdlog::set_level(level);
  }
}

int cmd_check(const Common& c, bool as_json)
{
  const ScenarioConfig cfg = scenario_from_json(load_document(c));
  cfg.envelope.validate();
  cfg.design.validate();
  const FeasibilityReport rep = check_feasibility(cfg.envelope, cfg.design);
  if (as_json)
    std::cout << to_json(rep).dump(2) << '\n';
  else
    std::cout << rep.to_text();
  return rep.all_satisfied() ? kOk : kDomainFailure;
}

int cmd_run(const Common& c, const std::string& out, bool force)
{
  const ScenarioConfig cfg = scenario_from_json(load_document(c));
  cfg.validate();
  const FeasibilityReport rep = check_feasibility(cfg.envelope, cfg.design);
  if (!rep.all_satisfied() && !force) {
    std::cerr << rep.to_text() << "infeasible parameters; use --force to run anyway\n";
    return kDomainFailure;
  }

  auto [trace, result] = run_episode(cfg, true);

  const fs::path dir = make_run_dir(out);
  write_json(dir / "config.json", to_json(cfg));
  write_json(dir / "feasibility.json", to_json(rep));
  write_json(dir / "result.json", to_json(result));
  write_json(dir / "certificate.json", to_json(result.certificate));
  {
    std::ofstream os(dir / "trace.csv");
    write_trace_csv(os, trace);
  }
  {
    std::ofstream os(dir / "trace.jsonl");
    write_trace_jsonl(os, trace);
  }
  {
    std::ofstream os(dir / "plot.csv");
    write_plot_csv(os, trace);
  }

  std::cout << "run directory: " << dir.string() << '\n'
            << "min_rho " << result.min_rho << " m, min_ttc " << result.min_ttc << " s, "
            << result.engaged_intervals.size() << " engaged interval(s), certificate "
            << (result.certificate.pass ? "PASS" : "FAIL") << ", anti-target "
            << (result.antitarget_hit ? "HIT" : "clear") << '\n';
  return result.antitarget_hit ? kDomainFailure : kOk;
}

int cmd_falsify(const Common& c, const std::string& out, FalsifyOptions opts)
{
  const ScenarioConfig cfg = scenario_from_json(load_document(c));
  cfg.validate();
  const FeasibilityReport rep = check_feasibility(cfg.envelope, cfg.design);
  if (!rep.all_satisfied())
    spdlog::warn("falsify: parameters are infeasible; hits are expected");

  const FalsificationReport r = falsify(cfg, opts);
  const fs::path dir = make_run_dir(out);
  Json snapshot = to_json(cfg);
  snapshot["falsify"] = {{"n", opts.n_episodes}, {"seed", opts.seed}};
  write_json(dir / "config.json", snapshot);
  write_json(dir / "report.json", to_json(r));

  std::cout << "run directory: " << dir.string() << '\n'
            << r.n_episodes << " episodes, " << r.n_antitarget_hits << " anti-target hit(s), "
            << "worst min_rho " << r.worst_min_rho << " m, worst min_ttc " << r.worst_min_ttc
            << " s, certificate pass rate " << r.certificate_pass_rate << '\n';
  return r.n_antitarget_hits == 0 ? kOk : kDomainFailure;
}

Server* g_server = nullptr;

int cmd_serve(const Common& c, ServerOptions opts)
{
  const ScenarioConfig cfg = scenario_from_json(load_document(c));
  cfg.validate();
  const FeasibilityReport rep = check_feasibility(cfg.envelope, cfg.design);
  if (!rep.all_satisfied()) {
    std::cerr << rep.to_text() << "infeasible parameters\n";
    return kDomainFailure;
  }
  Server server(cfg, opts);
  g_server = &server;
  std::signal(SIGINT, [](int) { if (g_server) g_server->stop(); });
  std::signal(SIGTERM, [](int) { if (g_server) g_server->stop(); });
  std::cout << "serving on ws://" << opts.address << ':' << server.port() << std::endl;
  server.run();
  g_server = nullptr;
  return kOk;
}

} // namespace

int main(int argc, char** argv)
{
  setup_logging();

  CLI::App app{"loomcas: loom-based collision avoidance simulator"};
  app.require_subcommand(1);

  Common common;
  bool as_json = false;
  auto* check = app.add_subcommand("check", "Evaluate the feasibility conditions");
  add_common(check, common);
  check->add_flag("--json", as_json, "Print the report as JSON");

  std::string out = "out";
  bool force = false;
  auto* run = app.add_subcommand("run", "Run one scenario and export the trace");
  add_common(run, common);
  run->add_option("-o,--out", out, "Output directory (a run-NNNN subdirectory is created)");
  run->add_flag("--force", force, "Run even if the parameters are infeasible");

  FalsifyOptions fopts;
  auto* fals = app.add_subcommand("falsify", "Randomised search for anti-target entries");
  add_common(fals, common);
  fals->add_option("-n,--episodes", fopts.n_episodes, "Number of episodes")->check(CLI::PositiveNumber);
  fals->add_option("--seed", fopts.seed, "Campaign seed");
  fals->add_option("--threads", fopts.threads, "Worker threads (0: all cores)");
  fals->add_option("-o,--out", out, "Output directory (a run-NNNN subdirectory is created)");

  ServerOptions sopts;
  auto* serve = app.add_subcommand("serve", "Start the websocket bridge");
  add_common(serve, common);
  serve->add_option("--port", sopts.port, "TCP port");
  serve->add_option("--address", sopts.address, "Bind address");
  serve->add_option("--rate", sopts.rate, "Frames per second")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*check)
      return cmd_check(common, as_json);
    if (*run)
      return cmd_run(common, out, force);
    if (*fals)
      return cmd_falsify(common, out, fopts);
    if (*serve)
      return cmd_serve(common, sopts);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const RejectedScenario& e) {
    std::cerr << "rejected scenario: " << e.what() << '\n';
    return kDomainFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDomainFailure;
  }
  return kUsage;
}
