// Copyright 2026 The Corridor Control Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// corridor: command line front end.
//
//   corridor solve        --scenario S --out DIR [--dt STEP]
//   corridor simulate     --scenario S --out DIR [--mode optimal|baseline] [--seed N] [--dt STEP]
//   corridor compare      --scenario S --out DIR [--seed N] [--dt STEP]
//   corridor compare      --baseline A.json --optimal B.json --out DIR
//   corridor oracle-check --scenario S [--steps N] [--out DIR]
//   corridor plot         --input trajectory.csv --out plot.svg
//   corridor plot         --scenario S --out plot.svg
//
// Exit codes: 0 success, 1 internal error, 2 parse error, 3 infeasible, 4 tolerance failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "corridor/constraint.hpp"
#include "corridor/errors.hpp"
#include "corridor/interior_bvp.hpp"
#include "corridor/margin.hpp"
#include "corridor/metrics.hpp"
#include "corridor/oracle.hpp"
#include "corridor/output.hpp"
#include "corridor/scenario_io.hpp"
#include "corridor/sim.hpp"

namespace
{

using corridor::ParseError;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitParse = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitTolerance = 4;
constexpr double kOracleRelTol = 1e-2;

struct Options
{
  std::string scenario;
  std::string out;
  std::string mode;
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  std::string input;
  std::string baseline;
  std::string optimal;
  int steps{0};
};

std::string join(const std::string & dir, const std::string & name)
{
  return (std::filesystem::path(dir) / name).string();
}

struct Solved
{
  corridor::PlannedResult result;
  std::vector<corridor::TrajectoryRow> rows;
  double pin_error_m{0.0};
};

Solved solve_one(const corridor::ScenarioSpec & spec, const corridor::PlannedVehicle & v, double dt)
{
  const auto problem = corridor::planned_problem(spec, v);
  const auto start = std::chrono::steady_clock::now();
  const corridor::Trajectory traj = corridor::solve_route(problem);
  const auto stop = std::chrono::steady_clock::now();

  Solved s;
  auto & r = s.result;
  r.vehicle_id = v.id;
  r.cost = traj.cost();
  r.runtime_ms = std::chrono::duration<double, std::milli>(stop - start).count();
  r.t_begin_s = traj.t_begin();
  r.t_end_s = traj.t_end();
  r.windows = traj.constrained_windows();
  const corridor::LeaderContext leaders =
    problem.safety ? problem.safety->leaders : corridor::LeaderContext{};
  r.min_margin_m = std::numeric_limits<double>::infinity();
  if (!leaders.empty()) {
    r.junctions = corridor::junction_reports(traj, leaders, v.safety);
    r.min_margin_m =
      corridor::min_margin(traj, leaders, v.safety, traj.t_begin(), traj.t_end()).margin_m;
  }
  auto pins = v.schedule.waypoints;
  pins.push_back(v.schedule.terminal);
  for (const auto & w : pins) {
    s.pin_error_m = std::max(s.pin_error_m, std::abs(traj.sample(w.time_s).p - w.position_m));
  }
  s.rows = corridor::sample_planned(v.id, traj, leaders, v.safety, dt);
  return s;
}

int cmd_solve(const Options & o)
{
  const auto file = corridor::load_scenario(o.scenario);
  const auto & spec = file.spec;
  if (spec.planned.empty()) {
    throw ParseError("planned_vehicles", "scenario has no planned vehicles to solve");
  }
  const double dt = o.dt.value_or(0.1);
  std::vector<corridor::PlannedResult> results;
  std::vector<corridor::TrajectoryRow> rows;
  bool tolerance_ok = true;
  for (const auto & v : spec.planned) {
    Solved s = solve_one(spec, v, dt);
    const double pin_tol = std::max(spec.tolerances.residual, 1e-6);
    if (s.pin_error_m > pin_tol || s.result.min_margin_m < -spec.tolerances.margin_m) {
      std::cerr << "vehicle " << v.id << ": tolerance failure (pin error " << s.pin_error_m
                << " m, min margin " << s.result.min_margin_m << " m)\n";
      tolerance_ok = false;
    }
    std::printf(
      "vehicle %d: cost %.9g, %zu constrained window(s), %.2f ms\n", v.id, s.result.cost,
      s.result.windows.size(), s.result.runtime_ms);
    results.push_back(s.result);
    rows.insert(rows.end(), s.rows.begin(), s.rows.end());
  }
  if (!tolerance_ok) {
    return kExitTolerance;
  }
  corridor::write_files(
    {{join(o.out, "trajectory.csv"), corridor::trajectory_csv(rows)},
     {join(o.out, "solution.json"), corridor::solve_json(spec.id, results)},
     {join(o.out, "plot.svg"), corridor::plot_svg(rows, spec.id)}});
  return kExitOk;
}

corridor::SimConfig sim_config(const Options & o, const corridor::ScenarioFile & file)
{
  corridor::SimConfig config = corridor::make_sim_config(file);
  if (!o.mode.empty()) {
    try {
      config.mode = corridor::parse_sim_mode(o.mode);
    } catch (const corridor::ContractError & e) {
      throw ParseError("--mode", e.what());
    }
  }
  if (o.seed) {
    config.seed = *o.seed;
  }
  if (o.dt) {
    if (!(*o.dt > 0.0)) {
      throw ParseError("--dt", "time step must be positive");
    }
    config.dt_s = *o.dt;
  }
  return config;
}

int cmd_simulate(const Options & o)
{
  const auto file = corridor::load_scenario(o.scenario);
  const auto config = sim_config(o, file);
  const auto state = corridor::run_simulation(config);
  const auto report = corridor::build_report(state, config, file.metrics);
  const auto rows = corridor::rows_from_samples(state.samples);
  const auto & s = report.summary;
  std::printf(
    "%s (%s, seed %llu): %d vehicles, %d completed, fuel %.6g ml, mean travel %.4g s, "
    "%d violation event(s)\n",
    report.scenario_id.c_str(), report.mode.c_str(),
    static_cast<unsigned long long>(report.seed), s.vehicles, s.completed, s.total_fuel,
    s.mean_travel_time_s, s.violation_events);
  corridor::write_files(
    {{join(o.out, "trajectory.csv"), corridor::trajectory_csv(rows)},
     {join(o.out, "report.json"), corridor::report_json(report)},
     {join(o.out, "events.log"), corridor::format_event_log(state.log)},
     {join(o.out, "plot.svg"), corridor::plot_svg(rows, report.scenario_id + " " + report.mode)}});
  return kExitOk;
}

int cmd_compare(const Options & o)
{
  corridor::RunReport a;
  corridor::RunReport b;
  if (!o.baseline.empty() || !o.optimal.empty()) {
    if (o.baseline.empty() || o.optimal.empty()) {
      throw ParseError("compare", "--baseline and --optimal must be given together");
    }
    a = corridor::parse_report_json(corridor::read_file(o.baseline));
    b = corridor::parse_report_json(corridor::read_file(o.optimal));
  } else {
    if (o.scenario.empty()) {
      throw ParseError("compare", "give --scenario or --baseline/--optimal");
    }
    const auto file = corridor::load_scenario(o.scenario);
    for (auto * target : {&a, &b}) {
      Options run = o;
      run.mode = target == &a ? "baseline" : "optimal";
      const auto config = sim_config(run, file);
      const auto state = corridor::run_simulation(config);
      *target = corridor::build_report(state, config, file.metrics);
    }
  }
  corridor::Comparison c;
  try {
    c = corridor::compare_runs(a, b);
  } catch (const corridor::ContractError & e) {
    throw ParseError("compare", e.what());
  }
  std::printf(
    "fuel %.6g -> %.6g ml (%.2f%% savings), travel time %+.2f%%, violations %d -> %d\n",
    c.total_fuel_a, c.total_fuel_b, c.fuel_savings_pct, c.travel_time_delta_pct, c.violations_a,
    c.violations_b);
  std::vector<std::pair<std::string, std::string>> files{
    {join(o.out, "comparison.json"), corridor::comparison_json(c, a, b)}};
  if (!o.scenario.empty()) {
    files.emplace_back(join(o.out, "report_baseline.json"), corridor::report_json(a));
    files.emplace_back(join(o.out, "report_optimal.json"), corridor::report_json(b));
  }
  corridor::write_files(files);
  return kExitOk;
}

int cmd_oracle_check(const Options & o)
{
  const auto file = corridor::load_scenario(o.scenario);
  const auto & spec = file.spec;
  if (spec.planned.empty()) {
    throw ParseError("planned_vehicles", "scenario has no planned vehicles to check");
  }
  const int steps = o.steps > 0 ? o.steps : spec.tolerances.oracle_steps;
  bool ok = true;
  std::string csv = "vehicle_id,analytic_cost,oracle_cost,rel_error\n";
  for (const auto & v : spec.planned) {
    const auto problem = corridor::planned_problem(spec, v);
    const double analytic = corridor::solve_route(problem).cost();
    const double oracle = corridor::solve_transcribed(problem, steps).cost;
    const double rel = std::abs(analytic - oracle) / std::max(std::abs(oracle), 1e-12);
    const bool pass = rel <= kOracleRelTol;
    ok = ok && pass;
    std::printf(
      "vehicle %d: analytic %.9g, oracle(N=%d) %.9g, rel error %.3e %s\n", v.id, analytic, steps,
      oracle, rel, pass ? "ok" : "FAIL");
    char line[160];
    std::snprintf(line, sizeof(line), "%d,%.12g,%.12g,%.6e\n", v.id, analytic, oracle, rel);
    csv += line;
  }
  if (!ok) {
    return kExitTolerance;
  }
  if (!o.out.empty()) {
    corridor::write_files({{join(o.out, "oracle_check.csv"), csv}});
  }
  return kExitOk;
}

int cmd_plot(const Options & o)
{
  std::vector<corridor::TrajectoryRow> rows;
  std::string title;
  if (!o.input.empty()) {
    rows = corridor::parse_trajectory_csv(corridor::read_file(o.input));
    title = std::filesystem::path(o.input).filename().string();
  } else if (!o.scenario.empty()) {
    const auto file = corridor::load_scenario(o.scenario);
    for (const auto & v : file.spec.planned) {
      const auto s = solve_one(file.spec, v, o.dt.value_or(0.1));
      rows.insert(rows.end(), s.rows.begin(), s.rows.end());
    }
    title = file.spec.id;
  } else {
    throw ParseError("plot", "give --input or --scenario");
  }
  corridor::write_files({{o.out, corridor::plot_svg(rows, title)}});
  return kExitOk;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Optimal control of connected automated vehicles along a corridor"};
  app.require_subcommand(1);
  Options o;

  auto scenario = [&](CLI::App * c, bool required) {
    auto * opt = c->add_option("--scenario", o.scenario, "scenario YAML file");
    if (required) {
      opt->required();
    }
  };
  auto dt = [&](CLI::App * c) { c->add_option("--dt", o.dt, "sampling / simulation step [s]"); };

  auto * solve = app.add_subcommand("solve", "solve every planned vehicle of a scenario");
  scenario(solve, true);
  solve->add_option("--out", o.out, "output directory")->required();
  dt(solve);

  auto * sim = app.add_subcommand("simulate", "run a corridor simulation");
  scenario(sim, true);
  sim->add_option("--out", o.out, "output directory")->required();
  sim->add_option("--mode", o.mode, "optimal or baseline");
  sim->add_option("--seed", o.seed, "arrival seed");
  dt(sim);

  auto * cmp = app.add_subcommand("compare", "compare a baseline run with an optimal run");
  scenario(cmp, false);
  cmp->add_option("--baseline", o.baseline, "baseline report JSON");
  cmp->add_option("--optimal", o.optimal, "optimal report JSON");
  cmp->add_option("--out", o.out, "output directory")->required();
  cmp->add_option("--seed", o.seed, "arrival seed");
  dt(cmp);

  auto * orc = app.add_subcommand("oracle-check", "compare analytic costs with the discretized QP");
  scenario(orc, true);
  orc->add_option("--steps", o.steps, "control intervals of the discretization");
  orc->add_option("--out", o.out, "output directory");

  auto * plot = app.add_subcommand("plot", "plot control, speed and margin to SVG");
  plot->add_option("--input", o.input, "trajectory CSV");
  scenario(plot, false);
  plot->add_option("--out", o.out, "output SVG file")->required();
  dt(plot);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp & e) {
    return app.exit(e);
  } catch (const CLI::ParseError & e) {
    app.exit(e);
    return kExitParse;
  }

  try {
    if (*solve) {
      return cmd_solve(o);
    }
    if (*sim) {
      return cmd_simulate(o);
    }
    if (*cmp) {
      return cmd_compare(o);
    }
    if (*orc) {
      return cmd_oracle_check(o);
    }
    if (*plot) {
      return cmd_plot(o);
    }
  } catch (const corridor::ParseError & e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const corridor::InfeasibleError & e) {
    std::cerr << "infeasible: vehicle " << e.vehicle_id() << " at t=" << e.time_s() << " s: "
              << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::exception & e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
