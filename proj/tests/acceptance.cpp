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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits nonzero on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "corridor/constraint.hpp"
#include "corridor/errors.hpp"
#include "corridor/interior_bvp.hpp"
#include "corridor/margin.hpp"
#include "corridor/metrics.hpp"
#include "corridor/oracle.hpp"
#include "corridor/output.hpp"
#include "corridor/scenario_io.hpp"
#include "corridor/sim.hpp"
#include "support.hpp"

namespace
{

using namespace corridor;  // NOLINT
using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0)
{
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-12); }

struct Result
{
  bool pass{true};
  std::string detail;
  int failed_checks{0};
  bool reference_mismatch{false};  // a check against a rounded published value failed

  void require(bool ok, const std::string & what)
  {
    if (!ok) {
      pass = false;
      ++failed_checks;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string f(const char * fmt, double x)
{
  char buf[96];
  std::snprintf(buf, sizeof(buf), fmt, x);
  return buf;
}

Result free_arc_case()
{
  Result r;
  const auto p = testing::case1();
  double best_ms = 1e9;
  Trajectory traj;
  for (int k = 0; k < 5; ++k) {
    const auto t0 = Clock::now();
    traj = solve_route(p);
    best_ms = std::min(best_ms, ms_since(t0));
  }
  r.require(traj.segments().size() == 1 && std::holds_alternative<PolynomialArc>(traj.segments()[0]),
            "not a single affine-control arc");
  const auto & arc = std::get<PolynomialArc>(traj.segments()[0]);
  r.require(std::abs(traj.sample(26.0).u) <= 1e-6, "u(tf) " + f("%.3e", traj.sample(26.0).u));
  r.require(std::abs(traj.sample(26.0).p - 300.0) <= 1e-6, "p(tf) " + f("%.9f", traj.sample(26.0).p));
  r.require(std::abs(arc.alpha - 2.0483e-3) <= 1e-6, "alpha " + f("%.7e", arc.alpha));
  // u(0) = -alpha * tf = -36 / 676 is forced by the pins; the reference is rounded to four digits
  const double u0 = traj.sample(0.0).u;
  r.reference_mismatch = std::abs(u0 + 5.326e-2) > 1e-6;
  r.require(!r.reference_mismatch,
            "u(0) " + f("%.7e", u0) + " vs reference -5.326e-2, |diff| " +
              f("%.2e", std::abs(u0 + 5.326e-2)) + " > 1e-6 (exact value -36/676 = " +
              f("%.7e", -36.0 / 676.0) + ")");
  // affine: second differences of u vanish
  double curvature = 0.0;
  for (double t = 1.0; t < 25.0; t += 1.0) {
    curvature = std::max(
      curvature, std::abs(traj.sample(t - 1).u - 2 * traj.sample(t).u + traj.sample(t + 1).u));
  }
  r.require(curvature < 1e-12, "u not affine");
  r.require(best_ms < 10.0, "runtime " + f("%.3f ms", best_ms));
  const std::string summary = "alpha=" + f("%.7e", arc.alpha) + " u(0)=" + f("%.7e", u0) +
                              " solve " + f("%.3f ms", best_ms);
  r.detail = r.pass ? summary : r.detail + "; " + summary;
  return r;
}

Result interior_point_case()
{
  Result r;
  const auto p = testing::case3();
  const auto traj = solve_route(p);
  r.require(std::abs(traj.sample(15.0).p - 150.0) <= 1e-6, "waypoint pin");
  r.require(std::abs(traj.sample(26.0).p - 300.0) <= 1e-6, "terminal pin");
  const double jump = std::abs(traj.sample(15.0 + 1e-9).u - traj.sample(15.0 - 1e-9).u);
  r.require(jump <= 1e-6, "u jump at waypoint " + f("%.3e", jump));
  const auto & first = std::get<PolynomialArc>(traj.segments().front());
  int sign_changes = 0;
  double prev = eval_arc(first, first.t_start_s).u;
  for (int k = 1; k <= 1500; ++k) {
    const double u = eval_arc(first, first.t_start_s + first.duration() * k / 1500.0).u;
    if ((u > 0) != (prev > 0)) {
      ++sign_changes;
    }
    prev = u;
  }
  r.require(sign_changes == 1, "first-arc sign changes " + std::to_string(sign_changes));
  const double oracle = solve_transcribed(p, 1000).cost;
  const double e = rel(traj.cost(), oracle);
  r.require(e <= 1e-3, "oracle rel error " + f("%.3e", e));
  if (r.pass) {
    r.detail = "cost=" + f("%.8g", traj.cost()) + " oracle rel err " + f("%.2e", e);
  }
  return r;
}

Result constrained_cases()
{
  Result r;
  struct Case
  {
    const char * name;
    RoutePlanProblem problem;
    double t1;
    double t2;
  };
  const Case cases[] = {{"case2", testing::case2(), 3.2, 5.2}, {"case4", testing::case4(), 2.7, 3.4}};
  for (const auto & c : cases) {
    const std::string n = c.name;
    const auto traj = solve_route(c.problem);
    const auto & s = *c.problem.safety;
    const auto reports = junction_reports(traj, s.leaders, s.params);
    if (reports.size() != 1) {
      r.require(false, n + ": expected one window, got " + std::to_string(reports.size()));
      continue;
    }
    const auto & w = reports[0];
    r.require(std::abs(w.entry_margin_m) < 1e-5, n + ": entry margin");
    r.require(std::abs(w.entry_margin_rate) < 1e-5, n + ": entry margin rate");
    double worst = 0.0;
    for (int k = 0; k <= 400; ++k) {
      const double t = w.t1_s + (w.t2_s - w.t1_s) * k / 400.0;
      worst = std::max(worst, std::abs(margin_at(traj, s.leaders, s.params, t)));
    }
    r.require(worst <= 1e-6, n + ": margin on window " + f("%.3e", worst));
    r.require(std::abs(w.t1_s - c.t1) <= 0.5 && std::abs(w.t2_s - c.t2) <= 0.5,
              n + ": window [" + f("%.3f", w.t1_s) + "," + f("%.3f", w.t2_s) + "]");
    for (const auto & pin : c.problem.schedule.waypoints) {
      r.require(std::abs(traj.sample(pin.time_s).p - pin.position_m) <= 1e-6, n + ": waypoint pin");
    }
    const auto & term = c.problem.schedule.terminal;
    r.require(std::abs(traj.sample(term.time_s).p - term.position_m) <= 1e-6, n + ": terminal pin");
    r.detail += (r.detail.empty() ? "" : " ") + n + " [" + f("%.3f", w.t1_s) + ", " +
                f("%.3f", w.t2_s) + "]";
  }
  return r;
}

/// Random instance in the family of one of the four reference problems.
RoutePlanProblem random_instance(int family, std::mt19937_64 & rng)
{
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  auto uni = [&](double a, double b) { return a + (b - a) * u01(rng); };
  if (family == 1 || family == 3) {
    const double v0 = uni(10.0, 15.0);
    const double tf = uni(22.0, 30.0);
    const double pf = v0 * tf * uni(0.85, 1.15);
    std::vector<std::pair<double, double>> wps;
    if (family == 3) {
      const double tw = tf * uni(0.4, 0.65);
      wps.emplace_back(tw, pf * tw / tf * uni(0.93, 1.07));
    }
    auto p = testing::make_problem(testing::make_schedule(v0, wps, tf, pf));
    p.safety = SafetyContext{
      LeaderContext::single(std::make_shared<ProfileMotion>(
        testing::make_leader(uni(40.0, 60.0), uni(11.0, 13.0), 0.0, pf + 80.0))),
      SafetyParams{}};
    return p;
  }
  const double v0 = uni(13.5, 14.5);
  const double s0 = uni(19.5, 21.0);
  const double accel = family == 2 ? uni(0.0, 0.03) : 0.0;
  std::vector<std::pair<double, double>> wps;
  if (family == 4) {
    wps.emplace_back(uni(12.5, 13.5), 150.0);
  }
  return testing::make_problem(
    testing::make_schedule(v0, wps, 26.0, 300.0),
    testing::make_leader(s0, uni(11.3, 11.7), accel, 300.0), testing::tight_safety());
}

Result oracle_equivalence()
{
  Result r;
  std::mt19937_64 rng(20260101);
  const auto t0 = Clock::now();
  int solved = 0;
  int constrained = 0;
  int redraws = 0;
  double worst = 0.0;
  double worst_below = 0.0;
  while (solved < 50) {
    const int family = 1 + solved % 4;
    const auto p = random_instance(family, rng);
    Trajectory traj;
    try {
      traj = solve_route(p);
    } catch (const InfeasibleError &) {
      ++redraws;  // schedule cannot be met safely; draw again
      if (redraws > 200) {
        r.require(false, "too many infeasible draws");
        break;
      }
      continue;
    }
    ++solved;
    const auto sol = solve_transcribed(p, 1000);
    const double e = rel(traj.cost(), sol.cost);
    worst = std::max(worst, e);
    r.require(e <= 1e-2, "instance " + std::to_string(solved) + " (family " + std::to_string(family) +
                           ") cost " + f("%.8g", traj.cost()) + " vs oracle " + f("%.8g", sol.cost));
    if (!traj.constrained_windows().empty()) {
      ++constrained;
      // the sampled oracle may undercut the analytic cost only by its discretization error
      const double below = (sol.cost - traj.cost()) / sol.cost;
      worst_below = std::max(worst_below, below);
      r.require(below <= 1e-3, "instance " + std::to_string(solved) + " below oracle by " +
                                 f("%.3e", below));
    }
  }
  const double secs = ms_since(t0) / 1000.0;
  r.require(secs < 60.0, "runtime " + f("%.1f s", secs));
  r.require(constrained >= 10, "only " + std::to_string(constrained) + " constrained instances");
  if (r.pass) {
    r.detail = std::to_string(solved) + " instances (" + std::to_string(constrained) +
               " constrained), max rel err " + f("%.2e", worst) + ", max undercut " +
               f("%.2e", std::max(worst_below, 0.0)) + ", " + f("%.1f s", secs);
  }
  return r;
}

Result hundred_vehicle_safety()
{
  Result r;
  const auto file = load_scenario(testing::scenario_path("corridor100.yaml"));
  auto config = make_sim_config(file);
  config.mode = SimMode::kOptimal;
  config.dt_s = 0.1;
  const auto state = run_simulation(config);
  double lowest = std::numeric_limits<double>::infinity();
  for (const auto & s : state.samples) {
    lowest = std::min(lowest, s.margin_m);
  }
  int completed = 0;
  for (const auto & v : state.vehicles) {
    completed += v.exit_time_s ? 1 : 0;
  }
  r.require(state.vehicles.size() == 100, std::to_string(state.vehicles.size()) + " vehicles entered");
  r.require(completed == 100, std::to_string(completed) + " vehicles completed");
  r.require(lowest >= -1e-3, "min margin " + f("%.4e", lowest));
  if (r.pass) {
    r.detail = "100 vehicles, " + std::to_string(state.samples.size()) + " samples, min margin " +
               f("%.3e m", lowest);
  }
  return r;
}

Result baseline_comparison()
{
  Result r;
  const auto file = load_scenario(testing::scenario_path("corridor4.yaml"));
  RunReport reports[2];
  for (int k = 0; k < 2; ++k) {
    auto config = make_sim_config(file);
    config.mode = k == 0 ? SimMode::kBaseline : SimMode::kOptimal;
    reports[k] = build_report(run_simulation(config), config, file.metrics);
  }
  const auto c = compare_runs(reports[0], reports[1]);
  r.require(c.total_fuel_b < c.total_fuel_a, "optimal fuel not lower");
  r.require(c.violations_b < c.violations_a, "optimal violations not fewer");
  RunReport a = reports[0];
  RunReport b = reports[0];
  for (auto & v : b.vehicles) {
    v.fuel *= 0.59;
  }
  b.aggregate();
  const double savings = compare_runs(a, b).fuel_savings_pct;
  r.require(std::abs(savings - 41.0) <= 0.1, "0.59x fuel reported as " + f("%.4f%%", savings));
  if (r.pass) {
    r.detail = "fuel " + f("%.1f", c.total_fuel_a) + " -> " + f("%.1f ml", c.total_fuel_b) + " (" +
               f("%.2f%%", c.fuel_savings_pct) + "), violations " + std::to_string(c.violations_a) +
               " -> " + std::to_string(c.violations_b) + ", 0.59x -> " + f("%.3f%%", savings);
  }
  return r;
}

Result properties()
{
  Result r;
  // finite differences on random arcs
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double h = 1e-4;
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const PolynomialArc arc{2.0, 12.0, 0.01 * u(rng), 0.5 * u(rng), 12.0 + 3.0 * u(rng), 10.0 * u(rng)};
    const double t = 3.0 + 8.0 * (0.5 + 0.5 * u(rng));
    const auto a = eval_arc(arc, t - h);
    const auto m = eval_arc(arc, t);
    const auto b = eval_arc(arc, t + h);
    const double ev = std::abs((b.p - a.p) / (2 * h) - m.v) / std::max(std::abs(m.v), 1.0);
    const double eu = std::abs((b.v - a.v) / (2 * h) - m.u) / std::max(std::abs(m.u), 1.0);
    const double ej = std::abs((b.u - a.u) / (2 * h) - arc.alpha) / std::max(std::abs(arc.alpha), 1.0);
    worst = std::max({worst, ev, eu, ej});
  }
  r.require(worst <= 1e-5, "finite-difference mismatch " + f("%.3e", worst));

  // adding waypoints never lowers the cost
  const auto base_sched = testing::make_schedule(12.0, {}, 26.0, 300.0);
  const auto base = solve_route(testing::make_problem(base_sched));
  std::vector<std::pair<double, double>> wps;
  double prev = base.cost();
  const double extra[][2] = {{6.0, 2.0}, {13.0, -3.0}, {20.0, 1.5}};
  for (const auto & e : extra) {
    wps.emplace_back(e[0], base.sample(e[0]).p + e[1]);
    std::sort(wps.begin(), wps.end());
    const double c = solve_route(testing::make_problem(testing::make_schedule(12.0, wps, 26.0, 300.0))).cost();
    r.require(c >= prev - 1e-12, "cost dropped after adding a waypoint");
    prev = c;
  }
  const double on_path =
    solve_route(testing::make_problem(testing::make_schedule(12.0, {{13.0, base.sample(13.0).p}}, 26.0, 300.0)))
      .cost();
  r.require(std::abs(on_path - base.cost()) <= 1e-9 * base.cost(), "on-path waypoint changed cost");

  // bit-identical simulation logs under a fixed seed
  const auto file = load_scenario(testing::scenario_path("corridor4.yaml"));
  auto config = make_sim_config(file);
  for (auto mode : {SimMode::kOptimal, SimMode::kBaseline}) {
    config.mode = mode;
    const auto a = run_simulation(config);
    const auto b = run_simulation(config);
    r.require(format_event_log(a.log) == format_event_log(b.log), "event logs differ");
    r.require(
      trajectory_csv(rows_from_samples(a.samples)) == trajectory_csv(rows_from_samples(b.samples)),
      "trajectories differ");
  }
  if (r.pass) {
    r.detail = "max FD rel err " + f("%.2e", worst) + ", waypoint costs " +
               f("%.5g", base.cost()) + " -> " + f("%.5g", prev) + ", logs identical";
  }
  return r;
}

}  // namespace

int main(int argc, char ** argv)
{
  // With --allow-reference-mismatch a criterion whose only failed check is against a rounded
  // published value still prints FAIL but does not change the exit status.
  bool allow_reference_mismatch = false;
  for (int k = 1; k < argc; ++k) {
    if (std::string(argv[k]) == "--allow-reference-mismatch") {
      allow_reference_mismatch = true;
    } else {
      std::fprintf(stderr, "usage: %s [--allow-reference-mismatch]\n", argv[0]);
      return 2;
    }
  }
  const std::pair<const char *, std::function<Result()>> criteria[] = {
    {"1 free-arc reference case", free_arc_case},
    {"2 interior-point reference case", interior_point_case},
    {"3 constrained reference cases", constrained_cases},
    {"4 oracle equivalence on random instances", oracle_equivalence},
    {"5 safety in a 100-vehicle optimal simulation", hundred_vehicle_safety},
    {"6 baseline vs optimal comparison", baseline_comparison},
    {"7 properties", properties},
  };
  int failures = 0;
  int tolerated = 0;
  for (const auto & [name, check] : criteria) {
    Result r;
    try {
      r = check();
    } catch (const std::exception & e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    if (!r.pass) {
      const bool benign = allow_reference_mismatch && r.reference_mismatch && r.failed_checks == 1;
      (benign ? tolerated : failures) += 1;
    }
    std::printf("%s criterion %s: %s\n", r.pass ? "PASS" : "FAIL", name, r.detail.c_str());
    std::fflush(stdout);
  }
  if (tolerated > 0) {
    std::printf("%d criterion failure(s) only against rounded reference values\n", tolerated);
  }
  return failures == 0 ? 0 : 1;
}
