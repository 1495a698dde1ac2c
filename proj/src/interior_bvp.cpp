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

#include "corridor/interior_bvp.hpp"

#include <algorithm>
#include <cmath>

#include "corridor/constraint.hpp"
#include "corridor/errors.hpp"
#include "corridor/linalg.hpp"

namespace corridor
{
namespace
{

void put_row(
  DenseMatrix & a, std::size_t row, std::size_t arc, const std::array<double, 4> & coeffs,
  double scale)
{
  for (std::size_t c = 0; c < 4; ++c) {
    a(row, 4 * arc + c) += scale * coeffs[c];
  }
}

void put_condition(
  DenseMatrix & a, std::vector<double> & b, std::size_t row, std::size_t arc, double tau,
  const LinearCondition & cond)
{
  put_row(a, row, arc, position_row(tau), cond.cp);
  put_row(a, row, arc, speed_row(tau), cond.cv);
  put_row(a, row, arc, control_row(tau), cond.cu);
  b[row] = cond.rhs;
}

}  // namespace

std::array<LinearCondition, 2> initial_state_conditions(double p0_m, double v0_mps)
{
  return {LinearCondition{1.0, 0.0, 0.0, p0_m}, LinearCondition{0.0, 1.0, 0.0, v0_mps}};
}

std::array<LinearCondition, 2> free_terminal_conditions(double pf_m)
{
  return {LinearCondition{1.0, 0.0, 0.0, pf_m}, LinearCondition{0.0, 0.0, 1.0, 0.0}};
}

std::array<LinearCondition, 2> pinned_terminal_conditions(double pf_m, double vf_mps)
{
  return {LinearCondition{1.0, 0.0, 0.0, pf_m}, LinearCondition{0.0, 1.0, 0.0, vf_mps}};
}

std::vector<PolynomialArc> solve_arc_chain(const ArcChainSpec & spec)
{
  std::vector<double> knots{spec.t0_s};
  for (const auto & j : spec.junctions) {
    knots.push_back(j.time_s);
  }
  knots.push_back(spec.tf_s);
  for (std::size_t k = 1; k < knots.size(); ++k) {
    if (!(knots[k] - knots[k - 1] > 1e-12)) {
      throw SolverError("zero-duration arc in chain at t=" + std::to_string(knots[k]));
    }
  }

  const std::size_t arcs = knots.size() - 1;
  const std::size_t n = 4 * arcs;
  DenseMatrix a(n, n);
  std::vector<double> b(n, 0.0);
  std::size_t row = 0;
  for (const auto & cond : spec.initial) {
    put_condition(a, b, row++, 0, 0.0, cond);
  }
  for (std::size_t j = 0; j < spec.junctions.size(); ++j) {
    const auto & jn = spec.junctions[j];
    const std::size_t left = j;
    const std::size_t right = j + 1;
    const double dur = knots[j + 1] - knots[j];
    if (jn.touch) {
      const auto & tc = *jn.touch;
      put_row(a, row, left, position_row(dur), tc.cp);
      put_row(a, row, left, speed_row(dur), tc.cv);
      b[row++] = tc.rhs;
      put_row(a, row, left, position_row(dur), 1.0);
      put_row(a, row++, right, position_row(0.0), -1.0);
      put_row(a, row, left, speed_row(dur), 1.0);
      put_row(a, row++, right, speed_row(0.0), -1.0);
      put_row(a, row, left, control_row(dur), -tc.cp);
      put_row(a, row, right, control_row(0.0), tc.cp);
      a(row, 4 * left) -= tc.cv;
      a(row++, 4 * right) += tc.cv;
      continue;
    }
    put_row(a, row, left, position_row(dur), 1.0);
    b[row++] = jn.position_m;
    put_row(a, row, right, position_row(0.0), 1.0);
    b[row++] = jn.position_m;
    if (jn.speed_mps) {
      put_row(a, row, left, speed_row(dur), 1.0);
      b[row++] = *jn.speed_mps;
      put_row(a, row, right, speed_row(0.0), 1.0);
      b[row++] = *jn.speed_mps;
    } else {
      put_row(a, row, left, speed_row(dur), 1.0);
      put_row(a, row++, right, speed_row(0.0), -1.0);
      put_row(a, row, left, control_row(dur), 1.0);
      put_row(a, row++, right, control_row(0.0), -1.0);
    }
  }
  const double last = knots[arcs] - knots[arcs - 1];
  for (const auto & cond : spec.terminal) {
    put_condition(a, b, row++, arcs - 1, last, cond);
  }

  const auto x = solve_linear_system(std::move(a), std::move(b));
  std::vector<PolynomialArc> out;
  out.reserve(arcs);
  for (std::size_t k = 0; k < arcs; ++k) {
    out.push_back(PolynomialArc{
      knots[k], knots[k + 1], x[4 * k], x[4 * k + 1], x[4 * k + 2], x[4 * k + 3]});
  }
  return out;
}

ArcChainSpec chain_for_schedule(const ScheduleAssignment & schedule)
{
  ArcChainSpec spec;
  spec.t0_s = schedule.entry.time_s;
  spec.initial = initial_state_conditions(schedule.entry.position_m, schedule.entry.speed_mps);
  for (const auto & w : schedule.waypoints) {
    spec.junctions.push_back(ChainJunction{w.time_s, w.position_m, w.speed_mps, std::nullopt});
  }
  spec.tf_s = schedule.terminal.time_s;
  spec.terminal = schedule.terminal.speed_mps
                    ? pinned_terminal_conditions(
                        schedule.terminal.position_m, *schedule.terminal.speed_mps)
                    : free_terminal_conditions(schedule.terminal.position_m);
  return spec;
}

ArcChainSpec chain_for_problem(const RoutePlanProblem & problem)
{
  ArcChainSpec spec = chain_for_schedule(problem.schedule);
  for (const auto & t : problem.touches) {
    ChainJunction j;
    j.time_s = t.time_s;
    j.touch = t.condition;
    spec.junctions.push_back(j);
  }
  std::stable_sort(
    spec.junctions.begin(), spec.junctions.end(),
    [](const ChainJunction & x, const ChainJunction & y) { return x.time_s < y.time_s; });
  return spec;
}

Trajectory solve_interior_bvp(const RoutePlanProblem & problem)
{
  Trajectory out;
  for (const auto & arc : solve_arc_chain(chain_for_problem(problem))) {
    out.append(arc);
  }
  return out;
}

Trajectory solve_route(const RoutePlanProblem & problem)
{
  const auto knots = problem.schedule.knot_times();
  for (std::size_t k = 1; k < knots.size(); ++k) {
    if (!(knots[k] > knots[k - 1])) {
      throw InfeasibleError(
        problem.vehicle_id, knots[k],
        "vehicle " + std::to_string(problem.vehicle_id) + ": zero-duration arc ending at t=" +
          std::to_string(knots[k]));
    }
  }
  if (!problem.safety || problem.safety->leaders.empty()) {
    return solve_interior_bvp(problem);
  }
  return solve_with_safety(problem);
}

std::vector<BoundDiagnostic> bound_diagnostics(
  const Trajectory & trajectory, const VehicleParams & params, double step_s)
{
  if (!(step_s > 0.0)) {
    throw ContractError("bound_diagnostics: step must be positive");
  }
  std::vector<BoundDiagnostic> out;
  const double t0 = trajectory.t_begin();
  const double t1 = trajectory.t_end();
  const int n = std::max(1, static_cast<int>(std::ceil((t1 - t0) / step_s)));
  // one entry per excursion: record the first sample outside each bound
  bool v_lo = false, v_hi = false, u_lo = false, u_hi = false;
  for (int k = 0; k <= n; ++k) {
    const double t = std::min(t1, t0 + k * step_s);
    const auto s = trajectory.sample(t);
    auto track = [&](bool & flag, bool outside, const char * q, double value, double bound) {
      if (outside && !flag) {
        out.push_back(BoundDiagnostic{t, q, value, bound});
      }
      flag = outside;
    };
    track(v_lo, s.v < params.v_min_mps - 1e-9, "speed", s.v, params.v_min_mps);
    track(v_hi, s.v > params.v_max_mps + 1e-9, "speed", s.v, params.v_max_mps);
    track(u_lo, s.u < params.u_min_mps2 - 1e-9, "control", s.u, params.u_min_mps2);
    track(u_hi, s.u > params.u_max_mps2 + 1e-9, "control", s.u, params.u_max_mps2);
  }
  return out;
}

}  // namespace corridor
