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

#ifndef CORRIDOR__CONSTRAINT_HPP_
#define CORRIDOR__CONSTRAINT_HPP_

#include <vector>

#include "corridor/interior_bvp.hpp"
#include "corridor/model.hpp"
#include "corridor/trajectory.hpp"

namespace corridor
{

/// u = (xi / rho) * (v_k - v): the control that keeps the active margin at zero.
/// Throws std::domain_error when rho <= 0.
double constrained_control(double leader_speed_mps, double speed_mps, const SafetyParams & params);
double constrained_control(
  const LeaderProfile & leader, const VehicleState & state, const SafetyParams & params);

/// Junction data of one constrained window in a pieced trajectory.
struct JunctionReport
{
  double t1_s{0.0};
  double t2_s{0.0};
  int leader_id{0};
  double entry_margin_m{0.0};       // margin at t1
  double entry_margin_rate{0.0};    // d(margin)/dt at t1, from the unconstrained side
  double exit_control_jump{0.0};    // u(t2+) - u(t2-)
};

struct ConstrainedSolution
{
  Trajectory trajectory;
  std::vector<JunctionReport> windows;
};

struct JunctionSearchOptions
{
  int grid{24};                 // candidates per axis before local refinement
  double time_tol_s{1e-6};      // final compass step
  double feasibility_m{1e-7};   // margin slack accepted on unconstrained parts
  double edge_s{1e-3};          // keep junctions this far from knots
  int max_windows{12};
};

/// Pieces unconstrained arcs and constrained segments left to right. Each window is placed by
/// minimizing total cost over (t1, t2) inside the inter-knot interval holding the first
/// violation: the arc chain ending at t1 meets the margin tangentially, the segment rides the
/// constraint up to t2, and the remaining chain restarts from the state at t2.
/// Throws InfeasibleError with the first unresolved violation time.
ConstrainedSolution solve_constrained(
  const RoutePlanProblem & problem, const JunctionSearchOptions & options = {});

/// Margin-checked dispatcher used by solve_route: the interior chain when it is already safe,
/// otherwise the pieced solution, verified globally to `tolerances.margin_m`.
Trajectory solve_with_safety(const RoutePlanProblem & problem, double margin_tol_m = 1e-6);

/// (t1, t2) of the first constrained window. Throws ContractError when the unconstrained
/// solution never violates the margin, InfeasibleError when no window restores it.
std::pair<double, double> find_junction_times(const RoutePlanProblem & problem);

/// Waypoint-free pieced solution; ContractError when the schedule has interior waypoints.
Trajectory piece_case2(const RoutePlanProblem & problem);
/// Pieced solution honouring interior waypoints; ContractError when there are none.
Trajectory piece_case4(const RoutePlanProblem & problem);

enum class WindowPlacement {
  kNoWaypoints,
  kBeforeWaypoints,
  kAfterWaypoints,
  kBetweenWaypoints,
};

/// Position of a constrained window relative to the schedule's interior waypoints.
WindowPlacement classify_window(const ScheduleAssignment & schedule, double t1_s, double t2_s);

/// Recomputes junction diagnostics of every constrained segment of `trajectory`.
std::vector<JunctionReport> junction_reports(
  const Trajectory & trajectory, const LeaderContext & leaders, const SafetyParams & params);

}  // namespace corridor

#endif  // CORRIDOR__CONSTRAINT_HPP_
