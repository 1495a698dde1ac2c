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

#ifndef CORRIDOR__INTERIOR_BVP_HPP_
#define CORRIDOR__INTERIOR_BVP_HPP_

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "corridor/arc.hpp"
#include "corridor/model.hpp"
#include "corridor/motion.hpp"
#include "corridor/trajectory.hpp"

namespace corridor
{

struct SafetyContext
{
  LeaderContext leaders;
  SafetyParams params;
};

/// cp * p + cv * v + cu * u = rhs, evaluated at one end of an arc chain.
struct LinearCondition
{
  double cp{0.0};
  double cv{0.0};
  double cu{0.0};
  double rhs{0.0};
};

/// Point where the margin is held at zero without riding the constraint, e.g. the instant a
/// leader leaves. Only cp, cv and rhs of the condition are used.
struct MarginTouch
{
  double time_s{0.0};
  LinearCondition condition;
};

struct RoutePlanProblem
{
  int vehicle_id{0};
  ScheduleAssignment schedule;
  VehicleParams vehicle;
  std::optional<SafetyContext> safety;
  std::vector<MarginTouch> touches;  // filled by the constrained solver
};

/// Interior pin of a chain. Position is always pinned on both sides; when `speed_mps` is set
/// the speed is pinned on both sides too and the control may jump, otherwise p, v and u are
/// continuous across the junction.
/// A junction with `touch` set imposes cp * p + cv * v = rhs instead; p and v stay continuous
/// and the control and jerk jump together so that cp * du + cv * dalpha = 0.
struct ChainJunction
{
  double time_s{0.0};
  double position_m{0.0};
  std::optional<double> speed_mps;
  std::optional<LinearCondition> touch;
};

struct ArcChainSpec
{
  double t0_s{0.0};
  std::array<LinearCondition, 2> initial;
  std::vector<ChainJunction> junctions;
  double tf_s{0.0};
  std::array<LinearCondition, 2> terminal;
};

std::array<LinearCondition, 2> initial_state_conditions(double p0_m, double v0_mps);
std::array<LinearCondition, 2> free_terminal_conditions(double pf_m);
std::array<LinearCondition, 2> pinned_terminal_conditions(double pf_m, double vf_mps);

/// Assembles and solves the 4(K+1) linear system of a K-junction chain.
/// Throws SolverError on a zero-duration arc or a singular system.
std::vector<PolynomialArc> solve_arc_chain(const ArcChainSpec & spec);

/// Chain spec for a schedule: entry state, every waypoint, terminal pin (free speed unless the
/// terminal carries a speed).
ArcChainSpec chain_for_schedule(const ScheduleAssignment & schedule);
/// chain_for_schedule plus the problem's margin touches, in time order.
ArcChainSpec chain_for_problem(const RoutePlanProblem & problem);

/// Unconstrained multi-waypoint solution; the safety context is ignored.
Trajectory solve_interior_bvp(const RoutePlanProblem & problem);

/// Full dispatcher: free arc, interior-point chain, or (when the planned motion breaks the
/// rear-end margin) pieced constrained solution. Throws InfeasibleError with the first
/// violating time when no safe trajectory meets the schedule.
Trajectory solve_route(const RoutePlanProblem & problem);

struct BoundDiagnostic
{
  double time_s{0.0};
  std::string quantity;  // "speed" or "control"
  double value{0.0};
  double bound{0.0};
};

/// Speed and control bound excursions of a planned trajectory. Bounds are reported, never
/// enforced.
std::vector<BoundDiagnostic> bound_diagnostics(
  const Trajectory & trajectory, const VehicleParams & params, double step_s = 0.05);

}  // namespace corridor

#endif  // CORRIDOR__INTERIOR_BVP_HPP_
