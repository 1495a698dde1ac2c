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

#include <gtest/gtest.h>

#include <cmath>
#include <variant>

#include "corridor/errors.hpp"
#include "corridor/interior_bvp.hpp"
#include "corridor/margin.hpp"
#include "support.hpp"

namespace corridor
{
namespace
{

using testing::make_problem;
using testing::make_schedule;

TEST(InteriorBvp, OneWaypointChain)
{
  const auto traj = solve_interior_bvp(testing::case3());
  ASSERT_EQ(traj.segments().size(), 2u);
  const double eps = 1e-9;
  const auto a = traj.sample(15.0 - eps);
  const auto b = traj.sample(15.0 + eps);
  EXPECT_NEAR(traj.sample(15.0).p, 150.0, 1e-6);
  EXPECT_NEAR(traj.sample(26.0).p, 300.0, 1e-6);
  EXPECT_NEAR(a.v, b.v, 1e-6);
  EXPECT_NEAR(a.u, b.u, 1e-6);
  EXPECT_NEAR(traj.sample(26.0).u, 0.0, 1e-9);
}

TEST(InteriorBvp, FirstArcDeceleratesThenAccelerates)
{
  const auto traj = solve_interior_bvp(testing::case3());
  const auto & first = std::get<PolynomialArc>(traj.segments().front());
  const double u0 = eval_arc(first, first.t_start_s).u;
  const double u1 = eval_arc(first, first.t_end_s).u;
  EXPECT_LT(u0, 0.0);
  EXPECT_GT(u1, 0.0);
}

TEST(InteriorBvp, WaypointOnCruiseLine)
{
  const auto traj =
    solve_interior_bvp(make_problem(make_schedule(10.0, {{15.0, 150.0}}, 30.0, 300.0)));
  for (double t = 0.0; t <= 30.0; t += 0.5) {
    EXPECT_NEAR(traj.sample(t).u, 0.0, 1e-9);
  }
  EXPECT_NEAR(traj.cost(), 0.0, 1e-12);
}

TEST(InteriorBvp, PinnedWaypointSpeedAllowsControlJump)
{
  auto sched = make_schedule(12.0, {{15.0, 150.0}}, 26.0, 300.0);
  sched.waypoints[0].speed_mps = 9.0;
  const auto traj = solve_interior_bvp(make_problem(sched));
  EXPECT_NEAR(traj.sample(15.0).v, 9.0, 1e-9);
  EXPECT_NEAR(traj.sample(15.0).p, 150.0, 1e-9);
}

TEST(ArcChain, ZeroDurationArcThrows)
{
  ArcChainSpec spec;
  spec.initial = initial_state_conditions(0.0, 12.0);
  spec.junctions = {ChainJunction{0.0, 0.0, std::nullopt}};
  spec.tf_s = 26.0;
  spec.terminal = free_terminal_conditions(300.0);
  EXPECT_THROW(solve_arc_chain(spec), SolverError);
}

TEST(ArcChain, TouchJunctionHoldsConditionAndJumpRelation)
{
  ArcChainSpec spec;
  spec.t0_s = 0.0;
  spec.initial = initial_state_conditions(0.0, 14.0);
  const LinearCondition touch{1.0, 1.2, 0.0, 280.0};
  ChainJunction j;
  j.time_s = 20.0;
  j.touch = touch;
  spec.junctions.push_back(j);
  spec.tf_s = 26.0;
  spec.terminal = free_terminal_conditions(300.0);
  const auto arcs = solve_arc_chain(spec);
  ASSERT_EQ(arcs.size(), 2u);
  const auto l = arcs[0].at(20.0);
  const auto r = arcs[1].at(20.0);
  EXPECT_NEAR(touch.cp * l.p + touch.cv * l.v, touch.rhs, 1e-9);
  EXPECT_NEAR(l.p, r.p, 1e-9);
  EXPECT_NEAR(l.v, r.v, 1e-9);
  EXPECT_NEAR(touch.cp * (r.u - l.u) + touch.cv * (arcs[1].alpha - arcs[0].alpha), 0.0, 1e-9);
  EXPECT_GT(std::abs(r.u - l.u), 1e-3);
}

TEST(ArcChain, ChainForProblemOrdersTouchesWithWaypoints)
{
  auto p = testing::make_problem(testing::make_schedule(12.0, {{15.0, 150.0}}, 26.0, 300.0));
  p.touches.push_back(MarginTouch{8.0, LinearCondition{1.0, 1.2, 0.0, 100.0}});
  const auto spec = chain_for_problem(p);
  ASSERT_EQ(spec.junctions.size(), 2u);
  EXPECT_DOUBLE_EQ(spec.junctions[0].time_s, 8.0);
  EXPECT_TRUE(spec.junctions[0].touch.has_value());
  EXPECT_DOUBLE_EQ(spec.junctions[1].time_s, 15.0);
  EXPECT_FALSE(spec.junctions[1].touch.has_value());
}

TEST(SolveRoute, FreeArcWithDistantLeader)
{
  auto p = make_problem(
    make_schedule(12.0, {}, 26.0, 300.0), testing::make_leader(30.0, 11.5, 0.0, 300.0));
  const auto traj = solve_route(p);
  ASSERT_EQ(traj.segments().size(), 1u);
  EXPECT_TRUE(traj.constrained_windows().empty());
  const auto m = min_margin(traj, p.safety->leaders, p.safety->params, 0.0, 26.0);
  EXPECT_GT(m.margin_m, 0.0);
}

TEST(SolveRoute, WaypointAtEntryTimeIsInfeasible)
{
  const auto p = make_problem(make_schedule(12.0, {{0.0, 150.0}}, 26.0, 300.0));
  EXPECT_THROW(solve_route(p), InfeasibleError);
}

TEST(SolveRoute, DispatchesToConstrainedPiecing)
{
  const auto traj = solve_route(testing::case4());
  const auto w = traj.constrained_windows();
  ASSERT_EQ(w.size(), 1u);
  EXPECT_NEAR(w[0].first, 2.7, 0.5);
}

TEST(BoundDiagnostics, ReportsSpeedExcursion)
{
  VehicleParams vp;
  vp.v_max_mps = 11.0;
  const auto traj = solve_route(testing::case1());
  const auto d = bound_diagnostics(traj, vp);
  ASSERT_FALSE(d.empty());
  EXPECT_EQ(d.front().quantity, "speed");
  EXPECT_NEAR(d.front().time_s, 0.0, 1e-9);
}

}  // namespace
}  // namespace corridor
