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

#include <algorithm>

#include <cmath>

#include "corridor/errors.hpp"
#include "corridor/interior_bvp.hpp"
#include "corridor/oracle.hpp"
#include "support.hpp"

namespace corridor
{
namespace
{

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-12); }

TEST(Transcribe, TooFewStepsThrows)
{
  EXPECT_THROW(transcribe(testing::case1(), 5), ContractError);
}

TEST(Transcribe, PinRowsFirstThenMargins)
{
  const auto t = transcribe(testing::case4(), 100);
  ASSERT_GE(t.rows.size(), 2u);
  EXPECT_TRUE(t.rows[0].equality);
  EXPECT_TRUE(t.rows[1].equality);
  EXPECT_FALSE(t.rows.back().equality);
  EXPECT_EQ(t.margin_times_s.size(), t.rows.size() - 2);
}

TEST(Transcribe, ExactDoubleIntegratorCoefficients)
{
  const auto t = transcribe(testing::case1(), 50);
  // unit control everywhere: p(t) = p0 + v0 t + t^2 / 2
  const auto pc = t.position_coeffs(13.3);
  double p = t.p0_m + t.v0_mps * 13.3;
  for (double c : pc) {
    p += c;
  }
  EXPECT_NEAR(p, 12.0 * 13.3 + 0.5 * 13.3 * 13.3, 1e-9);
}

TEST(Oracle, CruiseNeedsNoControl)
{
  const auto sol = solve_transcribed(
    testing::make_problem(testing::make_schedule(10.0, {{15.0, 150.0}}, 30.0, 300.0)), 200);
  EXPECT_NEAR(sol.cost, 0.0, 1e-12);
  for (double u : sol.u) {
    EXPECT_NEAR(u, 0.0, 1e-9);
  }
}

TEST(Transcribe, NodesLandOnWaypointsAndLeaderExit)
{
  const auto p = testing::case4();
  const auto t = transcribe(p, 200);
  ASSERT_EQ(t.nodes.size(), 201u);
  auto has_node = [&](double x) {
    return std::any_of(t.nodes.begin(), t.nodes.end(), [&](double n) { return std::abs(n - x) < 1e-12; });
  };
  EXPECT_TRUE(has_node(p.schedule.waypoints[0].time_s));
  EXPECT_TRUE(has_node(p.safety->leaders.windows()[0].present_to()));
  EXPECT_TRUE(std::is_sorted(t.nodes.begin(), t.nodes.end()));
  EXPECT_DOUBLE_EQ(t.nodes.front(), p.schedule.entry.time_s);
  EXPECT_DOUBLE_EQ(t.nodes.back(), p.schedule.terminal.time_s);
}

TEST(Oracle, MatchesFreeArc)
{
  const auto p = testing::case1();
  EXPECT_LT(rel(solve_route(p).cost(), solve_transcribed(p, 1000).cost), 1e-3);
}

TEST(Oracle, MatchesInteriorChain)
{
  const auto p = testing::case3();
  EXPECT_LT(rel(solve_route(p).cost(), solve_transcribed(p, 1000).cost), 1e-3);
}

TEST(Oracle, MatchesConstrainedPiecing)
{
  for (const auto & p : {testing::case2(), testing::case4()}) {
    const auto sol = solve_transcribed(p, 1000);
    EXPECT_LT(rel(solve_route(p).cost(), sol.cost), 1e-3);
    EXPECT_GT(sol.active_inequalities, 0);
  }
}

TEST(Oracle, MeetsPins)
{
  const auto sol = solve_transcribed(testing::case3(), 400);
  EXPECT_NEAR(sol.sample(15.0).p, 150.0, 1e-6);
  EXPECT_NEAR(sol.sample(26.0).p, 300.0, 1e-6);
}

TEST(Oracle, WarmStartGivesSameOptimum)
{
  const auto p = testing::case2();
  const auto cold = solve_transcribed(p, 300);
  OracleOptions o;
  const auto t = transcribe(p, 300);
  for (int k = 0; k < static_cast<int>(t.margin_times_s.size()); ++k) {
    if (t.margin_times_s[k] > 3.3 && t.margin_times_s[k] < 5.1) {
      o.initial_active.push_back(k);
    }
  }
  const auto warm = solve_transcribed(p, 300, o);
  EXPECT_NEAR(warm.cost, cold.cost, 1e-9 * cold.cost);
}

}  // namespace
}  // namespace corridor
