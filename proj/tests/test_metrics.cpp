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
#include <vector>

#include "corridor/errors.hpp"
#include "corridor/interior_bvp.hpp"
#include "corridor/metrics.hpp"
#include "support.hpp"

namespace corridor
{
namespace
{

RunReport report(const std::string & id, double fuel, int violations)
{
  RunReport r;
  r.scenario_id = id;
  VehicleReport v;
  v.id = 1;
  v.fuel = fuel;
  v.completed = true;
  v.travel_time_s = 60.0;
  v.segment_times_s["entry->a"] = 20.0;
  r.vehicles.push_back(v);
  for (int k = 0; k < violations; ++k) {
    r.violations.push_back(ViolationEvent{1, 1.0 * k, 1.0 * k, 0.1});
  }
  r.aggregate();
  return r;
}

TEST(FuelRate, ZeroCoefficients)
{
  EXPECT_DOUBLE_EQ(fuel_rate(12.0, 1.0, FuelCoefficients{}), 0.0);
}

TEST(FuelRate, IdleIsConstantTerm)
{
  const auto c = FuelCoefficients::passenger_car();
  EXPECT_DOUBLE_EQ(fuel_rate(0.0, 0.0, c), c.q0);
}

TEST(FuelRate, BrakingDropsAccelerationTerm)
{
  const auto c = FuelCoefficients::passenger_car();
  EXPECT_DOUBLE_EQ(fuel_rate(12.0, -1.0, c), fuel_rate(12.0, 0.0, c));
  EXPECT_GT(fuel_rate(12.0, 1.0, c), fuel_rate(12.0, 0.0, c));
}

TEST(TotalFuel, ConstantCruise)
{
  const auto c = FuelCoefficients::passenger_car();
  const std::vector<double> v(11, 10.0);
  const std::vector<double> u(11, 0.0);
  EXPECT_NEAR(total_fuel(v, u, 1.0, c), 10.0 * fuel_rate(10.0, 0.0, c), 1e-12);
}

TEST(TotalFuel, NeedsTwoSamples)
{
  const auto c = FuelCoefficients::passenger_car();
  EXPECT_THROW(total_fuel({}, {}, 1.0, c), ContractError);
  EXPECT_THROW(total_fuel({1.0}, {0.0}, 1.0, c), ContractError);
}

TEST(TotalFuel, SmoothBeatsStopAndGo)
{
  const auto c = FuelCoefficients::passenger_car();
  const auto traj = solve_route(testing::case1());
  std::vector<double> v;
  std::vector<double> u;
  for (int k = 0; k <= 260; ++k) {
    const auto s = traj.sample(0.1 * k);
    v.push_back(s.v);
    u.push_back(s.u);
  }
  // same endpoints: brake 12 -> 0 in 4 s, wait 6 s, reach 300 m at 26 s with a 4 s ramp
  std::vector<double> v2;
  std::vector<double> u2;
  const double d_brake = 24.0;
  const double cruise = (300.0 - d_brake) / (16.0 - 2.0);
  for (int k = 0; k <= 260; ++k) {
    const double t = 0.1 * k;
    if (t < 4.0) {
      v2.push_back(12.0 - 3.0 * t);
      u2.push_back(-3.0);
    } else if (t < 10.0) {
      v2.push_back(0.0);
      u2.push_back(0.0);
    } else if (t < 14.0) {
      v2.push_back(cruise * (t - 10.0) / 4.0);
      u2.push_back(cruise / 4.0);
    } else {
      v2.push_back(cruise);
      u2.push_back(0.0);
    }
  }
  EXPECT_LT(total_fuel(v, u, 0.1, c), total_fuel(v2, u2, 0.1, c));
}

TEST(ViolationEvents, GroupsConsecutiveSamples)
{
  std::vector<SimSample> s;
  const double m[] = {1.0, -0.1, -0.2, 0.5, -0.3, 1.0};
  for (int k = 0; k < 6; ++k) {
    s.push_back(SimSample{1, 0.1 * k, 0.0, 10.0, 0.0, m[k]});
  }
  const auto e = violation_events(s, 1e-3);
  ASSERT_EQ(e.size(), 2u);
  EXPECT_NEAR(e[0].magnitude_m, 0.2, 1e-12);
  EXPECT_NEAR(e[0].t_end_s, 0.2, 1e-12);
}

TEST(CompareRuns, SelfComparisonIsNeutral)
{
  const auto a = report("x", 100.0, 3);
  const auto c = compare_runs(a, a);
  EXPECT_DOUBLE_EQ(c.fuel_savings_pct, 0.0);
  EXPECT_DOUBLE_EQ(c.travel_time_delta_pct, 0.0);
  EXPECT_DOUBLE_EQ(c.violation_delta_pct, 0.0);
  ASSERT_EQ(c.segments.size(), 1u);
}

TEST(CompareRuns, FuelSavingsArithmetic)
{
  const auto c = compare_runs(report("x", 100.0, 2), report("x", 59.0, 0));
  EXPECT_NEAR(c.fuel_savings_pct, 41.0, 1e-9);
  EXPECT_NEAR(c.violation_delta_pct, -100.0, 1e-9);
}

TEST(CompareRuns, RejectsMismatchedReports)
{
  RunReport empty;
  empty.scenario_id = "x";
  EXPECT_THROW(compare_runs(empty, report("x", 1.0, 0)), ContractError);
  EXPECT_THROW(compare_runs(report("x", 1.0, 0), report("y", 1.0, 0)), ContractError);
}

}  // namespace
}  // namespace corridor
