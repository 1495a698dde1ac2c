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

#include <stdexcept>

#include "corridor/errors.hpp"
#include "corridor/model.hpp"

namespace corridor
{
namespace
{

ScenarioSpec two_zone_spec()
{
  ScenarioSpec s;
  s.id = "t";
  s.corridor.length_m = 300.0;
  s.corridor.zones = {ConflictZone{1, "a", 150.0, std::nullopt}, ConflictZone{2, "b", 300.0, std::nullopt}};
  s.routes = {Route{"main", {1, 2}, std::nullopt, 0.0}};
  return s;
}

bool has_kind(const std::vector<Violation> & v, ViolationKind kind)
{
  for (const auto & x : v) {
    if (x.kind == kind) {
      return true;
    }
  }
  return false;
}

TEST(ValidateScenario, AcceptsTwoZoneCorridor)
{
  EXPECT_TRUE(validate_scenario(two_zone_spec()).empty());
}

TEST(ValidateScenario, RejectsRepeatedZonePosition)
{
  auto s = two_zone_spec();
  s.corridor.zones[0].position_m = 300.0;
  EXPECT_TRUE(has_kind(validate_scenario(s), ViolationKind::kZoneOrder));
}

TEST(ValidateScenario, RejectsZeroTimeGap)
{
  auto s = two_zone_spec();
  s.safety.rho_s = 0.0;
  EXPECT_TRUE(has_kind(validate_scenario(s), ViolationKind::kTimeGap));
}

TEST(ValidateScenario, RejectsUnknownRouteZone)
{
  auto s = two_zone_spec();
  s.routes[0].zone_ids = {1, 7};
  EXPECT_TRUE(has_kind(validate_scenario(s), ViolationKind::kRouteZones));
}

TEST(LeaderStateAt, ConstantSpeed)
{
  const auto prof = LeaderProfile::from_phases(VehicleState{30.0, 11.5, 0.0}, {}, 40.0);
  const auto s = leader_state_at(prof, 2.0);
  EXPECT_NEAR(s.position_m, 53.0, 1e-12);
  EXPECT_NEAR(s.speed_mps, 11.5, 1e-12);
}

TEST(LeaderStateAt, ConstantAcceleration)
{
  const auto prof = LeaderProfile::from_phases(VehicleState{0.0, 10.0, 0.0}, {{5.0, 1.0}}, 5.0);
  const auto s = leader_state_at(prof, 2.0);
  EXPECT_NEAR(s.position_m, 22.0, 1e-12);
  EXPECT_NEAR(s.speed_mps, 12.0, 1e-12);
}

TEST(LeaderStateAt, PhasesAreContinuous)
{
  const auto prof =
    LeaderProfile::from_phases(VehicleState{0.0, 10.0, 0.0}, {{2.0, 1.0}, {3.0, -2.0}}, 5.0);
  const auto a = leader_state_at(prof, 2.0 - 1e-9);
  const auto b = leader_state_at(prof, 2.0 + 1e-9);
  EXPECT_NEAR(a.position_m, b.position_m, 1e-7);
  EXPECT_NEAR(a.speed_mps, b.speed_mps, 1e-7);
}

TEST(LeaderStateAt, QueryAfterExitThrows)
{
  const auto prof = LeaderProfile::from_phases(VehicleState{0.0, 10.0, 0.0}, {}, 5.0);
  EXPECT_THROW(leader_state_at(prof, 6.0), QueryError);
}

TEST(MinSafeDistance, Examples)
{
  SafetyParams p;
  p.gamma_m = 3.0;
  p.rho_s = 1.2;
  EXPECT_NEAR(min_safe_distance(p, 12.0), 17.4, 1e-12);
  EXPECT_NEAR(min_safe_distance(p, 0.0), 3.0, 1e-12);
  p.gamma_m = 0.0;
  EXPECT_NEAR(min_safe_distance(p, 11.0), 13.2, 1e-12);
  EXPECT_THROW(min_safe_distance(p, -1.0), std::domain_error);
}

TEST(RouteGeometry, RampOffsets)
{
  CorridorSpec c;
  c.length_m = 1200.0;
  c.zones = {ConflictZone{1, "merge", 300.0, 22.0}, ConflictZone{4, "end", 1100.0, std::nullopt}};
  const Route ramp{"ramp", {1, 4}, 1, 200.0};
  EXPECT_DOUBLE_EQ(route_offset(ramp, c), 100.0);
  EXPECT_DOUBLE_EQ(zone_position_on_route(ramp, c, 1), 200.0);
  EXPECT_DOUBLE_EQ(route_length(ramp, c), 1000.0);
  const Route main{"main", {1, 4}, std::nullopt, 0.0};
  EXPECT_DOUBLE_EQ(route_length(main, c), 1100.0);
}

}  // namespace
}  // namespace corridor
