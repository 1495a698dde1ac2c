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

#include <string>

#include "corridor/errors.hpp"
#include "corridor/scenario_io.hpp"
#include "support.hpp"

namespace corridor
{
namespace
{

const char * kMinimal = R"(schema_version: 1
id: mini
corridor:
  length_m: 300
  zones:
    - {id: 1, position_m: 150, desired_speed_mps: 10}
    - {id: 2, position_m: 300}
routes:
  - {id: main, zones: [1, 2]}
planned_vehicles:
  - id: 3
    route: main
    entry: {speed_mps: 12}
    waypoints:
      - {zone: 1, time_s: 14}
    terminal: {zone: 2, time_s: 27}
    leader:
      id: 9
      initial: {position_m: 30, speed_mps: 10}
)";

std::string location_of(const std::string & text)
{
  try {
    parse_scenario(text);
  } catch (const ParseError & e) {
    return e.location();
  }
  return "no error";
}

TEST(ParseScenario, MinimalFile)
{
  const auto f = parse_scenario(kMinimal);
  EXPECT_EQ(f.spec.id, "mini");
  ASSERT_EQ(f.spec.planned.size(), 1u);
  const auto & v = f.spec.planned[0];
  EXPECT_EQ(v.id, 3);
  EXPECT_DOUBLE_EQ(v.schedule.waypoints[0].position_m, 150.0);
  ASSERT_TRUE(v.schedule.waypoints[0].speed_mps.has_value());
  EXPECT_DOUBLE_EQ(*v.schedule.waypoints[0].speed_mps, 10.0);
  EXPECT_FALSE(v.schedule.terminal.speed_mps.has_value());
  ASSERT_TRUE(v.leader.has_value());
  EXPECT_NEAR(v.leader->exit_time_s, 27.0, 1e-12);
  EXPECT_EQ(f.leader_ids.at(3), 9);
}

TEST(ParseScenario, UnknownKeyReportsLineAndPath)
{
  std::string text = kMinimal;
  text.replace(text.find("routes:"), 7, "routez:");
  const auto loc = location_of(text);
  EXPECT_NE(loc.find("line 8"), std::string::npos) << loc;
  EXPECT_NE(loc.find("routez"), std::string::npos) << loc;
}

TEST(ParseScenario, BadNumberReportsField)
{
  std::string text = kMinimal;
  text.replace(text.find("length_m: 300"), 13, "length_m: far");
  const auto loc = location_of(text);
  EXPECT_NE(loc.find("corridor.length_m"), std::string::npos) << loc;
  EXPECT_NE(loc.find("line 4"), std::string::npos) << loc;
}

TEST(ParseScenario, MissingFieldReportsParent)
{
  std::string text = kMinimal;
  text.replace(text.find("entry: {speed_mps: 12}"), 22, "entry: {time_s: 0}");
  EXPECT_NE(location_of(text).find("planned_vehicles[0].entry"), std::string::npos);
}

TEST(ParseScenario, SyntaxErrorHasLine)
{
  EXPECT_EQ(location_of("id: [unclosed\n"), "line 2");
}

TEST(ParseScenario, ValidationFailuresAreParseErrors)
{
  std::string text = kMinimal;
  text.replace(text.find("time_s: 14"), 10, "time_s: 30");
  EXPECT_NE(location_of(text).find("planned_vehicles[0]"), std::string::npos);
}

TEST(ParseScenario, ShippedScenariosLoad)
{
  for (const char * name :
       {"case1.yaml", "case2.yaml", "case3.yaml", "case4.yaml", "corridor4.yaml",
        "corridor100.yaml", "single.yaml"}) {
    EXPECT_NO_THROW(load_scenario(testing::scenario_path(name))) << name;
  }
}

TEST(ParseScenario, MissingFileIsParseError)
{
  EXPECT_THROW(load_scenario("/nonexistent/scenario.yaml"), ParseError);
}

TEST(TimeAtPosition, PiecewiseProfile)
{
  const auto prof =
    LeaderProfile::from_phases(VehicleState{0.0, 10.0, 0.0}, {{2.0, 1.0}, {1.0, 0.0}}, 0.0);
  EXPECT_NEAR(*time_at_position(prof, 22.0), 2.0, 1e-12);
  EXPECT_NEAR(*time_at_position(prof, 34.0), 3.0, 1e-12);
  const auto stopping = LeaderProfile::from_phases(VehicleState{0.0, 10.0, 0.0}, {{5.0, -2.0}}, 0.0);
  EXPECT_FALSE(time_at_position(stopping, 100.0).has_value());
}

TEST(SimConfigFromFile, CarriesSettings)
{
  const auto f = load_scenario(testing::scenario_path("corridor4.yaml"));
  const auto c = make_sim_config(f);
  EXPECT_EQ(c.scenario.id, "corridor4");
  EXPECT_DOUBLE_EQ(c.scheduler.headway_s, f.scheduler.headway_s);
  EXPECT_EQ(c.signals.size(), 1u);
  EXPECT_EQ(c.seed, f.simulation.seed);
}

}  // namespace
}  // namespace corridor
