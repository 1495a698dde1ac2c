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

#ifndef CORRIDOR__TESTS__SUPPORT_HPP_
#define CORRIDOR__TESTS__SUPPORT_HPP_

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "corridor/interior_bvp.hpp"
#include "corridor/model.hpp"
#include "corridor/motion.hpp"

namespace corridor::testing
{

inline std::string scenario_path(const std::string & name)
{
  return std::string(CORRIDOR_SCENARIO_DIR) + "/" + name;
}

/// Entry at t = 0, p = 0; waypoints as (time, position); free terminal speed.
inline ScheduleAssignment make_schedule(
  double v0, const std::vector<std::pair<double, double>> & waypoints, double tf, double pf)
{
  ScheduleAssignment s;
  s.entry = VehicleState{0.0, v0, 0.0};
  int zone = 1;
  for (const auto & [t, p] : waypoints) {
    s.waypoints.push_back(Waypoint{zone++, t, p, std::nullopt});
  }
  s.terminal = Waypoint{zone, tf, pf, std::nullopt};
  return s;
}

/// Leader starting at s0 with speed v and constant acceleration, leaving when it reaches `end_m`.
inline LeaderProfile make_leader(double s0, double v, double accel, double end_m)
{
  LeaderProfile prof = LeaderProfile::from_phases(VehicleState{s0, v, 0.0}, {{1.0, accel}}, 0.0);
  // exit time: first t with s0 + v t + a t^2 / 2 = end_m
  const double d = end_m - s0;
  prof.exit_time_s = accel == 0.0 ? d / v : (-v + std::sqrt(v * v + 2.0 * accel * d)) / accel;
  return prof;
}

inline RoutePlanProblem make_problem(
  const ScheduleAssignment & schedule, const std::optional<LeaderProfile> & leader = std::nullopt,
  SafetyParams safety = {})
{
  RoutePlanProblem p;
  p.vehicle_id = 1;
  p.schedule = schedule;
  if (leader) {
    p.safety =
      SafetyContext{LeaderContext::single(std::make_shared<ProfileMotion>(*leader)), safety};
  }
  return p;
}

inline SafetyParams tight_safety()
{
  SafetyParams s;
  s.xi = 1.0;
  s.gamma_m = 1.3;
  s.rho_s = 1.2;
  return s;
}

/// The four reference problems on a 300 m approach with terminal (26 s, 300 m).
inline RoutePlanProblem case1() { return make_problem(make_schedule(12.0, {}, 26.0, 300.0)); }

inline RoutePlanProblem case2()
{
  return make_problem(
    make_schedule(14.0, {}, 26.0, 300.0), make_leader(20.0, 11.5, 0.02, 300.0), tight_safety());
}

inline RoutePlanProblem case3()
{
  return make_problem(
    make_schedule(12.0, {{15.0, 150.0}}, 26.0, 300.0), make_leader(30.0, 11.5, 0.0, 300.0));
}

inline RoutePlanProblem case4()
{
  return make_problem(
    make_schedule(14.0, {{13.0, 150.0}}, 26.0, 300.0), make_leader(19.8, 11.5, 0.0, 300.0),
    tight_safety());
}

}  // namespace corridor::testing

#endif  // CORRIDOR__TESTS__SUPPORT_HPP_
