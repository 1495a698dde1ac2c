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

#ifndef CORRIDOR__SCENARIO_IO_HPP_
#define CORRIDOR__SCENARIO_IO_HPP_

#include <map>
#include <string>

#include "corridor/interior_bvp.hpp"
#include "corridor/metrics.hpp"
#include "corridor/model.hpp"
#include "corridor/scheduler.hpp"
#include "corridor/sim.hpp"

namespace corridor
{

inline constexpr int kScenarioSchemaVersion = 1;

struct SimulationSettings
{
  SimMode mode{SimMode::kOptimal};
  double dt_s{0.1};
  std::uint64_t seed{1};
  double horizon_s{900.0};
  double entry_buffer_m{1.0};
  double merge_gap_s{1.0};
  double reschedule_step_s{0.5};
  int max_reschedules{20};
};

/// Everything a scenario file carries.
struct ScenarioFile
{
  ScenarioSpec spec;
  std::string description;
  FifoSchedulerParams scheduler;
  SimulationSettings simulation;
  std::vector<SignalPlan> signals;
  MetricsConfig metrics;
  std::string fuel_source;
  std::map<int, int> leader_ids;  // planned vehicle id -> id of its scripted leader
};

/// Parses YAML scenario text. Throws ParseError carrying "line N" and the field path for
/// syntax errors, missing or unknown keys, wrong types and failed validation.
ScenarioFile parse_scenario(const std::string & text);
ScenarioFile load_scenario(const std::string & path);

/// Time at which a leader profile reaches `position_m`; nullopt if it never does.
std::optional<double> time_at_position(const LeaderProfile & profile, double position_m);

/// Route problem of a planned vehicle, with its scripted leader as the only leader.
RoutePlanProblem planned_problem(const ScenarioSpec & spec, const PlannedVehicle & vehicle);

SimConfig make_sim_config(const ScenarioFile & file);

}  // namespace corridor

#endif  // CORRIDOR__SCENARIO_IO_HPP_
