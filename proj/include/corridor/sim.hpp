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

#ifndef CORRIDOR__SIM_HPP_
#define CORRIDOR__SIM_HPP_

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "corridor/interior_bvp.hpp"
#include "corridor/model.hpp"
#include "corridor/scheduler.hpp"
#include "corridor/trajectory.hpp"

namespace corridor
{

enum class SimMode { kOptimal, kBaseline };

const char * to_string(SimMode mode);
/// "optimal" or "baseline"; throws ContractError otherwise.
SimMode parse_sim_mode(const std::string & text);

struct IdmParams
{
  double desired_speed_mps{15.0};
  double time_headway_s{1.2};
  double min_gap_m{3.0};
  double exponent{4.0};
  double max_accel_mps2{1.5};
  double comfort_decel_mps2{2.0};
  double u_min_mps2{-3.0};
  double u_max_mps2{2.5};
};

struct LeaderObservation
{
  double gap_m{0.0};  // leader position minus own position along the path
  double speed_mps{0.0};
};

/// Intelligent-driver-model acceleration clamped to [u_min, u_max].
double baseline_accel(
  const VehicleState & state, const std::optional<LeaderObservation> & leader,
  const IdmParams & params);

/// Fixed-time traffic signal at a conflict zone; only human-driven (baseline) traffic obeys it.
struct SignalPlan
{
  int zone_id{0};
  double cycle_s{60.0};
  double green_s{30.0};
  double offset_s{0.0};  // start of the first green

  bool green_at(double t_s) const;
};

struct SimConfig
{
  ScenarioSpec scenario;
  SimMode mode{SimMode::kOptimal};
  double dt_s{0.1};
  std::uint64_t seed{1};
  double horizon_s{900.0};
  FifoSchedulerParams scheduler;
  /// Entry is held back while the margin to the vehicle ahead would be below this.
  double entry_buffer_m{1.0};
  /// Schedule push-back tried when a plan is infeasible, and how many times.
  double reschedule_step_s{0.5};
  int max_reschedules{20};
  double idm_max_accel_mps2{1.5};
  double idm_comfort_decel_mps2{2.0};
  /// Gap-acceptance look-ahead for ramp vehicles, in seconds of mainline travel.
  double merge_gap_s{1.0};
  std::vector<SignalPlan> signals;
};

struct SimEvent
{
  double t_s{0.0};
  int vehicle_id{0};
  std::string kind;
  std::string detail;
};

struct SimSample
{
  int vehicle_id{0};
  double t_s{0.0};
  double p_m{0.0};
  double v_mps{0.0};
  double u_mps2{0.0};
  double margin_m{0.0};  // +inf when nobody is ahead
};

struct SimVehicle
{
  int id{0};
  std::string route_id;
  std::string lane;
  double offset_m{0.0};
  double length_m{0.0};
  double merge_position_m{0.0};  // route coordinate of the merge point, 0 on the mainline
  bool ramp{false};
  bool merge_committed{false};
  double entry_time_s{0.0};
  std::optional<double> exit_time_s;
  double v0_mps{0.0};
  VehicleState state;
  double accel_mps2{0.0};
  ScheduleAssignment schedule;
  std::shared_ptr<const Trajectory> plan;
  std::vector<double> zone_crossings_s;  // per route zone, filled as the vehicle passes

  bool active() const { return !exit_time_s.has_value(); }
  double corridor_position() const { return state.position_m + offset_m; }
};

struct PendingArrival
{
  double time_s{0.0};
  std::string route_id;
  double v0_mps{0.0};
};

struct SimState
{
  long step_index{0};
  double clock_s{0.0};
  std::vector<SimVehicle> vehicles;  // every vehicle that entered, in id order
  std::deque<PendingArrival> upcoming;
  std::map<std::string, std::deque<PendingArrival>> waiting;  // per entry lane
  std::vector<SimEvent> log;
  std::vector<SimSample> samples;
  std::optional<FifoScheduler> scheduler;

  bool finished() const;
};

/// Arrivals of the scenario: the explicit list plus seeded Poisson streams, time ordered.
std::vector<PendingArrival> generate_arrivals(const ScenarioSpec & scenario, std::uint64_t seed);

SimState initial_state(const SimConfig & config);

/// Advances the clock by one step: admits arrivals, plans new vehicles (optimal mode), records
/// samples at the current time, moves every vehicle and retires those past their route end.
/// Infeasible plans propagate as InfeasibleError.
void step(SimState & state, const SimConfig & config);

/// Steps until every vehicle has left or the horizon is reached.
SimState run_simulation(const SimConfig & config);

/// Leader windows seen by a vehicle planned now, built from the plans of earlier vehicles.
LeaderContext planning_leaders(
  const SimState & state, const SimConfig & config, const Route & route, double now_s);

/// One line per event, fixed formatting; identical runs give identical text.
std::string format_event_log(const std::vector<SimEvent> & log);

}  // namespace corridor

#endif  // CORRIDOR__SIM_HPP_
