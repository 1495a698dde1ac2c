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

#ifndef CORRIDOR__MODEL_HPP_
#define CORRIDOR__MODEL_HPP_

#include <optional>
#include <string>
#include <vector>

namespace corridor
{

struct ConflictZone
{
  int id{0};
  std::string name;
  double position_m{0.0};
  // speed every vehicle is pinned to when it enters the zone
  std::optional<double> desired_speed_mps;
};

struct CorridorSpec
{
  double length_m{0.0};
  std::vector<ConflictZone> zones;
  double entry_position_m{0.0};

  const ConflictZone * find_zone(int zone_id) const;
};

struct VehicleParams
{
  double u_min_mps2{-3.0};
  double u_max_mps2{2.5};
  double v_min_mps{0.0};
  double v_max_mps{30.0};
};

struct SafetyParams
{
  double xi{1.0};       // reaction constant, multiplies the raw headway
  double gamma_m{3.0};  // standstill distance
  double rho_s{1.2};    // minimum time gap
};

struct VehicleState
{
  double position_m{0.0};
  double speed_mps{0.0};
  double time_s{0.0};
};

/// Scheduled crossing of one conflict zone, in route coordinates.
struct Waypoint
{
  int zone_id{-1};
  double time_s{0.0};
  double position_m{0.0};
  std::optional<double> speed_mps;
};

/// Entry state plus the crossing times handed down by the scheduler.
/// The terminal waypoint is the last conflict zone of the route.
struct ScheduleAssignment
{
  VehicleState entry;
  std::vector<Waypoint> waypoints;
  Waypoint terminal;

  /// entry, waypoint and terminal times in order
  std::vector<double> knot_times() const;
};

/// Piecewise constant-acceleration motion of a lead vehicle.
struct LeaderSegment
{
  double t_start_s{0.0};
  double p_start_m{0.0};
  double v_start_mps{0.0};
  double accel_mps2{0.0};
};

struct LeaderProfile
{
  std::vector<LeaderSegment> segments;
  double exit_time_s{0.0};

  /// Builds a continuous profile from an initial state and (duration, acceleration) phases.
  /// The last phase is extended up to `exit_time_s`.
  static LeaderProfile from_phases(
    const VehicleState & initial, const std::vector<std::pair<double, double>> & phases,
    double exit_time_s);

  double t_begin() const { return segments.empty() ? 0.0 : segments.front().t_start_s; }
};

/// A path through the corridor. Mainline routes start at the corridor entry; ramp routes
/// travel `approach_length_m` on their own lane and join the main lane at `merge_zone_id`,
/// which must be the first zone of the route.
struct Route
{
  std::string id;
  std::vector<int> zone_ids;
  std::optional<int> merge_zone_id;
  double approach_length_m{0.0};

  std::string entry_lane() const;
};

/// Corridor coordinate of route position p is p + route_offset().
double route_offset(const Route & route, const CorridorSpec & corridor);
double zone_position_on_route(const Route & route, const CorridorSpec & corridor, int zone_id);
double route_length(const Route & route, const CorridorSpec & corridor);

/// Ego vehicle with a fixed schedule and (optionally) a scripted leader.
struct PlannedVehicle
{
  int id{1};
  std::string route_id;
  ScheduleAssignment schedule;
  std::optional<LeaderProfile> leader;
  VehicleParams vehicle;
  SafetyParams safety;
};

struct ArrivalSpec
{
  double time_s{0.0};
  std::string route_id;
  double v0_mps{0.0};
};

/// Seeded Poisson arrivals on one route.
struct ArrivalStream
{
  std::string route_id;
  double rate_vph{0.0};
  double v0_mps{0.0};
  double v0_jitter_mps{0.0};
  int count{0};
  double start_s{0.0};
};

struct SolverTolerances
{
  double residual{1e-9};
  double margin_m{1e-6};
  double junction_s{1e-6};
  int oracle_steps{1000};
};

struct ScenarioSpec
{
  std::string id;
  CorridorSpec corridor;
  std::vector<Route> routes;
  VehicleParams vehicle;
  SafetyParams safety;
  std::vector<PlannedVehicle> planned;
  std::vector<ArrivalSpec> arrivals;
  std::vector<ArrivalStream> streams;
  SolverTolerances tolerances;

  const Route * find_route(const std::string & route_id) const;
};

enum class ViolationKind {
  kCorridorLength,
  kZoneOrder,
  kZoneOutOfRange,
  kDesiredSpeed,
  kDuplicateZoneId,
  kControlBounds,
  kSpeedBounds,
  kReactionConstant,
  kStandstillDistance,
  kTimeGap,
  kUnknownRoute,
  kRouteZones,
  kScheduleTimes,
  kSchedulePositions,
  kScheduleTerminal,
  kWaypointNotOnRoute,
  kLeaderProfile,
  kArrival,
};

const char * to_string(ViolationKind kind);

struct Violation
{
  ViolationKind kind;
  std::string field;
  std::string message;
};

/// Checks every type invariant of the scenario; empty result means valid.
std::vector<Violation> validate_scenario(const ScenarioSpec & spec);

/// Exact constant-acceleration kinematics; throws QueryError outside [t_begin, exit_time].
VehicleState leader_state_at(const LeaderProfile & profile, double t_s);

/// gamma + rho * v; throws std::domain_error for v < 0.
double min_safe_distance(const SafetyParams & params, double speed_mps);

}  // namespace corridor

#endif  // CORRIDOR__MODEL_HPP_
