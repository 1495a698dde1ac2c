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

#include "corridor/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "corridor/errors.hpp"

namespace corridor
{
namespace
{
constexpr double kTimeEps = 1e-9;
constexpr double kContinuityTol = 1e-9;

void add(
  std::vector<Violation> & out, ViolationKind kind, std::string field, std::string message)
{
  out.push_back(Violation{kind, std::move(field), std::move(message)});
}

void check_vehicle_params(
  const VehicleParams & p, const std::string & field, std::vector<Violation> & out)
{
  if (!(p.u_min_mps2 < 0.0 && 0.0 < p.u_max_mps2)) {
    add(out, ViolationKind::kControlBounds, field, "control bounds must satisfy u_min < 0 < u_max");
  }
  if (!(0.0 <= p.v_min_mps && p.v_min_mps < p.v_max_mps)) {
    add(out, ViolationKind::kSpeedBounds, field, "speed bounds must satisfy 0 <= v_min < v_max");
  }
}

void check_safety_params(
  const SafetyParams & p, const std::string & field, std::vector<Violation> & out)
{
  if (!(p.xi > 0.0)) {
    add(out, ViolationKind::kReactionConstant, field + ".xi", "nonpositive reaction constant");
  }
  if (!(p.gamma_m >= 0.0)) {
    add(out, ViolationKind::kStandstillDistance, field + ".gamma_m", "negative standstill distance");
  }
  if (!(p.rho_s > 0.0)) {
    add(out, ViolationKind::kTimeGap, field + ".rho_s", "nonpositive time gap");
  }
}

void check_leader(const LeaderProfile & leader, const std::string & field, std::vector<Violation> & out)
{
  if (leader.segments.empty()) {
    add(out, ViolationKind::kLeaderProfile, field, "leader profile has no segments");
    return;
  }
  for (std::size_t k = 1; k < leader.segments.size(); ++k) {
    const auto & prev = leader.segments[k - 1];
    const auto & cur = leader.segments[k];
    const double dt = cur.t_start_s - prev.t_start_s;
    if (!(dt > 0.0)) {
      add(out, ViolationKind::kLeaderProfile, field, "leader segments not increasing in time");
      return;
    }
    const double p = prev.p_start_m + prev.v_start_mps * dt + 0.5 * prev.accel_mps2 * dt * dt;
    const double v = prev.v_start_mps + prev.accel_mps2 * dt;
    if (
      std::abs(p - cur.p_start_m) > kContinuityTol * std::max(1.0, std::abs(p)) ||
      std::abs(v - cur.v_start_mps) > kContinuityTol * std::max(1.0, std::abs(v))) {
      add(out, ViolationKind::kLeaderProfile, field, "leader profile discontinuous at segment "
        + std::to_string(k));
    }
  }
  if (leader.exit_time_s < leader.segments.back().t_start_s) {
    add(out, ViolationKind::kLeaderProfile, field, "leader exits before its last segment starts");
  }
}

void check_schedule(
  const ScheduleAssignment & s, const Route & route, const CorridorSpec & corridor,
  const std::string & field, std::vector<Violation> & out)
{
  const auto times = s.knot_times();
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (!(times[k] > times[k - 1])) {
      add(out, ViolationKind::kScheduleTimes, field, "schedule times not strictly increasing");
      break;
    }
  }
  double prev = s.entry.position_m;
  auto check_pos = [&](const Waypoint & w, const std::string & where) {
    if (!(w.position_m > prev)) {
      add(out, ViolationKind::kSchedulePositions, field + where, "schedule positions not strictly increasing");
    }
    prev = w.position_m;
    const auto it = std::find(route.zone_ids.begin(), route.zone_ids.end(), w.zone_id);
    if (it == route.zone_ids.end() || corridor.find_zone(w.zone_id) == nullptr) {
      add(out, ViolationKind::kWaypointNotOnRoute, field + where,
        "zone " + std::to_string(w.zone_id) + " is not on route " + route.id);
      return;
    }
    const double expected = zone_position_on_route(route, corridor, w.zone_id);
    if (std::abs(expected - w.position_m) > 1e-9 * std::max(1.0, expected)) {
      add(out, ViolationKind::kWaypointNotOnRoute, field + where,
        "waypoint position does not match zone " + std::to_string(w.zone_id));
    }
  };
  for (std::size_t k = 0; k < s.waypoints.size(); ++k) {
    check_pos(s.waypoints[k], ".waypoints[" + std::to_string(k) + "]");
  }
  check_pos(s.terminal, ".terminal");
  if (!route.zone_ids.empty()) {
    const double length = route_length(route, corridor);
    if (std::abs(s.terminal.position_m - length) > 1e-9 * std::max(1.0, length)) {
      add(out, ViolationKind::kScheduleTerminal, field + ".terminal",
        "terminal position must equal the route length");
    }
  }
}

}  // namespace

const ConflictZone * CorridorSpec::find_zone(int zone_id) const
{
  for (const auto & z : zones) {
    if (z.id == zone_id) {
      return &z;
    }
  }
  return nullptr;
}

std::vector<double> ScheduleAssignment::knot_times() const
{
  std::vector<double> t;
  t.reserve(waypoints.size() + 2);
  t.push_back(entry.time_s);
  for (const auto & w : waypoints) {
    t.push_back(w.time_s);
  }
  t.push_back(terminal.time_s);
  return t;
}

LeaderProfile LeaderProfile::from_phases(
  const VehicleState & initial, const std::vector<std::pair<double, double>> & phases,
  double exit_time_s)
{
  LeaderProfile out;
  out.exit_time_s = exit_time_s;
  double t = initial.time_s;
  double p = initial.position_m;
  double v = initial.speed_mps;
  for (const auto & [duration, accel] : phases) {
    out.segments.push_back(LeaderSegment{t, p, v, accel});
    p += v * duration + 0.5 * accel * duration * duration;
    v += accel * duration;
    t += duration;
  }
  if (out.segments.empty()) {
    out.segments.push_back(LeaderSegment{t, p, v, 0.0});
  }
  return out;
}

std::string Route::entry_lane() const
{
  if (merge_zone_id) {
    return "ramp:" + std::to_string(*merge_zone_id) + ":" + std::to_string(approach_length_m);
  }
  return "main";
}

double route_offset(const Route & route, const CorridorSpec & corridor)
{
  if (!route.merge_zone_id) {
    return corridor.entry_position_m;
  }
  const ConflictZone * z = corridor.find_zone(*route.merge_zone_id);
  if (z == nullptr) {
    throw ContractError("route " + route.id + " merges at an unknown zone");
  }
  return z->position_m - route.approach_length_m;
}

double zone_position_on_route(const Route & route, const CorridorSpec & corridor, int zone_id)
{
  const ConflictZone * z = corridor.find_zone(zone_id);
  if (z == nullptr) {
    throw ContractError("unknown zone " + std::to_string(zone_id));
  }
  return z->position_m - route_offset(route, corridor);
}

double route_length(const Route & route, const CorridorSpec & corridor)
{
  if (route.zone_ids.empty()) {
    throw ContractError("route " + route.id + " has no zones");
  }
  return zone_position_on_route(route, corridor, route.zone_ids.back());
}

const Route * ScenarioSpec::find_route(const std::string & route_id) const
{
  for (const auto & r : routes) {
    if (r.id == route_id) {
      return &r;
    }
  }
  return nullptr;
}

const char * to_string(ViolationKind kind)
{
  switch (kind) {
    case ViolationKind::kCorridorLength:
      return "nonpositive corridor length";
    case ViolationKind::kZoneOrder:
      return "non-increasing zone positions";
    case ViolationKind::kZoneOutOfRange:
      return "zone outside corridor";
    case ViolationKind::kDesiredSpeed:
      return "nonpositive desired speed";
    case ViolationKind::kDuplicateZoneId:
      return "duplicate zone id";
    case ViolationKind::kControlBounds:
      return "invalid control bounds";
    case ViolationKind::kSpeedBounds:
      return "invalid speed bounds";
    case ViolationKind::kReactionConstant:
      return "nonpositive reaction constant";
    case ViolationKind::kStandstillDistance:
      return "negative standstill distance";
    case ViolationKind::kTimeGap:
      return "nonpositive time gap";
    case ViolationKind::kUnknownRoute:
      return "unknown route";
    case ViolationKind::kRouteZones:
      return "invalid route zones";
    case ViolationKind::kScheduleTimes:
      return "non-increasing schedule times";
    case ViolationKind::kSchedulePositions:
      return "non-increasing schedule positions";
    case ViolationKind::kScheduleTerminal:
      return "terminal not at route end";
    case ViolationKind::kWaypointNotOnRoute:
      return "waypoint not on route";
    case ViolationKind::kLeaderProfile:
      return "invalid leader profile";
    case ViolationKind::kArrival:
      return "invalid arrival";
  }
  return "unknown";
}

std::vector<Violation> validate_scenario(const ScenarioSpec & spec)
{
  std::vector<Violation> out;
  const auto & corridor = spec.corridor;
  if (!(corridor.length_m > 0.0)) {
    add(out, ViolationKind::kCorridorLength, "corridor.length_m", "corridor length must be positive");
  }
  std::set<int> ids;
  for (std::size_t k = 0; k < corridor.zones.size(); ++k) {
    const auto & z = corridor.zones[k];
    const std::string field = "corridor.zones[" + std::to_string(k) + "]";
    if (!ids.insert(z.id).second) {
      add(out, ViolationKind::kDuplicateZoneId, field + ".id", "duplicate zone id");
    }
    if (k > 0 && !(z.position_m > corridor.zones[k - 1].position_m)) {
      add(out, ViolationKind::kZoneOrder, field + ".position_m", "zone positions not strictly increasing");
    }
    if (!(z.position_m > corridor.entry_position_m && z.position_m <= corridor.length_m)) {
      add(out, ViolationKind::kZoneOutOfRange, field + ".position_m", "zone must lie in (entry, length]");
    }
    if (z.desired_speed_mps && !(*z.desired_speed_mps > 0.0)) {
      add(out, ViolationKind::kDesiredSpeed, field + ".desired_speed_mps", "desired speed must be positive");
    }
  }
  check_vehicle_params(spec.vehicle, "vehicle", out);
  check_safety_params(spec.safety, "safety", out);

  bool routes_ok = true;
  for (std::size_t k = 0; k < spec.routes.size(); ++k) {
    const auto & r = spec.routes[k];
    const std::string field = "routes[" + std::to_string(k) + "]";
    if (r.zone_ids.empty()) {
      add(out, ViolationKind::kRouteZones, field, "route has no zones");
      routes_ok = false;
      continue;
    }
    double prev = -1.0e300;
    for (int zid : r.zone_ids) {
      const ConflictZone * z = corridor.find_zone(zid);
      if (z == nullptr) {
        add(out, ViolationKind::kRouteZones, field, "unknown zone " + std::to_string(zid));
        routes_ok = false;
        continue;
      }
      if (!(z->position_m > prev)) {
        add(out, ViolationKind::kRouteZones, field, "route zones not in corridor order");
      }
      prev = z->position_m;
    }
    if (r.merge_zone_id) {
      if (r.zone_ids.front() != *r.merge_zone_id || corridor.find_zone(*r.merge_zone_id) == nullptr) {
        add(out, ViolationKind::kRouteZones, field, "merge zone must be the first zone of the route");
        routes_ok = false;
      }
      if (!(r.approach_length_m > 0.0)) {
        add(out, ViolationKind::kRouteZones, field, "approach length must be positive");
        routes_ok = false;
      }
    }
  }

  for (std::size_t k = 0; k < spec.planned.size(); ++k) {
    const auto & pv = spec.planned[k];
    const std::string field = "planned_vehicles[" + std::to_string(k) + "]";
    check_vehicle_params(pv.vehicle, field + ".params", out);
    check_safety_params(pv.safety, field + ".safety", out);
    const Route * route = spec.find_route(pv.route_id);
    if (route == nullptr) {
      add(out, ViolationKind::kUnknownRoute, field + ".route", "unknown route " + pv.route_id);
    } else if (routes_ok) {
      check_schedule(pv.schedule, *route, corridor, field + ".schedule", out);
    }
    if (pv.leader) {
      check_leader(*pv.leader, field + ".leader", out);
    }
  }
  for (std::size_t k = 0; k < spec.arrivals.size(); ++k) {
    const auto & a = spec.arrivals[k];
    const std::string field = "arrivals[" + std::to_string(k) + "]";
    if (spec.find_route(a.route_id) == nullptr) {
      add(out, ViolationKind::kUnknownRoute, field + ".route", "unknown route " + a.route_id);
    }
    if (!(a.time_s >= 0.0) || !(a.v0_mps > 0.0)) {
      add(out, ViolationKind::kArrival, field, "arrival needs time >= 0 and positive speed");
    }
  }
  for (std::size_t k = 0; k < spec.streams.size(); ++k) {
    const auto & s = spec.streams[k];
    const std::string field = "streams[" + std::to_string(k) + "]";
    if (spec.find_route(s.route_id) == nullptr) {
      add(out, ViolationKind::kUnknownRoute, field + ".route", "unknown route " + s.route_id);
    }
    if (!(s.rate_vph > 0.0) || s.count < 0 || !(s.v0_mps > s.v0_jitter_mps) || s.v0_jitter_mps < 0.0) {
      add(out, ViolationKind::kArrival, field, "stream needs positive rate and speed, count >= 0");
    }
  }
  return out;
}

VehicleState leader_state_at(const LeaderProfile & profile, double t_s)
{
  if (profile.segments.empty()) {
    throw QueryError("empty leader profile");
  }
  if (t_s < profile.segments.front().t_start_s - kTimeEps || t_s > profile.exit_time_s + kTimeEps) {
    throw QueryError("time " + std::to_string(t_s) + " outside leader profile span");
  }
  auto it = std::upper_bound(
    profile.segments.begin(), profile.segments.end(), t_s,
    [](double t, const LeaderSegment & s) { return t < s.t_start_s; });
  const LeaderSegment & seg = (it == profile.segments.begin()) ? *it : *std::prev(it);
  const double dt = t_s - seg.t_start_s;
  return VehicleState{
    seg.p_start_m + seg.v_start_mps * dt + 0.5 * seg.accel_mps2 * dt * dt,
    seg.v_start_mps + seg.accel_mps2 * dt, t_s};
}

double min_safe_distance(const SafetyParams & params, double speed_mps)
{
  if (speed_mps < 0.0) {
    throw std::domain_error("min_safe_distance: negative speed");
  }
  return params.gamma_m + params.rho_s * speed_mps;
}

}  // namespace corridor
