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

#include "corridor/scheduler.hpp"

#include <algorithm>

#include "corridor/errors.hpp"

namespace corridor
{

FifoScheduler::FifoScheduler(CorridorSpec corridor, FifoSchedulerParams params)
: corridor_(std::move(corridor)), params_(std::move(params))
{
  if (!(params_.headway_s > 0.0)) {
    throw ContractError("scheduler headway must be positive");
  }
}

std::optional<double> FifoScheduler::desired_speed(int zone_id) const
{
  if (auto it = params_.desired_speeds_mps.find(zone_id); it != params_.desired_speeds_mps.end()) {
    return it->second;
  }
  const ConflictZone * z = corridor_.find_zone(zone_id);
  return z ? z->desired_speed_mps : std::nullopt;
}

ScheduleAssignment FifoScheduler::propose(
  const Route & route, const VehicleState & entry, double extra_delay_s) const
{
  if (route.zone_ids.empty()) {
    throw ContractError("route " + route.id + " has no zones");
  }
  if (!(entry.speed_mps > 0.0)) {
    throw ContractError("scheduler needs a positive entry speed");
  }
  ScheduleAssignment s;
  s.entry = entry;
  double t_prev = entry.time_s;
  double p_prev = entry.position_m;
  double v_prev = entry.speed_mps;
  for (std::size_t k = 0; k < route.zone_ids.size(); ++k) {
    const int zid = route.zone_ids[k];
    const double p = zone_position_on_route(route, corridor_, zid);
    const auto vd = desired_speed(zid);
    const double v_target =
      vd.value_or(params_.cruise_speed_mps > 0.0 ? params_.cruise_speed_mps : v_prev);
    double t = t_prev + (p - p_prev) / (0.5 * (v_prev + v_target));
    if (k == 0) {
      t += extra_delay_s;
    }
    if (auto it = last_booked_.find(zid); it != last_booked_.end()) {
      t = std::max(t, it->second + params_.headway_s);
    }
    Waypoint w{zid, t, p, vd};
    if (k + 1 == route.zone_ids.size()) {
      s.terminal = w;
    } else {
      s.waypoints.push_back(w);
    }
    t_prev = t;
    p_prev = p;
    v_prev = v_target;
  }
  return s;
}

void FifoScheduler::commit(const Route & route, const ScheduleAssignment & schedule)
{
  if (schedule.waypoints.size() + 1 != route.zone_ids.size()) {
    throw ContractError("schedule does not match route " + route.id);
  }
  auto book = [this](const Waypoint & w) {
    auto [it, fresh] = last_booked_.emplace(w.zone_id, w.time_s);
    if (!fresh) {
      it->second = std::max(it->second, w.time_s);
    }
  };
  for (const auto & w : schedule.waypoints) {
    book(w);
  }
  book(schedule.terminal);
}

ScheduleAssignment FifoScheduler::assign(const Route & route, const VehicleState & entry)
{
  ScheduleAssignment s = propose(route, entry);
  commit(route, s);
  return s;
}

}  // namespace corridor
