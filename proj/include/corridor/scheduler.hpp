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

#ifndef CORRIDOR__SCHEDULER_HPP_
#define CORRIDOR__SCHEDULER_HPP_

#include <map>

#include "corridor/model.hpp"

namespace corridor
{

struct FifoSchedulerParams
{
  double headway_s{2.5};
  /// Travel speed towards zones without a desired speed; 0 keeps the previous zone's speed.
  double cruise_speed_mps{0.0};
  /// Overrides of the corridor's per-zone desired speeds.
  std::map<int, double> desired_speeds_mps;
};

/// First-come first-served crossing times: every zone is booked in arrival order, no earlier
/// than the vehicle can reach it and at least one headway after the previous booking.
class FifoScheduler
{
public:
  FifoScheduler(CorridorSpec corridor, FifoSchedulerParams params);

  /// Tentative schedule for a vehicle entering `route` at `entry` (route coordinates). Every
  /// crossing is pushed back by at least `extra_delay_s`. Nothing is booked.
  ScheduleAssignment propose(
    const Route & route, const VehicleState & entry, double extra_delay_s = 0.0) const;

  /// Books the crossings of a schedule produced by propose() for the same route.
  void commit(const Route & route, const ScheduleAssignment & schedule);

  ScheduleAssignment assign(const Route & route, const VehicleState & entry);

  /// Last booked crossing per zone.
  const std::map<int, double> & bookings() const { return last_booked_; }
  const FifoSchedulerParams & params() const { return params_; }
  std::optional<double> desired_speed(int zone_id) const;

private:
  CorridorSpec corridor_;
  FifoSchedulerParams params_;
  std::map<int, double> last_booked_;
};

}  // namespace corridor

#endif  // CORRIDOR__SCHEDULER_HPP_
