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

#ifndef CORRIDOR__MOTION_HPP_
#define CORRIDOR__MOTION_HPP_

#include <memory>
#include <optional>
#include <vector>

#include "corridor/model.hpp"

namespace corridor
{

struct KinematicSample
{
  double p{0.0};  // m
  double v{0.0};  // m/s
  double u{0.0};  // m/s^2
};

/// Longitudinal motion defined on a closed time span.
class Motion
{
public:
  virtual ~Motion() = default;

  virtual double t_begin() const = 0;
  virtual double t_end() const = 0;
  /// Throws QueryError outside [t_begin, t_end].
  virtual KinematicSample sample(double t_s) const = 0;
  /// Interior times where the control may be discontinuous.
  virtual std::vector<double> breakpoints() const = 0;
};

class ProfileMotion final : public Motion
{
public:
  explicit ProfileMotion(LeaderProfile profile);

  double t_begin() const override;
  double t_end() const override;
  KinematicSample sample(double t_s) const override;
  std::vector<double> breakpoints() const override;

  const LeaderProfile & profile() const { return profile_; }

private:
  LeaderProfile profile_;
};

/// The vehicle directly ahead during [t_from_s, t_to_s). Leader positions are shifted by
/// `offset_m` into the follower's route coordinate.
struct LeaderWindow
{
  double t_from_s{0.0};
  double t_to_s{0.0};
  std::shared_ptr<const Motion> leader;
  double offset_m{0.0};
  int leader_id{0};

  /// Closed interval over which the leader is actually present.
  double present_from() const;
  double present_to() const;
};

/// Sequence of leaders seen by one follower; no leader outside the windows.
class LeaderContext
{
public:
  LeaderContext() = default;
  explicit LeaderContext(std::vector<LeaderWindow> windows);

  /// A single leader for all time, e.g. the scripted leader of a golden case.
  static LeaderContext single(std::shared_ptr<const Motion> leader, double offset_m = 0.0);

  const std::vector<LeaderWindow> & windows() const { return windows_; }
  bool empty() const { return windows_.empty(); }

  const LeaderWindow * window_at(double t_s) const;
  /// Leader state in follower coordinates, or nullopt when nobody is ahead.
  std::optional<KinematicSample> leader_at(double t_s) const;
  /// Times where the margin or its derivative may jump within [t_a, t_b].
  std::vector<double> event_times(double t_a, double t_b) const;

private:
  std::vector<LeaderWindow> windows_;
};

}  // namespace corridor

#endif  // CORRIDOR__MOTION_HPP_
