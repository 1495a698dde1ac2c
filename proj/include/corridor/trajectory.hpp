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

#ifndef CORRIDOR__TRAJECTORY_HPP_
#define CORRIDOR__TRAJECTORY_HPP_

#include <utility>
#include <variant>
#include <vector>

#include "corridor/arc.hpp"
#include "corridor/motion.hpp"

namespace corridor
{

/// Motion riding the rear-end constraint boundary behind one leader.
///
/// Speed obeys v' = (xi / rho) * (v_k - v), integrated with RK4 on a grid aligned with the
/// leader's breakpoints and interpolated with cubic Hermite splines. Position is recovered
/// from the active constraint, p = p_k - (gamma + rho * v) / xi, so the margin is zero
/// on the whole segment regardless of integration error.
class ConstrainedSegment
{
public:
  static ConstrainedSegment follow(
    const LeaderWindow & leader, const SafetyParams & safety, double t_start_s, double v_start_mps,
    double t_end_s, double max_step_s = 0.02);

  double t_start() const { return t_.front(); }
  double t_end() const { return t_.back(); }
  KinematicSample sample(double t_s) const;
  double cost() const { return cost_; }
  int leader_id() const { return leader_.leader_id; }
  const SafetyParams & safety() const { return safety_; }

private:
  ConstrainedSegment() = default;
  double speed_at(double t_s) const;

  LeaderWindow leader_;
  SafetyParams safety_;
  std::vector<double> t_;
  std::vector<double> v_;
  std::vector<double> a_;  // dv/dt at the nodes
  double cost_{0.0};
};

using Segment = std::variant<PolynomialArc, ConstrainedSegment>;

double segment_start(const Segment & s);
double segment_end(const Segment & s);
double segment_cost(const Segment & s);

/// Planned motion of one vehicle: unconstrained arcs and constrained segments,
/// contiguous in time with continuous position and speed.
class Trajectory final : public Motion
{
public:
  Trajectory() = default;
  explicit Trajectory(std::vector<Segment> segments);

  /// Appends a segment starting where the trajectory currently ends.
  void append(Segment segment);
  void append(const Trajectory & other);

  double t_begin() const override;
  double t_end() const override;
  KinematicSample sample(double t_s) const override;
  std::vector<double> breakpoints() const override;

  bool empty() const { return segments_.empty(); }
  const std::vector<Segment> & segments() const { return segments_; }
  double cost() const;
  /// (entry, exit) times of every constrained segment.
  std::vector<std::pair<double, double>> constrained_windows() const;
  /// Largest |jump| of p and v between consecutive segments.
  double max_junction_jump() const;

private:
  std::vector<Segment> segments_;
};

}  // namespace corridor

#endif  // CORRIDOR__TRAJECTORY_HPP_
