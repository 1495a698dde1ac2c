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

#ifndef CORRIDOR__MARGIN_HPP_
#define CORRIDOR__MARGIN_HPP_

#include <optional>
#include <vector>

#include "corridor/model.hpp"
#include "corridor/motion.hpp"

namespace corridor
{

/// xi * (p_k - p) - (gamma + rho * v): headway minus the speed-dependent safe distance.
double margin_value(
  const SafetyParams & params, const KinematicSample & follower, const KinematicSample & leader);

/// Time derivative of margin_value.
double margin_rate(
  const SafetyParams & params, const KinematicSample & follower, const KinematicSample & leader);

/// Margin of a follower at t; +infinity when nobody is ahead.
double margin_at(
  const Motion & follower, const LeaderContext & leaders, const SafetyParams & params, double t_s);

struct GapMargin
{
  std::vector<double> t_s;
  std::vector<double> margin_m;  // +inf where there is no leader
};

/// Margin sampled on a uniform grid spanning the follower's motion (end point included).
GapMargin gap_margin(
  const Motion & follower, const LeaderContext & leaders, const SafetyParams & params,
  double step_s);

struct MarginExtremum
{
  double t_s{0.0};
  double margin_m{0.0};
};

/// Smallest margin over [t_a, t_b]: sampled at `step_s`, at every event time, then refined by
/// golden-section search around the smallest sample.
MarginExtremum min_margin(
  const Motion & follower, const LeaderContext & leaders, const SafetyParams & params, double t_a,
  double t_b, double step_s = 0.02);

/// First time in [t_a, t_b] where the margin drops below -tol, located to ~1e-9 s.
std::optional<double> first_violation(
  const Motion & follower, const LeaderContext & leaders, const SafetyParams & params, double t_a,
  double t_b, double tol_m, double step_s = 0.01);

}  // namespace corridor

#endif  // CORRIDOR__MARGIN_HPP_
