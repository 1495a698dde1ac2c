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

#ifndef CORRIDOR__ARC_HPP_
#define CORRIDOR__ARC_HPP_

#include <array>
#include <optional>

#include "corridor/motion.hpp"

namespace corridor
{

/// Unconstrained energy-optimal arc: linear control, quadratic speed, cubic position.
///
/// Coefficients are expressed in the arc-local time tau = t - t_start_s:
///   u = alpha * tau + c
///   v = alpha * tau^2 / 2 + c * tau + d
///   p = alpha * tau^3 / 6 + c * tau^2 / 2 + d * tau + e
/// For arcs starting at t = 0 these are the usual absolute-time coefficients.
struct PolynomialArc
{
  double t_start_s{0.0};
  double t_end_s{0.0};
  double alpha{0.0};  // m/s^3, jerk
  double c{0.0};      // m/s^2
  double d{0.0};      // m/s
  double e{0.0};      // m

  double duration() const { return t_end_s - t_start_s; }
  /// No domain check; see eval_arc.
  KinematicSample at(double t_s) const;
};

enum class TerminalKind {
  kFreeSpeed,              // transversality: u(t_f) = 0
  kPinnedSpeed,            // v(t_f) = v_f
  kPinnedSpeedAndControl,  // v(t_f) = v_f and u(t_f) = u_f
};

struct BoundarySpec
{
  double t0_s{0.0};
  double p0_m{0.0};
  std::optional<double> v0_mps;
  double tf_s{0.0};
  double pf_m{0.0};
  TerminalKind kind{TerminalKind::kFreeSpeed};
  std::optional<double> vf_mps;
  std::optional<double> uf_mps2;
};

/// Rows of the arc's state as linear functions of (alpha, c, d, e) at local time tau.
std::array<double, 4> position_row(double tau);
std::array<double, 4> speed_row(double tau);
std::array<double, 4> control_row(double tau);

/// Arc meeting p(t0), v(t0), p(tf) with u(tf) = 0.
PolynomialArc solve_free_arc(const BoundarySpec & bc);

/// Arc meeting exactly four imposed values out of p0, v0, pf, vf, uf.
PolynomialArc solve_pinned_arc(const BoundarySpec & bc);

/// Throws std::domain_error when t lies outside the arc.
KinematicSample eval_arc(const PolynomialArc & arc, double t_s);

/// 0.5 * integral of u^2 over the arc, in closed form.
double arc_cost(const PolynomialArc & arc);

}  // namespace corridor

#endif  // CORRIDOR__ARC_HPP_
