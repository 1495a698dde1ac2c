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

#include "corridor/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "corridor/errors.hpp"

namespace corridor
{
namespace
{
constexpr double kJoinTol = 1e-9;

double time_tol(double t) { return 1e-9 * std::max(1.0, std::abs(t)); }

}  // namespace

ConstrainedSegment ConstrainedSegment::follow(
  const LeaderWindow & leader, const SafetyParams & safety, double t_start_s, double v_start_mps,
  double t_end_s, double max_step_s)
{
  if (!(safety.rho_s > 0.0)) {
    throw std::domain_error("constrained segment needs a positive time gap");
  }
  if (!leader.leader) {
    throw ContractError("constrained segment needs a leader");
  }
  if (t_end_s < t_start_s) {
    throw ContractError("constrained segment ends before it starts");
  }
  if (
    t_start_s < leader.present_from() - time_tol(t_start_s) ||
    t_end_s > leader.present_to() + time_tol(t_end_s)) {
    throw ContractError("constrained segment extends beyond the leader's presence");
  }

  ConstrainedSegment seg;
  seg.leader_ = leader;
  seg.safety_ = safety;
  const double kappa = safety.xi / safety.rho_s;
  auto leader_speed = [&](double t) {
    t = std::clamp(t, leader.present_from(), leader.present_to());
    return leader.leader->sample(t).v;
  };

  seg.t_.push_back(t_start_s);
  seg.v_.push_back(v_start_mps);
  if (t_end_s - t_start_s > 1e-12) {
    std::vector<double> knots{t_start_s};
    for (double b : leader.leader->breakpoints()) {
      if (b > t_start_s + 1e-12 && b < t_end_s - 1e-12) {
        knots.push_back(b);
      }
    }
    knots.push_back(t_end_s);
    double v = v_start_mps;
    for (std::size_t k = 1; k < knots.size(); ++k) {
      const double a = knots[k - 1];
      const double b = knots[k];
      const int n = std::max(1, static_cast<int>(std::ceil((b - a) / max_step_s)));
      const double h = (b - a) / n;
      // evaluate the leader just inside the piece so RK4 never sees the kink
      for (int j = 0; j < n; ++j) {
        const double t = a + j * h;
        auto f = [&](double tt, double vv) {
          tt = std::clamp(tt, a, b);
          return kappa * (leader_speed(tt) - vv);
        };
        const double k1 = f(t, v);
        const double k2 = f(t + 0.5 * h, v + 0.5 * h * k1);
        const double k3 = f(t + 0.5 * h, v + 0.5 * h * k2);
        const double k4 = f(t + h, v + h * k3);
        v += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        seg.t_.push_back(j + 1 == n ? b : a + (j + 1) * h);
        seg.v_.push_back(v);
      }
    }
  }
  seg.a_.resize(seg.t_.size());
  for (std::size_t k = 0; k < seg.t_.size(); ++k) {
    seg.a_[k] = kappa * (leader_speed(seg.t_[k]) - seg.v_[k]);
  }
  double cost = 0.0;
  for (std::size_t k = 1; k < seg.t_.size(); ++k) {
    const double a = seg.t_[k - 1];
    const double b = seg.t_[k];
    const double m = 0.5 * (a + b);
    const double um = kappa * (leader_speed(m) - seg.speed_at(m));
    cost += (b - a) / 6.0 * (seg.a_[k - 1] * seg.a_[k - 1] + 4.0 * um * um + seg.a_[k] * seg.a_[k]);
  }
  seg.cost_ = 0.5 * cost;
  return seg;
}

double ConstrainedSegment::speed_at(double t_s) const
{
  if (t_.size() == 1) {
    return v_.front();
  }
  auto it = std::upper_bound(t_.begin(), t_.end(), t_s);
  std::size_t k = static_cast<std::size_t>(std::distance(t_.begin(), it));
  k = std::clamp<std::size_t>(k, 1, t_.size() - 1);
  const double h = t_[k] - t_[k - 1];
  const double s = std::clamp((t_s - t_[k - 1]) / h, 0.0, 1.0);
  const double s2 = s * s;
  const double s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * v_[k - 1] + (s3 - 2 * s2 + s) * h * a_[k - 1] +
         (-2 * s3 + 3 * s2) * v_[k] + (s3 - s2) * h * a_[k];
}

KinematicSample ConstrainedSegment::sample(double t_s) const
{
  if (t_s < t_start() - time_tol(t_s) || t_s > t_end() + time_tol(t_s)) {
    throw QueryError("constrained segment queried outside its span");
  }
  const double t = std::clamp(t_s, leader_.present_from(), leader_.present_to());
  const KinematicSample lead = leader_.leader->sample(t);
  const double v = speed_at(t_s);
  const double kappa = safety_.xi / safety_.rho_s;
  return KinematicSample{
    lead.p + leader_.offset_m - (safety_.gamma_m + safety_.rho_s * v) / safety_.xi, v,
    kappa * (lead.v - v)};
}

double segment_start(const Segment & s)
{
  return std::visit(
    [](const auto & seg) -> double {
      if constexpr (std::is_same_v<std::decay_t<decltype(seg)>, PolynomialArc>) {
        return seg.t_start_s;
      } else {
        return seg.t_start();
      }
    },
    s);
}

double segment_end(const Segment & s)
{
  return std::visit(
    [](const auto & seg) -> double {
      if constexpr (std::is_same_v<std::decay_t<decltype(seg)>, PolynomialArc>) {
        return seg.t_end_s;
      } else {
        return seg.t_end();
      }
    },
    s);
}

double segment_cost(const Segment & s)
{
  return std::visit(
    [](const auto & seg) -> double {
      if constexpr (std::is_same_v<std::decay_t<decltype(seg)>, PolynomialArc>) {
        return arc_cost(seg);
      } else {
        return seg.cost();
      }
    },
    s);
}

namespace
{
KinematicSample segment_sample(const Segment & s, double t)
{
  return std::visit(
    [t](const auto & seg) -> KinematicSample {
      if constexpr (std::is_same_v<std::decay_t<decltype(seg)>, PolynomialArc>) {
        return seg.at(t);
      } else {
        return seg.sample(t);
      }
    },
    s);
}
}  // namespace

Trajectory::Trajectory(std::vector<Segment> segments)
{
  for (auto & s : segments) {
    append(std::move(s));
  }
}

void Trajectory::append(Segment segment)
{
  if (!segments_.empty()) {
    const double prev_end = segment_end(segments_.back());
    const double start = segment_start(segment);
    if (std::abs(prev_end - start) > kJoinTol * std::max(1.0, std::abs(start))) {
      throw ContractError("trajectory segments are not contiguous in time");
    }
  }
  segments_.push_back(std::move(segment));
}

void Trajectory::append(const Trajectory & other)
{
  for (const auto & s : other.segments()) {
    append(s);
  }
}

double Trajectory::t_begin() const
{
  if (segments_.empty()) {
    throw QueryError("empty trajectory");
  }
  return segment_start(segments_.front());
}

double Trajectory::t_end() const
{
  if (segments_.empty()) {
    throw QueryError("empty trajectory");
  }
  return segment_end(segments_.back());
}

KinematicSample Trajectory::sample(double t_s) const
{
  const double t0 = t_begin();
  const double t1 = t_end();
  if (t_s < t0 - time_tol(t_s) || t_s > t1 + time_tol(t_s)) {
    throw QueryError("trajectory queried at " + std::to_string(t_s) + " outside its span");
  }
  auto it = std::upper_bound(
    segments_.begin(), segments_.end(), t_s,
    [](double t, const Segment & s) { return t < segment_start(s); });
  const Segment & seg = (it == segments_.begin()) ? segments_.front() : *std::prev(it);
  return segment_sample(seg, t_s);
}

std::vector<double> Trajectory::breakpoints() const
{
  std::vector<double> out;
  for (std::size_t k = 1; k < segments_.size(); ++k) {
    out.push_back(segment_start(segments_[k]));
  }
  return out;
}

double Trajectory::cost() const
{
  double total = 0.0;
  for (const auto & s : segments_) {
    total += segment_cost(s);
  }
  return total;
}

std::vector<std::pair<double, double>> Trajectory::constrained_windows() const
{
  std::vector<std::pair<double, double>> out;
  for (const auto & s : segments_) {
    if (const auto * c = std::get_if<ConstrainedSegment>(&s)) {
      out.emplace_back(c->t_start(), c->t_end());
    }
  }
  return out;
}

double Trajectory::max_junction_jump() const
{
  double worst = 0.0;
  for (std::size_t k = 1; k < segments_.size(); ++k) {
    const double t = segment_start(segments_[k]);
    const KinematicSample left = segment_sample(segments_[k - 1], t);
    const KinematicSample right = segment_sample(segments_[k], t);
    worst = std::max({worst, std::abs(left.p - right.p), std::abs(left.v - right.v)});
  }
  return worst;
}

}  // namespace corridor
