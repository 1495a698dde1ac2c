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

#include "corridor/motion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "corridor/errors.hpp"

namespace corridor
{

ProfileMotion::ProfileMotion(LeaderProfile profile) : profile_(std::move(profile))
{
  if (profile_.segments.empty()) {
    throw ContractError("ProfileMotion: empty leader profile");
  }
}

double ProfileMotion::t_begin() const { return profile_.segments.front().t_start_s; }

double ProfileMotion::t_end() const { return profile_.exit_time_s; }

KinematicSample ProfileMotion::sample(double t_s) const
{
  const VehicleState s = leader_state_at(profile_, t_s);
  auto it = std::upper_bound(
    profile_.segments.begin(), profile_.segments.end(), t_s,
    [](double t, const LeaderSegment & seg) { return t < seg.t_start_s; });
  const LeaderSegment & seg = (it == profile_.segments.begin()) ? *it : *std::prev(it);
  return KinematicSample{s.position_m, s.speed_mps, seg.accel_mps2};
}

std::vector<double> ProfileMotion::breakpoints() const
{
  std::vector<double> out;
  for (std::size_t k = 1; k < profile_.segments.size(); ++k) {
    out.push_back(profile_.segments[k].t_start_s);
  }
  return out;
}

double LeaderWindow::present_from() const { return std::max(t_from_s, leader->t_begin()); }

double LeaderWindow::present_to() const { return std::min(t_to_s, leader->t_end()); }

LeaderContext::LeaderContext(std::vector<LeaderWindow> windows) : windows_(std::move(windows))
{
  for (std::size_t k = 0; k < windows_.size(); ++k) {
    if (!windows_[k].leader) {
      throw ContractError("LeaderContext: window without leader motion");
    }
    if (!(windows_[k].t_to_s > windows_[k].t_from_s)) {
      throw ContractError("LeaderContext: empty window");
    }
    if (k > 0 && windows_[k].t_from_s < windows_[k - 1].t_to_s) {
      throw ContractError("LeaderContext: overlapping windows");
    }
  }
}

LeaderContext LeaderContext::single(std::shared_ptr<const Motion> leader, double offset_m)
{
  LeaderWindow w;
  w.t_from_s = -std::numeric_limits<double>::infinity();
  w.t_to_s = std::numeric_limits<double>::infinity();
  w.leader = std::move(leader);
  w.offset_m = offset_m;
  return LeaderContext({w});
}

const LeaderWindow * LeaderContext::window_at(double t_s) const
{
  // last window starting at or before t
  auto it = std::upper_bound(
    windows_.begin(), windows_.end(), t_s,
    [](double t, const LeaderWindow & w) { return t < w.t_from_s; });
  if (it == windows_.begin()) {
    return nullptr;
  }
  const LeaderWindow & w = *std::prev(it);
  if (t_s < w.t_to_s) {
    return &w;
  }
  return nullptr;
}

std::optional<KinematicSample> LeaderContext::leader_at(double t_s) const
{
  const LeaderWindow * w = window_at(t_s);
  if (w == nullptr) {
    return std::nullopt;
  }
  if (t_s < w->present_from() || t_s > w->present_to()) {
    return std::nullopt;
  }
  KinematicSample s = w->leader->sample(t_s);
  s.p += w->offset_m;
  return s;
}

std::vector<double> LeaderContext::event_times(double t_a, double t_b) const
{
  std::vector<double> out;
  auto push = [&](double t) {
    if (std::isfinite(t) && t >= t_a && t <= t_b) {
      out.push_back(t);
    }
  };
  for (const auto & w : windows_) {
    if (w.t_to_s < t_a || w.t_from_s > t_b) {
      continue;
    }
    push(w.t_from_s);
    push(w.t_to_s);
    push(w.leader->t_begin());
    push(w.leader->t_end());
    for (double t : w.leader->breakpoints()) {
      if (t >= w.present_from() && t <= w.present_to()) {
        push(t);
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace corridor
