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

#include "corridor/margin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "corridor/errors.hpp"

namespace corridor
{
namespace
{
constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> sample_times(
  const Motion & follower, const LeaderContext & leaders, double t_a, double t_b, double step_s)
{
  std::vector<double> t;
  const int n = std::max(1, static_cast<int>(std::ceil((t_b - t_a) / step_s)));
  t.reserve(static_cast<std::size_t>(n) + 16);
  for (int k = 0; k <= n; ++k) {
    t.push_back(k == n ? t_b : t_a + (t_b - t_a) * k / n);
  }
  auto add_event = [&](double e) {
    if (e > t_a && e < t_b) {
      t.push_back(e);
      // left limit of a possible jump
      if (e - 1e-9 > t_a) {
        t.push_back(e - 1e-9);
      }
    }
  };
  for (double e : leaders.event_times(t_a, t_b)) {
    add_event(e);
  }
  for (double e : follower.breakpoints()) {
    add_event(e);
  }
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

}  // namespace

double margin_value(
  const SafetyParams & params, const KinematicSample & follower, const KinematicSample & leader)
{
  return params.xi * (leader.p - follower.p) - (params.gamma_m + params.rho_s * follower.v);
}

double margin_rate(
  const SafetyParams & params, const KinematicSample & follower, const KinematicSample & leader)
{
  return params.xi * (leader.v - follower.v) - params.rho_s * follower.u;
}

double margin_at(
  const Motion & follower, const LeaderContext & leaders, const SafetyParams & params, double t_s)
{
  const auto lead = leaders.leader_at(t_s);
  if (!lead) {
    return kInf;
  }
  return margin_value(params, follower.sample(t_s), *lead);
}

GapMargin gap_margin(
  const Motion & follower, const LeaderContext & leaders, const SafetyParams & params,
  double step_s)
{
  if (!(step_s > 0.0)) {
    throw ContractError("gap_margin: grid step must be positive");
  }
  GapMargin out;
  const double t0 = follower.t_begin();
  const double t1 = follower.t_end();
  const int n = std::max(1, static_cast<int>(std::ceil((t1 - t0) / step_s - 1e-9)));
  for (int k = 0; k <= n; ++k) {
    const double t = std::min(t1, t0 + k * step_s);
    out.t_s.push_back(t);
    out.margin_m.push_back(margin_at(follower, leaders, params, t));
    if (t >= t1) {
      break;
    }
  }
  return out;
}

MarginExtremum min_margin(
  const Motion & follower, const LeaderContext & leaders, const SafetyParams & params, double t_a,
  double t_b, double step_s)
{
  t_a = std::max(t_a, follower.t_begin());
  t_b = std::min(t_b, follower.t_end());
  MarginExtremum best{t_a, kInf};
  if (t_b < t_a) {
    return best;
  }
  const auto times = sample_times(follower, leaders, t_a, t_b, step_s);
  std::vector<double> m(times.size());
  std::size_t arg = 0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    m[k] = margin_at(follower, leaders, params, times[k]);
    if (m[k] < m[arg]) {
      arg = k;
    }
  }
  best = MarginExtremum{times[arg], m[arg]};
  if (!std::isfinite(best.margin_m)) {
    return best;
  }
  // golden-section refinement inside the neighbouring sample intervals
  double lo = times[arg > 0 ? arg - 1 : 0];
  double hi = times[std::min(arg + 1, times.size() - 1)];
  if (arg > 0 && !std::isfinite(m[arg - 1])) {
    lo = times[arg];
  }
  if (arg + 1 < times.size() && !std::isfinite(m[arg + 1])) {
    hi = times[arg];
  }
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - g * (hi - lo);
  double x2 = lo + g * (hi - lo);
  double f1 = margin_at(follower, leaders, params, x1);
  double f2 = margin_at(follower, leaders, params, x2);
  for (int it = 0; it < 60 && hi - lo > 1e-10; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = margin_at(follower, leaders, params, x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = margin_at(follower, leaders, params, x2);
    }
  }
  for (const auto & [t, f] : {std::pair{x1, f1}, std::pair{x2, f2}}) {
    if (f < best.margin_m) {
      best = MarginExtremum{t, f};
    }
  }
  return best;
}

std::optional<double> first_violation(
  const Motion & follower, const LeaderContext & leaders, const SafetyParams & params, double t_a,
  double t_b, double tol_m, double step_s)
{
  t_a = std::max(t_a, follower.t_begin());
  t_b = std::min(t_b, follower.t_end());
  if (t_b < t_a) {
    return std::nullopt;
  }
  const auto times = sample_times(follower, leaders, t_a, t_b, step_s);
  auto bad = [&](double t) { return margin_at(follower, leaders, params, t) < -tol_m; };
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!bad(times[k])) {
      continue;
    }
    if (k == 0) {
      return times[0];
    }
    double lo = times[k - 1];
    double hi = times[k];
    while (hi - lo > 1e-9) {
      const double mid = 0.5 * (lo + hi);
      (bad(mid) ? hi : lo) = mid;
    }
    return hi;
  }
  return std::nullopt;
}

}  // namespace corridor
