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

#include "corridor/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "corridor/errors.hpp"

namespace corridor
{
namespace
{

std::string zone_label(const CorridorSpec & corridor, int zone_id)
{
  const ConflictZone * z = corridor.find_zone(zone_id);
  if (z != nullptr && !z->name.empty()) {
    return z->name;
  }
  return "zone" + std::to_string(zone_id);
}

double pct(double base, double value)
{
  return base != 0.0 ? (value - base) / base * 100.0 : 0.0;
}

void mean_std(const std::vector<double> & x, double & mean, double & sd)
{
  mean = 0.0;
  sd = 0.0;
  if (x.empty()) {
    return;
  }
  for (double v : x) {
    mean += v;
  }
  mean /= static_cast<double>(x.size());
  for (double v : x) {
    sd += (v - mean) * (v - mean);
  }
  sd = std::sqrt(sd / static_cast<double>(x.size()));
}

}  // namespace

FuelCoefficients FuelCoefficients::passenger_car()
{
  return FuelCoefficients{0.1569, 2.450e-2, -7.415e-4, 5.975e-5, 0.07224, 9.681e-2, 1.075e-3};
}

double fuel_rate(double v_mps, double u_mps2, const FuelCoefficients & c)
{
  const double v = v_mps;
  const double cruise = c.q0 + v * (c.q1 + v * (c.q2 + v * c.q3));
  const double accel = u_mps2 > 0.0 ? u_mps2 * (c.r0 + v * (c.r1 + v * c.r2)) : 0.0;
  return std::max(0.0, cruise + std::max(0.0, accel));
}

double total_fuel(
  const std::vector<double> & v_mps, const std::vector<double> & u_mps2, double interval_s,
  const FuelCoefficients & coeffs)
{
  if (v_mps.size() != u_mps2.size()) {
    throw ContractError("total_fuel: speed and control sample counts differ");
  }
  if (v_mps.size() < 2) {
    throw ContractError("total_fuel: at least two samples required");
  }
  if (!(interval_s > 0.0)) {
    throw ContractError("total_fuel: sampling interval must be positive");
  }
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < v_mps.size(); ++k) {
    sum += fuel_rate(v_mps[k], u_mps2[k], coeffs);
  }
  return sum * interval_s;
}

void RunReport::aggregate()
{
  Summary s;
  s.vehicles = static_cast<int>(vehicles.size());
  s.min_margin_m = std::numeric_limits<double>::infinity();
  std::vector<double> tt;
  for (const auto & v : vehicles) {
    s.total_fuel += v.fuel;
    s.min_margin_m = std::min(s.min_margin_m, v.min_margin_m);
    if (v.completed) {
      ++s.completed;
      tt.push_back(v.travel_time_s);
    }
  }
  double sd = 0.0;
  mean_std(tt, s.mean_travel_time_s, sd);
  s.var_travel_time_s2 = sd * sd;
  s.violation_events = static_cast<int>(violations.size());
  summary = s;
}

std::vector<ViolationEvent> violation_events(
  const std::vector<SimSample> & samples, double threshold_m)
{
  // per vehicle, samples are in time order
  std::map<int, std::vector<const SimSample *>> by_vehicle;
  for (const auto & s : samples) {
    by_vehicle[s.vehicle_id].push_back(&s);
  }
  std::vector<ViolationEvent> out;
  for (const auto & [id, list] : by_vehicle) {
    std::optional<ViolationEvent> run;
    for (const SimSample * s : list) {
      if (s->margin_m < -threshold_m) {
        if (!run) {
          run = ViolationEvent{id, s->t_s, s->t_s, -s->margin_m};
        }
        run->t_end_s = s->t_s;
        run->magnitude_m = std::max(run->magnitude_m, -s->margin_m);
      } else if (run) {
        out.push_back(*run);
        run.reset();
      }
    }
    if (run) {
      out.push_back(*run);
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const ViolationEvent & a, const ViolationEvent & b) {
    return a.t_start_s < b.t_start_s;
  });
  return out;
}

RunReport build_report(
  const SimState & state, const SimConfig & config, const MetricsConfig & metrics)
{
  RunReport r;
  r.scenario_id = config.scenario.id;
  r.mode = to_string(config.mode);
  r.seed = config.seed;
  const int stride =
    std::max(1, static_cast<int>(std::lround(metrics.fuel_interval_s / config.dt_s)));
  const double interval = stride * config.dt_s;

  std::map<int, std::vector<const SimSample *>> by_vehicle;
  for (const auto & s : state.samples) {
    by_vehicle[s.vehicle_id].push_back(&s);
  }
  for (const auto & v : state.vehicles) {
    VehicleReport vr;
    vr.id = v.id;
    vr.route_id = v.route_id;
    vr.entry_time_s = v.entry_time_s;
    vr.completed = v.exit_time_s.has_value();
    vr.exit_time_s = v.exit_time_s.value_or(state.clock_s);
    vr.travel_time_s = vr.exit_time_s - vr.entry_time_s;
    vr.min_margin_m = std::numeric_limits<double>::infinity();
    std::vector<double> vs;
    std::vector<double> us;
    const auto & list = by_vehicle[v.id];
    for (std::size_t k = 0; k < list.size(); ++k) {
      vr.min_margin_m = std::min(vr.min_margin_m, list[k]->margin_m);
      if (k % static_cast<std::size_t>(stride) == 0) {
        vs.push_back(list[k]->v_mps);
        us.push_back(list[k]->u_mps2);
      }
    }
    if (vs.size() >= 2) {
      vr.fuel = total_fuel(vs, us, interval, metrics.fuel);
    }
    const Route * route = config.scenario.find_route(v.route_id);
    if (route != nullptr) {
      std::string from = "entry";
      double t_from = v.entry_time_s;
      for (std::size_t k = 0; k < v.zone_crossings_s.size() && k < route->zone_ids.size(); ++k) {
        const std::string to = zone_label(config.scenario.corridor, route->zone_ids[k]);
        vr.segment_times_s[from + "->" + to] = v.zone_crossings_s[k] - t_from;
        from = to;
        t_from = v.zone_crossings_s[k];
      }
    }
    r.vehicles.push_back(std::move(vr));
  }
  r.violations = violation_events(state.samples, metrics.violation_threshold_m);
  r.aggregate();
  return r;
}

Comparison compare_runs(const RunReport & a, const RunReport & b)
{
  if (a.scenario_id != b.scenario_id) {
    throw ContractError(
      "compare_runs: scenario ids differ ('" + a.scenario_id + "' vs '" + b.scenario_id + "')");
  }
  if (a.vehicles.empty() != b.vehicles.empty()) {
    throw ContractError("compare_runs: one report is empty");
  }
  Comparison c;
  c.scenario_id = a.scenario_id;
  c.total_fuel_a = a.summary.total_fuel;
  c.total_fuel_b = b.summary.total_fuel;
  c.fuel_savings_pct = -pct(c.total_fuel_a, c.total_fuel_b);
  c.mean_travel_time_a_s = a.summary.mean_travel_time_s;
  c.mean_travel_time_b_s = b.summary.mean_travel_time_s;
  c.travel_time_delta_pct = pct(c.mean_travel_time_a_s, c.mean_travel_time_b_s);
  c.violations_a = a.summary.violation_events;
  c.violations_b = b.summary.violation_events;
  c.violation_delta_pct = pct(c.violations_a, c.violations_b);

  std::set<std::string> names;
  for (const auto * r : {&a, &b}) {
    for (const auto & v : r->vehicles) {
      for (const auto & [seg, t] : v.segment_times_s) {
        names.insert(seg);
      }
    }
  }
  for (const auto & name : names) {
    SegmentComparison sc;
    sc.segment = name;
    std::vector<double> ta;
    std::vector<double> tb;
    for (const auto & v : a.vehicles) {
      if (auto it = v.segment_times_s.find(name); it != v.segment_times_s.end()) {
        ta.push_back(it->second);
      }
    }
    for (const auto & v : b.vehicles) {
      if (auto it = v.segment_times_s.find(name); it != v.segment_times_s.end()) {
        tb.push_back(it->second);
      }
    }
    sc.samples_a = static_cast<int>(ta.size());
    sc.samples_b = static_cast<int>(tb.size());
    mean_std(ta, sc.mean_a_s, sc.std_a_s);
    mean_std(tb, sc.mean_b_s, sc.std_b_s);
    c.segments.push_back(sc);
  }
  return c;
}

}  // namespace corridor
