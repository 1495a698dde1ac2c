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

#ifndef CORRIDOR__METRICS_HPP_
#define CORRIDOR__METRICS_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "corridor/sim.hpp"

namespace corridor
{

/// Polynomial fuel metamodel: cruise term q(v) plus an acceleration term u * r(v).
struct FuelCoefficients
{
  double q0{0.0};
  double q1{0.0};
  double q2{0.0};
  double q3{0.0};
  double r0{0.0};
  double r1{0.0};
  double r2{0.0};

  /// Light-duty passenger car values in ml/s (Kamal et al., 2011).
  static FuelCoefficients passenger_car();
};

/// Fuel rate; the acceleration term is dropped while braking and the result is never negative.
double fuel_rate(double v_mps, double u_mps2, const FuelCoefficients & coeffs);

/// Left-rectangle integral of the fuel rate over uniformly spaced samples (the last sample
/// only closes the final interval). Throws ContractError with fewer than two samples.
double total_fuel(
  const std::vector<double> & v_mps, const std::vector<double> & u_mps2, double interval_s,
  const FuelCoefficients & coeffs);

struct VehicleReport
{
  int id{0};
  std::string route_id;
  double entry_time_s{0.0};
  double exit_time_s{0.0};
  double travel_time_s{0.0};
  double fuel{0.0};
  double min_margin_m{0.0};
  bool completed{false};
  /// travel time of each segment of the route, keyed "from->to"
  std::map<std::string, double> segment_times_s;
};

struct ViolationEvent
{
  int vehicle_id{0};
  double t_start_s{0.0};
  double t_end_s{0.0};
  double magnitude_m{0.0};  // most negative margin in the run, as a positive number
};

struct Summary
{
  double total_fuel{0.0};
  double mean_travel_time_s{0.0};
  double var_travel_time_s2{0.0};
  int vehicles{0};
  int completed{0};
  int violation_events{0};
  double min_margin_m{0.0};
};

struct RunReport
{
  std::string scenario_id;
  std::string mode;
  std::uint64_t seed{0};
  std::vector<VehicleReport> vehicles;
  std::vector<ViolationEvent> violations;
  Summary summary;

  /// Recomputes `summary` from the per-vehicle entries.
  void aggregate();
};

struct MetricsConfig
{
  FuelCoefficients fuel{FuelCoefficients::passenger_car()};
  double fuel_interval_s{1.0};
  double violation_threshold_m{1e-3};
};

/// Margin-violation events: maximal runs of consecutive samples of one vehicle with
/// margin < -threshold.
std::vector<ViolationEvent> violation_events(
  const std::vector<SimSample> & samples, double threshold_m);

RunReport build_report(
  const SimState & state, const SimConfig & config, const MetricsConfig & metrics);

struct SegmentComparison
{
  std::string segment;
  int samples_a{0};
  int samples_b{0};
  double mean_a_s{0.0};
  double mean_b_s{0.0};
  double std_a_s{0.0};
  double std_b_s{0.0};
};

struct Comparison
{
  std::string scenario_id;
  double total_fuel_a{0.0};
  double total_fuel_b{0.0};
  double fuel_savings_pct{0.0};   // (a - b) / a * 100
  double mean_travel_time_a_s{0.0};
  double mean_travel_time_b_s{0.0};
  double travel_time_delta_pct{0.0};  // (b - a) / a * 100
  int violations_a{0};
  int violations_b{0};
  double violation_delta_pct{0.0};  // (b - a) / a * 100, 0 when a has none
  std::vector<SegmentComparison> segments;
};

/// Throws ContractError on different scenario ids or when exactly one report is empty.
Comparison compare_runs(const RunReport & a, const RunReport & b);

}  // namespace corridor

#endif  // CORRIDOR__METRICS_HPP_
