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

#ifndef CORRIDOR__OUTPUT_HPP_
#define CORRIDOR__OUTPUT_HPP_

#include <string>
#include <utility>
#include <vector>

#include "corridor/constraint.hpp"
#include "corridor/metrics.hpp"
#include "corridor/sim.hpp"
#include "corridor/trajectory.hpp"

namespace corridor
{

inline constexpr int kReportSchemaVersion = 1;

/// One line of a trajectory CSV.
struct TrajectoryRow
{
  int vehicle_id{0};
  double t_s{0.0};
  double p_m{0.0};
  double v_mps{0.0};
  double u_mps2{0.0};
  double margin_m{0.0};  // +inf with nobody ahead
};

/// Samples a planned trajectory every `step_s`, end point included.
std::vector<TrajectoryRow> sample_planned(
  int vehicle_id, const Trajectory & trajectory, const LeaderContext & leaders,
  const SafetyParams & safety, double step_s);

std::vector<TrajectoryRow> rows_from_samples(const std::vector<SimSample> & samples);

/// Header vehicle_id,t,p,v,u,margin; an unbounded margin is written as "inf".
std::string trajectory_csv(const std::vector<TrajectoryRow> & rows);
/// Inverse of trajectory_csv. Throws ParseError on malformed lines.
std::vector<TrajectoryRow> parse_trajectory_csv(const std::string & text);

struct PlannedResult
{
  int vehicle_id{0};
  double cost{0.0};
  double runtime_ms{0.0};
  std::vector<std::pair<double, double>> windows;
  std::vector<JunctionReport> junctions;
  double t_begin_s{0.0};
  double t_end_s{0.0};
  double min_margin_m{0.0};
};

std::string solve_json(const std::string & scenario_id, const std::vector<PlannedResult> & results);

std::string report_json(const RunReport & report);
/// Throws ParseError on malformed or unversioned input.
RunReport parse_report_json(const std::string & text);
std::string comparison_json(const Comparison & comparison, const RunReport & a, const RunReport & b);

/// Three stacked panels (control, speed, margin) with one polyline per vehicle.
std::string plot_svg(const std::vector<TrajectoryRow> & rows, const std::string & title);

/// Writes every file to a temporary sibling first and renames only after all writes succeed,
/// so a failure leaves no partial output behind. Throws std::runtime_error on I/O failure.
void write_files(const std::vector<std::pair<std::string, std::string>> & files);

std::string read_file(const std::string & path);

}  // namespace corridor

#endif  // CORRIDOR__OUTPUT_HPP_
