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

#include "corridor/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "corridor/errors.hpp"
#include "corridor/margin.hpp"
#include "json.hpp"

namespace corridor
{
namespace
{

using nlohmann::json;

std::string num(double x)
{
  if (std::isinf(x)) {
    return x > 0 ? "inf" : "-inf";
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

json finite_or_null(double x)
{
  return std::isfinite(x) ? json(x) : json(nullptr);
}

double number_or_inf(const json & j)
{
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

void check_version(const json & j, const std::string & kind)
{
  if (!j.is_object() || !j.contains("schema_version")) {
    throw ParseError("schema_version", kind + " is not versioned");
  }
  if (j.at("schema_version").get<int>() != kReportSchemaVersion) {
    throw ParseError("schema_version", "unsupported " + kind + " version");
  }
  if (j.value("kind", "") != kind) {
    throw ParseError("kind", "expected a " + kind);
  }
}

json vehicle_json(const VehicleReport & v)
{
  return json{
    {"id", v.id},
    {"route", v.route_id},
    {"entry_time_s", v.entry_time_s},
    {"exit_time_s", v.exit_time_s},
    {"travel_time_s", v.travel_time_s},
    {"fuel_ml", v.fuel},
    {"min_margin_m", finite_or_null(v.min_margin_m)},
    {"completed", v.completed},
    {"segment_times_s", v.segment_times_s}};
}

}  // namespace

std::vector<TrajectoryRow> sample_planned(
  int vehicle_id, const Trajectory & trajectory, const LeaderContext & leaders,
  const SafetyParams & safety, double step_s)
{
  if (!(step_s > 0.0)) {
    throw ContractError("sample_planned: step must be positive");
  }
  std::vector<TrajectoryRow> rows;
  const double t0 = trajectory.t_begin();
  const double t1 = trajectory.t_end();
  const auto n = static_cast<long>(std::floor((t1 - t0) / step_s + 1e-9));
  for (long k = 0; k <= n + 1; ++k) {
    const double t = k <= n ? t0 + static_cast<double>(k) * step_s : t1;
    if (k == n + 1 && t - rows.back().t_s < 1e-9) {
      break;
    }
    const KinematicSample s = trajectory.sample(t);
    rows.push_back(
      TrajectoryRow{vehicle_id, t, s.p, s.v, s.u, margin_at(trajectory, leaders, safety, t)});
  }
  return rows;
}

std::vector<TrajectoryRow> rows_from_samples(const std::vector<SimSample> & samples)
{
  std::vector<TrajectoryRow> rows;
  rows.reserve(samples.size());
  for (const auto & s : samples) {
    rows.push_back(TrajectoryRow{s.vehicle_id, s.t_s, s.p_m, s.v_mps, s.u_mps2, s.margin_m});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const TrajectoryRow & a, const TrajectoryRow & b) {
    return a.vehicle_id < b.vehicle_id;
  });
  return rows;
}

std::string trajectory_csv(const std::vector<TrajectoryRow> & rows)
{
  std::string out = "vehicle_id,t,p,v,u,margin\n";
  for (const auto & r : rows) {
    out += std::to_string(r.vehicle_id) + "," + num(r.t_s) + "," + num(r.p_m) + "," +
           num(r.v_mps) + "," + num(r.u_mps2) + "," + num(r.margin_m) + "\n";
  }
  return out;
}

std::vector<TrajectoryRow> parse_trajectory_csv(const std::string & text)
{
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "vehicle_id,t,p,v,u,margin") {
    throw ParseError("line 1", "expected header vehicle_id,t,p,v,u,margin");
  }
  std::vector<TrajectoryRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) {
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      cells.push_back(cell);
    }
    if (cells.size() != 6) {
      throw ParseError("line " + std::to_string(lineno), "expected 6 columns");
    }
    try {
      rows.push_back(TrajectoryRow{
        std::stoi(cells[0]), std::stod(cells[1]), std::stod(cells[2]), std::stod(cells[3]),
        std::stod(cells[4]), std::stod(cells[5])});
    } catch (const std::exception &) {
      throw ParseError("line " + std::to_string(lineno), "malformed number");
    }
  }
  return rows;
}

std::string solve_json(const std::string & scenario_id, const std::vector<PlannedResult> & results)
{
  json vehicles = json::array();
  for (const auto & r : results) {
    json windows = json::array();
    for (const auto & j : r.junctions) {
      windows.push_back(json{
        {"t1_s", j.t1_s},
        {"t2_s", j.t2_s},
        {"leader_id", j.leader_id},
        {"entry_margin_m", j.entry_margin_m},
        {"entry_margin_rate", j.entry_margin_rate},
        {"exit_control_jump", j.exit_control_jump}});
    }
    vehicles.push_back(json{
      {"id", r.vehicle_id},
      {"cost", r.cost},
      {"runtime_ms", r.runtime_ms},
      {"t_begin_s", r.t_begin_s},
      {"t_end_s", r.t_end_s},
      {"min_margin_m", finite_or_null(r.min_margin_m)},
      {"constrained_windows", windows}});
  }
  const json j{
    {"schema_version", kReportSchemaVersion},
    {"kind", "solution"},
    {"scenario", scenario_id},
    {"vehicles", vehicles}};
  return j.dump(2) + "\n";
}

std::string report_json(const RunReport & report)
{
  json vehicles = json::array();
  for (const auto & v : report.vehicles) {
    vehicles.push_back(vehicle_json(v));
  }
  json violations = json::array();
  for (const auto & e : report.violations) {
    violations.push_back(json{
      {"vehicle_id", e.vehicle_id},
      {"t_start_s", e.t_start_s},
      {"t_end_s", e.t_end_s},
      {"magnitude_m", e.magnitude_m}});
  }
  const auto & s = report.summary;
  const json j{
    {"schema_version", kReportSchemaVersion},
    {"kind", "report"},
    {"scenario", report.scenario_id},
    {"mode", report.mode},
    {"seed", report.seed},
    {"summary",
     {{"total_fuel_ml", s.total_fuel},
      {"mean_travel_time_s", s.mean_travel_time_s},
      {"var_travel_time_s2", s.var_travel_time_s2},
      {"vehicles", s.vehicles},
      {"completed", s.completed},
      {"violation_events", s.violation_events},
      {"min_margin_m", finite_or_null(s.min_margin_m)}}},
    {"vehicles", vehicles},
    {"violations", violations}};
  return j.dump(2) + "\n";
}

RunReport parse_report_json(const std::string & text)
{
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error & e) {
    throw ParseError("byte " + std::to_string(e.byte), "malformed JSON");
  }
  check_version(j, "report");
  RunReport r;
  try {
    r.scenario_id = j.at("scenario").get<std::string>();
    r.mode = j.at("mode").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    for (const auto & v : j.at("vehicles")) {
      VehicleReport vr;
      vr.id = v.at("id").get<int>();
      vr.route_id = v.at("route").get<std::string>();
      vr.entry_time_s = v.at("entry_time_s").get<double>();
      vr.exit_time_s = v.at("exit_time_s").get<double>();
      vr.travel_time_s = v.at("travel_time_s").get<double>();
      vr.fuel = v.at("fuel_ml").get<double>();
      vr.min_margin_m = number_or_inf(v.at("min_margin_m"));
      vr.completed = v.at("completed").get<bool>();
      vr.segment_times_s = v.at("segment_times_s").get<std::map<std::string, double>>();
      r.vehicles.push_back(std::move(vr));
    }
    for (const auto & e : j.at("violations")) {
      r.violations.push_back(ViolationEvent{
        e.at("vehicle_id").get<int>(), e.at("t_start_s").get<double>(),
        e.at("t_end_s").get<double>(), e.at("magnitude_m").get<double>()});
    }
  } catch (const json::exception & e) {
    throw ParseError("report", e.what());
  }
  r.aggregate();
  return r;
}

std::string comparison_json(const Comparison & c, const RunReport & a, const RunReport & b)
{
  json segments = json::array();
  for (const auto & s : c.segments) {
    segments.push_back(json{
      {"segment", s.segment},
      {"samples_a", s.samples_a},
      {"samples_b", s.samples_b},
      {"mean_a_s", s.mean_a_s},
      {"mean_b_s", s.mean_b_s},
      {"std_a_s", s.std_a_s},
      {"std_b_s", s.std_b_s}});
  }
  const json j{
    {"schema_version", kReportSchemaVersion},
    {"kind", "comparison"},
    {"scenario", c.scenario_id},
    {"mode_a", a.mode},
    {"mode_b", b.mode},
    {"total_fuel_a_ml", c.total_fuel_a},
    {"total_fuel_b_ml", c.total_fuel_b},
    {"fuel_savings_pct", c.fuel_savings_pct},
    {"mean_travel_time_a_s", c.mean_travel_time_a_s},
    {"mean_travel_time_b_s", c.mean_travel_time_b_s},
    {"travel_time_delta_pct", c.travel_time_delta_pct},
    {"violations_a", c.violations_a},
    {"violations_b", c.violations_b},
    {"violation_delta_pct", c.violation_delta_pct},
    {"segments", segments}};
  return j.dump(2) + "\n";
}

std::string plot_svg(const std::vector<TrajectoryRow> & rows, const std::string & title)
{
  constexpr double kWidth = 900.0;
  constexpr double kPanel = 220.0;
  constexpr double kLeft = 70.0;
  constexpr double kRight = 20.0;
  constexpr double kTop = 40.0;
  constexpr double kGap = 40.0;
  static constexpr double kMarginCap = 60.0;  // margins beyond this are clipped for legibility
  static const char * kColors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                   "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

  std::map<int, std::vector<const TrajectoryRow *>> by_vehicle;
  double t_lo = std::numeric_limits<double>::infinity();
  double t_hi = -t_lo;
  for (const auto & r : rows) {
    by_vehicle[r.vehicle_id].push_back(&r);
    t_lo = std::min(t_lo, r.t_s);
    t_hi = std::max(t_hi, r.t_s);
  }
  if (rows.empty()) {
    t_lo = 0.0;
    t_hi = 1.0;
  }
  if (t_hi - t_lo < 1e-9) {
    t_hi = t_lo + 1.0;
  }

  struct Panel
  {
    const char * label;
    double (*get)(const TrajectoryRow &);
  };
  const Panel panels[] = {
    {"u [m/s^2]", [](const TrajectoryRow & r) { return r.u_mps2; }},
    {"v [m/s]", [](const TrajectoryRow & r) { return r.v_mps; }},
    {"margin [m]", [](const TrajectoryRow & r) { return std::min(r.margin_m, kMarginCap); }},
  };

  std::ostringstream svg;
  const double height = kTop + 3.0 * (kPanel + kGap);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
      << title << "</text>\n";
  const double plot_w = kWidth - kLeft - kRight;
  for (int k = 0; k < 3; ++k) {
    const Panel & panel = panels[k];
    const double y0 = kTop + k * (kPanel + kGap);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto & r : rows) {
      const double y = panel.get(r);
      if (std::isfinite(y)) {
        lo = std::min(lo, y);
        hi = std::max(hi, y);
      }
    }
    if (!std::isfinite(lo)) {
      lo = 0.0;
      hi = 1.0;
    }
    if (k == 2) {
      lo = std::min(lo, 0.0);
    }
    if (hi - lo < 1e-9) {
      hi = lo + 1.0;
    }
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
    auto px = [&](double t) { return kLeft + (t - t_lo) / (t_hi - t_lo) * plot_w; };
    auto py = [&](double y) { return y0 + kPanel - (y - lo) / (hi - lo) * kPanel; };

    svg << "<rect x=\"" << kLeft << "\" y=\"" << y0 << "\" width=\"" << plot_w << "\" height=\""
        << kPanel << "\" fill=\"none\" stroke=\"black\"/>\n";
    svg << "<text x=\"12\" y=\"" << y0 + kPanel / 2 << "\" transform=\"rotate(-90 12 "
        << y0 + kPanel / 2 << ")\" text-anchor=\"middle\">" << panel.label << "</text>\n";
    svg << "<text x=\"" << kLeft - 4 << "\" y=\"" << y0 + 10 << "\" text-anchor=\"end\">"
        << num(hi) << "</text>\n";
    svg << "<text x=\"" << kLeft - 4 << "\" y=\"" << y0 + kPanel << "\" text-anchor=\"end\">"
        << num(lo) << "</text>\n";
    svg << "<text x=\"" << kLeft << "\" y=\"" << y0 + kPanel + 15 << "\">" << num(t_lo)
        << " s</text>\n";
    svg << "<text x=\"" << kLeft + plot_w << "\" y=\"" << y0 + kPanel + 15
        << "\" text-anchor=\"end\">" << num(t_hi) << " s</text>\n";
    if (lo < 0.0 && hi > 0.0) {
      svg << "<line x1=\"" << kLeft << "\" x2=\"" << kLeft + plot_w << "\" y1=\"" << py(0.0)
          << "\" y2=\"" << py(0.0) << "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
    }
    std::size_t color = 0;
    for (const auto & [id, list] : by_vehicle) {
      std::string points;
      auto flush = [&]() {
        if (!points.empty()) {
          svg << "<polyline fill=\"none\" stroke-width=\"1.2\" stroke=\""
              << kColors[color % std::size(kColors)] << "\" points=\"" << points << "\"/>\n";
          points.clear();
        }
      };
      for (const TrajectoryRow * r : list) {
        const double y = panel.get(*r);
        if (!std::isfinite(y)) {
          flush();
          continue;
        }
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", px(r->t_s), py(y));
        points += buf;
      }
      flush();
      ++color;
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_files(const std::vector<std::pair<std::string, std::string>> & files)
{
  namespace fs = std::filesystem;
  std::vector<std::pair<fs::path, fs::path>> staged;
  auto discard = [&]() {
    std::error_code ec;
    for (const auto & [tmp, dst] : staged) {
      fs::remove(tmp, ec);
    }
  };
  for (const auto & [path, content] : files) {
    if (fs::is_directory(path)) {
      throw std::runtime_error("cannot write " + path + ": is a directory");
    }
  }
  for (const auto & [path, content] : files) {
    const fs::path dst(path);
    if (dst.has_parent_path()) {
      std::error_code ec;
      fs::create_directories(dst.parent_path(), ec);
    }
    fs::path tmp = dst;
    tmp += ".tmp";
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (out) {
      staged.emplace_back(tmp, dst);
    }
    out << content;
    out.close();
    if (!out) {
      discard();
      throw std::runtime_error("cannot write " + path);
    }
  }
  try {
    for (const auto & [tmp, dst] : staged) {
      fs::rename(tmp, dst);
    }
  } catch (const fs::filesystem_error & e) {
    discard();
    throw std::runtime_error(std::string("cannot move output into place: ") + e.what());
  }
}

std::string read_file(const std::string & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError(path, "cannot open file");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace corridor
