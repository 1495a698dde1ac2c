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

#include "corridor/scenario_io.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <memory>
#include <set>
#include <sstream>

#include "corridor/errors.hpp"

namespace corridor
{
namespace
{

/// YAML node plus the field path that led to it, for diagnostics.
class Field
{
public:
  Field(YAML::Node node, std::string path, int line) : node_(std::move(node)), path_(std::move(path)), line_(line)
  {
    if (node_ && node_.Mark().line >= 0) {
      line_ = node_.Mark().line + 1;
    }
  }

  [[noreturn]] void fail(const std::string & what) const
  {
    throw ParseError("line " + std::to_string(line_) + " (" + path_ + ")", what);
  }

  bool has(const std::string & key) const { return node_.IsMap() && node_[key]; }

  Field at(const std::string & key) const
  {
    if (!node_.IsMap()) {
      fail("expected a mapping");
    }
    const YAML::Node child = node_[key];
    if (!child) {
      fail("missing required field '" + key + "'");
    }
    return Field(child, join(key), line_);
  }

  std::optional<Field> maybe(const std::string & key) const
  {
    if (!has(key)) {
      return std::nullopt;
    }
    return at(key);
  }

  std::vector<Field> items() const
  {
    if (!node_.IsSequence()) {
      fail("expected a list");
    }
    std::vector<Field> out;
    for (std::size_t k = 0; k < node_.size(); ++k) {
      out.emplace_back(node_[k], path_ + "[" + std::to_string(k) + "]", line_);
    }
    return out;
  }

  void allow(std::initializer_list<const char *> keys) const
  {
    if (!node_.IsMap()) {
      fail("expected a mapping");
    }
    const std::set<std::string> ok(keys.begin(), keys.end());
    for (auto it = node_.begin(); it != node_.end(); ++it) {
      const auto key = it->first.as<std::string>();
      if (!ok.count(key)) {
        Field(it->first, join(key), line_).fail("unknown field '" + key + "'");
      }
    }
  }

  double number() const
  {
    try {
      if (!node_.IsScalar()) {
        fail("expected a number");
      }
      const double x = node_.as<double>();
      if (!std::isfinite(x)) {
        fail("expected a finite number");
      }
      return x;
    } catch (const YAML::Exception &) {
      fail("expected a number, got '" + node_.Scalar() + "'");
    }
  }

  int integer() const
  {
    try {
      if (!node_.IsScalar()) {
        fail("expected an integer");
      }
      return node_.as<int>();
    } catch (const YAML::Exception &) {
      fail("expected an integer, got '" + node_.Scalar() + "'");
    }
  }

  std::uint64_t unsigned64() const
  {
    try {
      if (!node_.IsScalar()) {
        fail("expected a non-negative integer");
      }
      return node_.as<std::uint64_t>();
    } catch (const YAML::Exception &) {
      fail("expected a non-negative integer, got '" + node_.Scalar() + "'");
    }
  }

  std::string text() const
  {
    if (!node_.IsScalar()) {
      fail("expected a string");
    }
    return node_.Scalar();
  }

  double number_or(const std::string & key, double fallback) const
  {
    return has(key) ? at(key).number() : fallback;
  }

  const std::string & path() const { return path_; }

private:
  std::string join(const std::string & key) const { return path_.empty() ? key : path_ + "." + key; }

  YAML::Node node_;
  std::string path_;
  int line_;
};

void read_vehicle_params(const Field & f, VehicleParams & p)
{
  f.allow({"u_min_mps2", "u_max_mps2", "v_min_mps", "v_max_mps"});
  p.u_min_mps2 = f.number_or("u_min_mps2", p.u_min_mps2);
  p.u_max_mps2 = f.number_or("u_max_mps2", p.u_max_mps2);
  p.v_min_mps = f.number_or("v_min_mps", p.v_min_mps);
  p.v_max_mps = f.number_or("v_max_mps", p.v_max_mps);
}

void read_safety(const Field & f, SafetyParams & p)
{
  f.allow({"xi", "gamma_m", "rho_s"});
  p.xi = f.number_or("xi", p.xi);
  p.gamma_m = f.number_or("gamma_m", p.gamma_m);
  p.rho_s = f.number_or("rho_s", p.rho_s);
}

Waypoint read_pin(const Field & f, const Route & route, const CorridorSpec & corridor)
{
  f.allow({"zone", "time_s", "position_m", "speed_mps"});
  Waypoint w;
  w.zone_id = f.at("zone").integer();
  w.time_s = f.at("time_s").number();
  if (corridor.find_zone(w.zone_id) == nullptr) {
    f.at("zone").fail("unknown zone " + std::to_string(w.zone_id));
  }
  w.position_m = f.has("position_m") ? f.at("position_m").number()
                                     : zone_position_on_route(route, corridor, w.zone_id);
  if (f.has("speed_mps")) {
    w.speed_mps = f.at("speed_mps").number();
  } else {
    w.speed_mps = corridor.find_zone(w.zone_id)->desired_speed_mps;
  }
  return w;
}

LeaderProfile read_leader(const Field & f, double exit_position_m, int * leader_id)
{
  f.allow({"id", "initial", "phases", "exit_time_s"});
  *leader_id = f.has("id") ? f.at("id").integer() : 0;
  const Field init = f.at("initial");
  init.allow({"time_s", "position_m", "speed_mps"});
  const VehicleState s0{
    init.at("position_m").number(), init.at("speed_mps").number(), init.number_or("time_s", 0.0)};
  std::vector<std::pair<double, double>> phases;
  if (const auto ph = f.maybe("phases")) {
    for (const auto & p : ph->items()) {
      p.allow({"duration_s", "accel_mps2"});
      const double d = p.at("duration_s").number();
      if (!(d > 0.0)) {
        p.at("duration_s").fail("phase duration must be positive");
      }
      phases.emplace_back(d, p.at("accel_mps2").number());
    }
  }
  LeaderProfile prof = LeaderProfile::from_phases(s0, phases, 0.0);
  if (f.has("exit_time_s")) {
    prof.exit_time_s = f.at("exit_time_s").number();
  } else {
    const auto t = time_at_position(prof, exit_position_m);
    if (!t) {
      f.fail("leader never reaches the corridor end; give exit_time_s");
    }
    prof.exit_time_s = *t;
  }
  return prof;
}

ScenarioFile parse_root(const YAML::Node & root)
{
  const Field f(root, "", 1);
  if (!root.IsMap()) {
    f.fail("scenario must be a mapping");
  }
  f.allow(
    {"schema_version", "id", "description", "corridor", "routes", "vehicle", "safety",
     "tolerances", "planned_vehicles", "scheduler", "simulation", "arrivals", "streams", "signals", "fuel"});
  ScenarioFile out;
  if (f.has("schema_version") && f.at("schema_version").integer() != kScenarioSchemaVersion) {
    f.at("schema_version").fail("unsupported schema version");
  }
  auto & spec = out.spec;
  spec.id = f.at("id").text();
  if (f.has("description")) {
    out.description = f.at("description").text();
  }

  const Field cor = f.at("corridor");
  cor.allow({"length_m", "entry_position_m", "zones"});
  spec.corridor.length_m = cor.at("length_m").number();
  spec.corridor.entry_position_m = cor.number_or("entry_position_m", 0.0);
  for (const auto & z : cor.at("zones").items()) {
    z.allow({"id", "name", "position_m", "desired_speed_mps"});
    ConflictZone cz;
    cz.id = z.at("id").integer();
    cz.name = z.has("name") ? z.at("name").text() : "";
    cz.position_m = z.at("position_m").number();
    if (z.has("desired_speed_mps")) {
      cz.desired_speed_mps = z.at("desired_speed_mps").number();
    }
    spec.corridor.zones.push_back(cz);
  }

  if (const auto v = f.maybe("vehicle")) {
    read_vehicle_params(*v, spec.vehicle);
  }
  if (const auto s = f.maybe("safety")) {
    read_safety(*s, spec.safety);
  }
  if (const auto t = f.maybe("tolerances")) {
    t->allow({"residual", "margin_m", "junction_s", "oracle_steps"});
    spec.tolerances.residual = t->number_or("residual", spec.tolerances.residual);
    spec.tolerances.margin_m = t->number_or("margin_m", spec.tolerances.margin_m);
    spec.tolerances.junction_s = t->number_or("junction_s", spec.tolerances.junction_s);
    if (t->has("oracle_steps")) {
      spec.tolerances.oracle_steps = t->at("oracle_steps").integer();
    }
  }

  std::vector<Field> route_fields;
  for (const auto & r : f.at("routes").items()) {
    r.allow({"id", "zones", "merge_zone", "approach_length_m"});
    Route route;
    route.id = r.at("id").text();
    for (const auto & z : r.at("zones").items()) {
      route.zone_ids.push_back(z.integer());
    }
    if (r.has("merge_zone")) {
      route.merge_zone_id = r.at("merge_zone").integer();
      route.approach_length_m = r.at("approach_length_m").number();
    }
    spec.routes.push_back(route);
    route_fields.push_back(r);
  }

  // geometry must be sound before schedules can be mapped onto routes
  for (const auto & v : validate_scenario(spec)) {
    throw ParseError(v.field, v.message);
  }

  if (const auto pv = f.maybe("planned_vehicles")) {
    for (const auto & p : pv->items()) {
      p.allow({"id", "route", "entry", "waypoints", "terminal", "leader", "vehicle", "safety"});
      PlannedVehicle veh;
      veh.id = p.at("id").integer();
      veh.route_id = p.at("route").text();
      const Route * route = spec.find_route(veh.route_id);
      if (route == nullptr) {
        p.at("route").fail("unknown route " + veh.route_id);
      }
      veh.vehicle = spec.vehicle;
      veh.safety = spec.safety;
      if (const auto vp = p.maybe("vehicle")) {
        read_vehicle_params(*vp, veh.vehicle);
      }
      if (const auto sp = p.maybe("safety")) {
        read_safety(*sp, veh.safety);
      }
      const Field e = p.at("entry");
      e.allow({"time_s", "position_m", "speed_mps"});
      veh.schedule.entry = VehicleState{
        e.number_or("position_m", 0.0), e.at("speed_mps").number(), e.number_or("time_s", 0.0)};
      if (const auto ws = p.maybe("waypoints")) {
        for (const auto & w : ws->items()) {
          veh.schedule.waypoints.push_back(read_pin(w, *route, spec.corridor));
        }
      }
      veh.schedule.terminal = read_pin(p.at("terminal"), *route, spec.corridor);
      if (const auto l = p.maybe("leader")) {
        int lid = 0;
        veh.leader = read_leader(*l, route_length(*route, spec.corridor), &lid);
        out.leader_ids[veh.id] = lid;
      }
      spec.planned.push_back(veh);
    }
  }

  if (const auto sc = f.maybe("scheduler")) {
    sc->allow({"headway_s", "cruise_speed_mps", "desired_speeds"});
    out.scheduler.headway_s = sc->number_or("headway_s", out.scheduler.headway_s);
    out.scheduler.cruise_speed_mps = sc->number_or("cruise_speed_mps", 0.0);
    if (!(out.scheduler.headway_s > 0.0)) {
      sc->at("headway_s").fail("headway must be positive");
    }
    if (const auto ds = sc->maybe("desired_speeds")) {
      for (const auto & d : ds->items()) {
        d.allow({"zone", "speed_mps"});
        out.scheduler.desired_speeds_mps[d.at("zone").integer()] = d.at("speed_mps").number();
      }
    }
  }

  if (const auto sim = f.maybe("simulation")) {
    sim->allow(
      {"mode", "dt_s", "seed", "horizon_s", "entry_buffer_m", "merge_gap_s", "reschedule_step_s",
       "max_reschedules"});
    auto & s = out.simulation;
    if (sim->has("mode")) {
      try {
        s.mode = parse_sim_mode(sim->at("mode").text());
      } catch (const ContractError & err) {
        sim->at("mode").fail(err.what());
      }
    }
    s.dt_s = sim->number_or("dt_s", s.dt_s);
    if (sim->has("seed")) {
      s.seed = sim->at("seed").unsigned64();
    }
    s.horizon_s = sim->number_or("horizon_s", s.horizon_s);
    s.entry_buffer_m = sim->number_or("entry_buffer_m", s.entry_buffer_m);
    s.merge_gap_s = sim->number_or("merge_gap_s", s.merge_gap_s);
    s.reschedule_step_s = sim->number_or("reschedule_step_s", s.reschedule_step_s);
    if (sim->has("max_reschedules")) {
      s.max_reschedules = sim->at("max_reschedules").integer();
    }
    if (!(s.dt_s > 0.0)) {
      sim->at("dt_s").fail("time step must be positive");
    }
    if (!(s.horizon_s > 0.0)) {
      sim->at("horizon_s").fail("horizon must be positive");
    }
  }

  if (const auto arr = f.maybe("arrivals")) {
    for (const auto & a : arr->items()) {
      a.allow({"time_s", "route", "v0_mps"});
      spec.arrivals.push_back(
        ArrivalSpec{a.at("time_s").number(), a.at("route").text(), a.at("v0_mps").number()});
    }
  }
  if (const auto st = f.maybe("streams")) {
    for (const auto & s : st->items()) {
      s.allow({"route", "rate_vph", "v0_mps", "v0_jitter_mps", "count", "start_s"});
      ArrivalStream stream;
      stream.route_id = s.at("route").text();
      stream.rate_vph = s.at("rate_vph").number();
      stream.v0_mps = s.at("v0_mps").number();
      stream.v0_jitter_mps = s.number_or("v0_jitter_mps", 0.0);
      stream.count = s.at("count").integer();
      stream.start_s = s.number_or("start_s", 0.0);
      spec.streams.push_back(stream);
    }
  }

  if (const auto sg = f.maybe("signals")) {
    for (const auto & g : sg->items()) {
      g.allow({"zone", "cycle_s", "green_s", "offset_s"});
      SignalPlan plan;
      plan.zone_id = g.at("zone").integer();
      plan.cycle_s = g.at("cycle_s").number();
      plan.green_s = g.at("green_s").number();
      plan.offset_s = g.number_or("offset_s", 0.0);
      if (spec.corridor.find_zone(plan.zone_id) == nullptr) {
        g.at("zone").fail("unknown zone " + std::to_string(plan.zone_id));
      }
      if (!(plan.cycle_s > 0.0) || !(plan.green_s > 0.0) || plan.green_s > plan.cycle_s) {
        g.fail("need 0 < green_s <= cycle_s");
      }
      out.signals.push_back(plan);
    }
  }

  if (const auto fu = f.maybe("fuel")) {
    fu->allow({"source", "q", "r", "interval_s"});
    if (fu->has("source")) {
      out.fuel_source = fu->at("source").text();
    }
    auto coeffs = [](const Field & list, std::size_t n) {
      const auto items = list.items();
      if (items.size() != n) {
        list.fail("expected " + std::to_string(n) + " coefficients");
      }
      std::vector<double> c;
      for (const auto & i : items) {
        c.push_back(i.number());
      }
      return c;
    };
    auto & fc = out.metrics.fuel;
    if (fu->has("q")) {
      const auto q = coeffs(fu->at("q"), 4);
      fc.q0 = q[0];
      fc.q1 = q[1];
      fc.q2 = q[2];
      fc.q3 = q[3];
    }
    if (fu->has("r")) {
      const auto r = coeffs(fu->at("r"), 3);
      fc.r0 = r[0];
      fc.r1 = r[1];
      fc.r2 = r[2];
    }
    out.metrics.fuel_interval_s = fu->number_or("interval_s", out.metrics.fuel_interval_s);
    if (!(out.metrics.fuel_interval_s > 0.0)) {
      fu->at("interval_s").fail("fuel sampling interval must be positive");
    }
  }

  for (const auto & v : validate_scenario(spec)) {
    throw ParseError(v.field, v.message);
  }
  return out;
}

}  // namespace

std::optional<double> time_at_position(const LeaderProfile & profile, double position_m)
{
  for (std::size_t k = 0; k < profile.segments.size(); ++k) {
    const auto & s = profile.segments[k];
    const double t_end =
      k + 1 < profile.segments.size() ? profile.segments[k + 1].t_start_s
                                      : std::numeric_limits<double>::infinity();
    const double d = position_m - s.p_start_m;
    if (d <= 0.0) {
      return s.t_start_s;
    }
    // smallest tau >= 0 with v tau + a tau^2 / 2 = d
    double tau = std::numeric_limits<double>::infinity();
    if (std::abs(s.accel_mps2) < 1e-15) {
      if (s.v_start_mps > 0.0) {
        tau = d / s.v_start_mps;
      }
    } else {
      const double disc = s.v_start_mps * s.v_start_mps + 2.0 * s.accel_mps2 * d;
      if (disc >= 0.0) {
        const double r = std::sqrt(disc);
        const double t1 = (-s.v_start_mps + r) / s.accel_mps2;
        const double t2 = (-s.v_start_mps - r) / s.accel_mps2;
        for (double t : {t1, t2}) {
          if (t >= 0.0) {
            tau = std::min(tau, t);
          }
        }
      }
    }
    if (std::isfinite(tau) && s.t_start_s + tau <= t_end) {
      return s.t_start_s + tau;
    }
  }
  return std::nullopt;
}

ScenarioFile parse_scenario(const std::string & text)
{
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException & e) {
    throw ParseError("line " + std::to_string(e.mark.line + 1), e.msg);
  }
  try {
    return parse_root(root);
  } catch (const YAML::Exception & e) {
    throw ParseError("line " + std::to_string(e.mark.line + 1), e.msg);
  }
}

ScenarioFile load_scenario(const std::string & path)
{
  std::ifstream in(path);
  if (!in) {
    throw ParseError(path, "cannot open scenario file");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

RoutePlanProblem planned_problem(const ScenarioSpec & spec, const PlannedVehicle & vehicle)
{
  (void)spec;
  RoutePlanProblem p;
  p.vehicle_id = vehicle.id;
  p.schedule = vehicle.schedule;
  p.vehicle = vehicle.vehicle;
  if (vehicle.leader) {
    p.safety = SafetyContext{
      LeaderContext::single(std::make_shared<ProfileMotion>(*vehicle.leader)), vehicle.safety};
  }
  return p;
}

SimConfig make_sim_config(const ScenarioFile & file)
{
  SimConfig c;
  c.scenario = file.spec;
  c.mode = file.simulation.mode;
  c.dt_s = file.simulation.dt_s;
  c.seed = file.simulation.seed;
  c.horizon_s = file.simulation.horizon_s;
  c.scheduler = file.scheduler;
  c.entry_buffer_m = file.simulation.entry_buffer_m;
  c.merge_gap_s = file.simulation.merge_gap_s;
  c.reschedule_step_s = file.simulation.reschedule_step_s;
  c.max_reschedules = file.simulation.max_reschedules;
  c.signals = file.signals;
  return c;
}

}  // namespace corridor
