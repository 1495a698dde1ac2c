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

#include "corridor/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include "corridor/constraint.hpp"
#include "corridor/errors.hpp"
#include "corridor/margin.hpp"

namespace corridor
{
namespace
{
constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double x)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return buf;
}

void log_event(SimState & s, double t, int id, std::string kind, std::string detail = {})
{
  s.log.push_back(SimEvent{t, id, std::move(kind), std::move(detail)});
}

const Route & route_of(const SimConfig & config, const std::string & route_id)
{
  const Route * r = config.scenario.find_route(route_id);
  if (r == nullptr) {
    throw ContractError("unknown route " + route_id);
  }
  return *r;
}

bool on_ramp(const SimVehicle & v) { return v.ramp && v.state.position_m < v.merge_position_m; }

struct Ahead
{
  double gap_m{kInf};
  double speed_mps{0.0};
  int id{0};
};

/// Nearest vehicle ahead on the path of a vehicle at corridor position x.
/// Ramp vehicles see their own lane plus mainline traffic already past the merge point.
std::optional<Ahead> nearest_ahead(
  const SimState & s, int self_id, const std::string & lane, bool self_on_ramp, double x,
  double merge_x)
{
  std::optional<Ahead> best;
  for (const auto & o : s.vehicles) {
    if (!o.active() || o.id == self_id) {
      continue;
    }
    const double xo = o.corridor_position();
    bool on_path = false;
    if (on_ramp(o)) {
      on_path = self_on_ramp && o.lane == lane;
    } else {
      on_path = self_on_ramp ? xo >= merge_x : true;
    }
    if (!on_path) {
      continue;
    }
    const bool ahead = xo > x || (xo == x && o.id < self_id);
    if (!ahead) {
      continue;
    }
    const double gap = xo - x;
    if (!best || gap < best->gap_m) {
      best = Ahead{gap, o.state.speed_mps, o.id};
    }
  }
  return best;
}

std::optional<Ahead> nearest_ahead(const SimState & s, const SimVehicle & v)
{
  return nearest_ahead(
    s, v.id, v.lane, on_ramp(v), v.corridor_position(), v.merge_position_m + v.offset_m);
}

double physical_margin(const SimState & s, const SimVehicle & v, const SafetyParams & sp)
{
  const auto a = nearest_ahead(s, v);
  if (!a) {
    return kInf;
  }
  return sp.xi * a->gap_m - (sp.gamma_m + sp.rho_s * v.state.speed_mps);
}

double crossing_time(const ScheduleAssignment & s, int zone_id)
{
  for (const auto & w : s.waypoints) {
    if (w.zone_id == zone_id) {
      return w.time_s;
    }
  }
  if (s.terminal.zone_id == zone_id) {
    return s.terminal.time_s;
  }
  throw ContractError("zone not on schedule");
}

/// First zone of `route` that `other` also visits.
std::optional<int> first_common_zone(const Route & route, const Route & other)
{
  for (int z : route.zone_ids) {
    if (std::find(other.zone_ids.begin(), other.zone_ids.end(), z) != other.zone_ids.end()) {
      return z;
    }
  }
  return std::nullopt;
}

std::optional<double> last_desired_speed(
  const SimVehicle & v, const Route & route, const FifoScheduler & sched)
{
  std::optional<double> out;
  for (std::size_t k = 0; k < v.zone_crossings_s.size() && k < route.zone_ids.size(); ++k) {
    if (auto d = sched.desired_speed(route.zone_ids[k])) {
      out = d;
    }
  }
  return out;
}

void plan_vehicle(SimState & s, const SimConfig & config, SimVehicle & v, const Route & route)
{
  double delay = 0.0;
  std::string last_error;
  double last_time = v.entry_time_s;
  for (int attempt = 0; attempt <= config.max_reschedules; ++attempt) {
    ScheduleAssignment sched = s.scheduler->propose(route, v.state, delay);
    RoutePlanProblem problem;
    problem.vehicle_id = v.id;
    problem.schedule = sched;
    problem.vehicle = config.scenario.vehicle;
    LeaderContext leaders = planning_leaders(s, config, route, v.entry_time_s);
    if (!leaders.empty()) {
      problem.safety = SafetyContext{std::move(leaders), config.scenario.safety};
    }
    try {
      Trajectory traj = solve_route(problem);
      s.scheduler->commit(route, sched);
      v.schedule = sched;
      std::string times;
      for (const auto & w : sched.waypoints) {
        times += (times.empty() ? "" : " ") + std::to_string(w.zone_id) + "@" + fmt(w.time_s);
      }
      times += (times.empty() ? "" : " ") + std::to_string(sched.terminal.zone_id) + "@" +
               fmt(sched.terminal.time_s);
      log_event(s, s.clock_s, v.id, "schedule", times);
      std::string detail = "cost=" + fmt(traj.cost());
      for (const auto & [a, b] : traj.constrained_windows()) {
        detail += " window=[" + fmt(a) + "," + fmt(b) + "]";
      }
      log_event(s, s.clock_s, v.id, "plan", detail);
      v.plan = std::make_shared<const Trajectory>(std::move(traj));
      return;
    } catch (const InfeasibleError & e) {
      last_error = e.what();
      last_time = e.time_s();
    } catch (const SolverError & e) {
      last_error = e.what();
    }
    delay += config.reschedule_step_s;
    log_event(s, s.clock_s, v.id, "reschedule", "delay=" + fmt(delay));
  }
  throw InfeasibleError(v.id, last_time, last_error);
}

bool entry_clear(
  const SimState & s, const SimConfig & config, const Route & route, const std::string & lane,
  double v0)
{
  const double offset = route_offset(route, config.scenario.corridor);
  const bool ramp = route.merge_zone_id.has_value();
  const double merge_x = ramp ? offset + route.approach_length_m : 0.0;
  const auto a = nearest_ahead(s, -1, lane, ramp, offset, merge_x);
  if (!a) {
    return true;
  }
  const auto & sp = config.scenario.safety;
  return sp.xi * a->gap_m - (sp.gamma_m + sp.rho_s * v0) >= config.entry_buffer_m;
}

void admit(SimState & s, const SimConfig & config)
{
  const double now = s.clock_s;
  while (!s.upcoming.empty() && s.upcoming.front().time_s <= now + 1e-9) {
    PendingArrival a = s.upcoming.front();
    s.upcoming.pop_front();
    const Route & route = route_of(config, a.route_id);
    s.waiting[route.entry_lane()].push_back(a);
  }
  for (auto & [lane, queue] : s.waiting) {
    if (queue.empty()) {
      continue;
    }
    const PendingArrival a = queue.front();
    const Route & route = route_of(config, a.route_id);
    if (!entry_clear(s, config, route, lane, a.v0_mps)) {
      continue;
    }
    queue.pop_front();
    SimVehicle v;
    v.id = static_cast<int>(s.vehicles.size()) + 1;
    v.route_id = route.id;
    v.lane = lane;
    v.offset_m = route_offset(route, config.scenario.corridor);
    v.length_m = route_length(route, config.scenario.corridor);
    v.ramp = route.merge_zone_id.has_value();
    v.merge_position_m = v.ramp ? route.approach_length_m : 0.0;
    v.entry_time_s = now;
    v.v0_mps = a.v0_mps;
    v.state = VehicleState{0.0, a.v0_mps, now};
    log_event(
      s, now, v.id, "enter",
      "route=" + route.id + " v0=" + fmt(a.v0_mps) + " arrival=" + fmt(a.time_s));
    if (config.mode == SimMode::kOptimal) {
      plan_vehicle(s, config, v, route);
    } else {
      v.schedule = s.scheduler->assign(route, v.state);
    }
    s.vehicles.push_back(std::move(v));
  }
}

double idm_for(const SimState & s, const SimConfig & config, SimVehicle & v, const Route & route)
{
  IdmParams p;
  p.desired_speed_mps = last_desired_speed(v, route, *s.scheduler).value_or(v.v0_mps);
  p.time_headway_s = config.scenario.safety.rho_s;
  p.min_gap_m = config.scenario.safety.gamma_m;
  p.max_accel_mps2 = config.idm_max_accel_mps2;
  p.comfort_decel_mps2 = config.idm_comfort_decel_mps2;
  p.u_min_mps2 = config.scenario.vehicle.u_min_mps2;
  p.u_max_mps2 = config.scenario.vehicle.u_max_mps2;

  std::optional<LeaderObservation> lead;
  if (const auto a = nearest_ahead(s, v)) {
    lead = LeaderObservation{a->gap_m, a->speed_mps};
  }
  for (const auto & sig : config.signals) {
    const auto it = std::find(route.zone_ids.begin(), route.zone_ids.end(), sig.zone_id);
    const auto k = static_cast<std::size_t>(it - route.zone_ids.begin());
    if (it == route.zone_ids.end() || k < v.zone_crossings_s.size() || sig.green_at(s.clock_s)) {
      continue;
    }
    // stop at a red light unless already too close to brake for it
    const double d = zone_position_on_route(route, config.scenario.corridor, sig.zone_id) -
                     v.state.position_m;
    const double braking = v.state.speed_mps * v.state.speed_mps / (2.0 * -p.u_min_mps2);
    if (d > braking && (!lead || d < lead->gap_m)) {
      lead = LeaderObservation{d, 0.0};
    }
  }
  if (on_ramp(v) && !v.merge_committed) {
    // gap acceptance: predicted mainline positions when this vehicle reaches the merge point
    const double x = v.corridor_position();
    const double xm = v.merge_position_m + v.offset_m;
    const double tau = (xm - x) / std::max(v.state.speed_mps, 1.0);
    bool clear = true;
    for (const auto & o : s.vehicles) {
      if (!o.active() || on_ramp(o) || o.id == v.id) {
        continue;
      }
      const double d = o.corridor_position() + o.state.speed_mps * tau - xm;
      if (d < config.merge_gap_s * v.state.speed_mps && d > -config.merge_gap_s * o.state.speed_mps) {
        clear = false;
        break;
      }
    }
    if (clear && xm - x < 2.0 * v.state.speed_mps + config.scenario.safety.gamma_m) {
      v.merge_committed = true;
    }
    if (!clear && (!lead || xm - x < lead->gap_m)) {
      lead = LeaderObservation{xm - x, 0.0};
    }
  }
  return baseline_accel(v.state, lead, p);
}

void record_crossings(SimVehicle & v, const Route & route, const CorridorSpec & corridor, double t0,
                      double p0, double t1, double p1)
{
  while (v.zone_crossings_s.size() < route.zone_ids.size()) {
    const double zp = zone_position_on_route(route, corridor, route.zone_ids[v.zone_crossings_s.size()]);
    if (p1 < zp - 1e-9) {
      break;
    }
    const double frac = p1 > p0 ? std::clamp((zp - p0) / (p1 - p0), 0.0, 1.0) : 1.0;
    v.zone_crossings_s.push_back(t0 + frac * (t1 - t0));
  }
}

}  // namespace

const char * to_string(SimMode mode)
{
  return mode == SimMode::kOptimal ? "optimal" : "baseline";
}

SimMode parse_sim_mode(const std::string & text)
{
  if (text == "optimal") {
    return SimMode::kOptimal;
  }
  if (text == "baseline") {
    return SimMode::kBaseline;
  }
  throw ContractError("unknown mode '" + text + "' (expected optimal or baseline)");
}

double baseline_accel(
  const VehicleState & state, const std::optional<LeaderObservation> & leader,
  const IdmParams & params)
{
  const double v = std::max(0.0, state.speed_mps);
  const double v0 = std::max(params.desired_speed_mps, 1e-3);
  double a = params.max_accel_mps2 * (1.0 - std::pow(v / v0, params.exponent));
  if (leader) {
    if (leader->gap_m <= 0.0) {
      return params.u_min_mps2;
    }
    const double dv = v - leader->speed_mps;
    const double s_star = params.min_gap_m + std::max(
      0.0, v * params.time_headway_s +
             v * dv / (2.0 * std::sqrt(params.max_accel_mps2 * params.comfort_decel_mps2)));
    const double r = s_star / leader->gap_m;
    a -= params.max_accel_mps2 * r * r;
  }
  return std::clamp(a, params.u_min_mps2, params.u_max_mps2);
}

bool SignalPlan::green_at(double t_s) const
{
  const double phase = std::fmod(t_s - offset_s, cycle_s);
  const double x = phase < 0.0 ? phase + cycle_s : phase;
  return x < green_s;
}

bool SimState::finished() const
{
  if (!upcoming.empty()) {
    return false;
  }
  for (const auto & [lane, q] : waiting) {
    if (!q.empty()) {
      return false;
    }
  }
  return std::none_of(vehicles.begin(), vehicles.end(), [](const SimVehicle & v) { return v.active(); });
}

std::vector<PendingArrival> generate_arrivals(const ScenarioSpec & scenario, std::uint64_t seed)
{
  std::vector<PendingArrival> out;
  for (const auto & a : scenario.arrivals) {
    out.push_back(PendingArrival{a.time_s, a.route_id, a.v0_mps});
  }
  std::mt19937_64 rng(seed);
  auto uniform = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  for (const auto & st : scenario.streams) {
    double t = st.start_s;
    const double rate = st.rate_vph / 3600.0;
    for (int k = 0; k < st.count; ++k) {
      t += -std::log(1.0 - uniform()) / rate;
      const double v0 = st.v0_mps + st.v0_jitter_mps * (2.0 * uniform() - 1.0);
      out.push_back(PendingArrival{t, st.route_id, v0});
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const PendingArrival & a, const PendingArrival & b) {
    return a.time_s < b.time_s;
  });
  return out;
}

SimState initial_state(const SimConfig & config)
{
  if (!(config.dt_s > 0.0) || !(config.horizon_s > 0.0)) {
    throw ContractError("time step and horizon must be positive");
  }
  SimState s;
  for (const auto & a : generate_arrivals(config.scenario, config.seed)) {
    s.upcoming.push_back(a);
  }
  s.scheduler.emplace(config.scenario.corridor, config.scheduler);
  return s;
}

LeaderContext planning_leaders(
  const SimState & state, const SimConfig & config, const Route & route, double now_s)
{
  const double own_offset = route_offset(route, config.scenario.corridor);
  const std::string lane = route.entry_lane();
  struct Candidate
  {
    std::size_t index;
    double from;
    double to;
  };
  std::vector<Candidate> cands;
  for (std::size_t k = 0; k < state.vehicles.size(); ++k) {
    const auto & o = state.vehicles[k];
    if (!o.plan || o.plan->t_end() <= now_s) {
      continue;
    }
    double from = 0.0;
    if (o.lane == lane) {
      from = o.entry_time_s;
    } else {
      const Route & other = route_of(config, o.route_id);
      const auto z = first_common_zone(route, other);
      if (!z) {
        continue;
      }
      from = crossing_time(o.schedule, *z);
    }
    const double to = o.plan->t_end();
    if (to > from) {
      cands.push_back(Candidate{k, from, to});
    }
  }
  std::set<double> cuts;
  for (const auto & c : cands) {
    cuts.insert(c.from);
    cuts.insert(c.to);
  }
  std::vector<LeaderWindow> windows;
  const std::vector<double> t(cuts.begin(), cuts.end());
  for (std::size_t k = 0; k + 1 < t.size(); ++k) {
    const double a = t[k];
    const double b = t[k + 1];
    const Candidate * lead = nullptr;
    for (const auto & c : cands) {
      if (c.from <= a && a < c.to && (lead == nullptr || c.index > lead->index)) {
        lead = &c;
      }
    }
    if (lead == nullptr) {
      continue;
    }
    const auto & o = state.vehicles[lead->index];
    if (!windows.empty() && windows.back().leader_id == o.id && windows.back().t_to_s == a) {
      windows.back().t_to_s = b;
      continue;
    }
    LeaderWindow w;
    w.t_from_s = a;
    w.t_to_s = b;
    w.leader = o.plan;
    w.offset_m = o.offset_m - own_offset;
    w.leader_id = o.id;
    windows.push_back(w);
  }
  return LeaderContext(std::move(windows));
}

void step(SimState & s, const SimConfig & config)
{
  if (!s.scheduler) {
    throw ContractError("simulation state was not initialised");
  }
  admit(s, config);
  const double now = s.clock_s;
  const double next = static_cast<double>(s.step_index + 1) * config.dt_s;
  const auto & sp = config.scenario.safety;

  // controls from the state at `now`, applied synchronously
  for (auto & v : s.vehicles) {
    if (!v.active()) {
      continue;
    }
    const Route & route = route_of(config, v.route_id);
    if (config.mode == SimMode::kOptimal) {
      v.accel_mps2 = v.plan->sample(std::min(now, v.plan->t_end())).u;
    } else {
      v.accel_mps2 = idm_for(s, config, v, route);
    }
  }
  for (const auto & v : s.vehicles) {
    if (v.active()) {
      s.samples.push_back(SimSample{
        v.id, now, v.state.position_m, v.state.speed_mps, v.accel_mps2, physical_margin(s, v, sp)});
    }
  }
  for (auto & v : s.vehicles) {
    if (!v.active()) {
      continue;
    }
    const Route & route = route_of(config, v.route_id);
    const double p0 = v.state.position_m;
    if (config.mode == SimMode::kOptimal) {
      const double t_end = v.plan->t_end();
      const double t = std::min(next, t_end);
      const auto k = v.plan->sample(t);
      v.state = VehicleState{k.p, k.v, t};
      record_crossings(v, route, config.scenario.corridor, now, p0, t, k.p);
      if (next >= t_end - 1e-9) {
        v.exit_time_s = t_end;
        log_event(s, t_end, v.id, "exit", "travel_time=" + fmt(t_end - v.entry_time_s));
      }
    } else {
      const double dt = next - now;
      const double v1 = std::max(0.0, v.state.speed_mps + v.accel_mps2 * dt);
      v.accel_mps2 = (v1 - v.state.speed_mps) / dt;
      const double p1 = p0 + 0.5 * (v.state.speed_mps + v1) * dt;
      // the recorded control is the one actually realised over the step
      if (!s.samples.empty()) {
        for (auto it = s.samples.rbegin(); it != s.samples.rend() && it->t_s == now; ++it) {
          if (it->vehicle_id == v.id) {
            it->u_mps2 = v.accel_mps2;
            break;
          }
        }
      }
      v.state = VehicleState{p1, v1, next};
      record_crossings(v, route, config.scenario.corridor, now, p0, next, p1);
      if (p1 >= v.length_m) {
        const double frac = p1 > p0 ? (v.length_m - p0) / (p1 - p0) : 1.0;
        const double t_exit = now + frac * dt;
        v.exit_time_s = t_exit;
        log_event(s, t_exit, v.id, "exit", "travel_time=" + fmt(t_exit - v.entry_time_s));
      }
    }
  }
  ++s.step_index;
  s.clock_s = next;
}

SimState run_simulation(const SimConfig & config)
{
  SimState s = initial_state(config);
  while (!s.finished() && s.clock_s < config.horizon_s) {
    step(s, config);
  }
  return s;
}

std::string format_event_log(const std::vector<SimEvent> & log)
{
  std::ostringstream out;
  for (const auto & e : log) {
    out << fmt(e.t_s) << ' ' << e.vehicle_id << ' ' << e.kind;
    if (!e.detail.empty()) {
      out << ' ' << e.detail;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace corridor
