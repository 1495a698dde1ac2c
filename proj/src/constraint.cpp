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

#include "corridor/constraint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

#include "corridor/errors.hpp"
#include "corridor/margin.hpp"

namespace corridor
{
namespace
{
constexpr double kInf = std::numeric_limits<double>::infinity();

/// Schedule knots plus margin touches, sorted.
std::vector<double> problem_knots(const RoutePlanProblem & problem)
{
  auto knots = problem.schedule.knot_times();
  for (const auto & t : problem.touches) {
    knots.push_back(t.time_s);
  }
  std::sort(knots.begin(), knots.end());
  return knots;
}

struct Candidate
{
  double cost{kInf};
  bool local_ok{false};   // safe up to the end of the search interval
  bool global_ok{false};  // safe up to the terminal time
};

/// Everything fixed while one window is being placed.
class WindowSearch
{
public:
  WindowSearch(
    const RoutePlanProblem & problem, const JunctionSearchOptions & options, double t_violation)
  : problem_(problem), options_(options), leaders_(problem.safety->leaders),
    params_(problem.safety->params)
  {
    const auto knots = problem_knots(problem);
    t0_ = knots.front();
    tf_ = knots.back();
    a_ = t0_;
    b_ = tf_;
    for (double k : knots) {
      if (k < t_violation) {
        a_ = k;
      } else {
        b_ = k;
        break;
      }
    }
    window_ = leaders_.window_at(t_violation);
    if (window_ == nullptr) {
      // the violation sits exactly on a window's closing instant
      window_ = leaders_.window_at(t_violation - 1e-9);
    }
    if (window_ == nullptr) {
      throw SolverError("margin violation without a leader");
    }
    lo_ = std::max(a_, window_->present_from());
    hi_ = std::min(b_, window_->present_to());
    const bool hi_is_knot = hi_ >= b_;
    hi2_ = hi_is_knot ? hi_ - options_.edge_s : hi_;
    lo1_ = lo_ + options_.edge_s;
    if (hi_is_knot) {
      // riding the constraint into a knot that pins position only
      for (const auto & w : problem.schedule.waypoints) {
        if (w.time_s == b_ && !w.speed_mps) {
          ride_pin_m_ = w.position_m;
        }
      }
      const auto & term = problem.schedule.terminal;
      if (term.time_s == b_ && !term.speed_mps) {
        ride_pin_m_ = term.position_m;
      }
    }
  }

  bool valid() const { return hi2_ > lo1_; }

  bool inside(double t1, double t2) const { return t1 >= lo1_ && t2 > t1 && t2 <= hi2_; }

  std::vector<PolynomialArc> left_arcs(double t1) const
  {
    ArcChainSpec spec;
    spec.t0_s = t0_;
    spec.initial = initial_state_conditions(
      problem_.schedule.entry.position_m, problem_.schedule.entry.speed_mps);
    for (const auto & w : problem_.schedule.waypoints) {
      if (w.time_s < t1) {
        spec.junctions.push_back(ChainJunction{w.time_s, w.position_m, w.speed_mps, std::nullopt});
      }
    }
    for (const auto & t : problem_.touches) {
      if (t.time_s < t1) {
        spec.junctions.push_back(ChainJunction{t.time_s, 0.0, std::nullopt, t.condition});
      }
    }
    std::stable_sort(
      spec.junctions.begin(), spec.junctions.end(),
      [](const ChainJunction & x, const ChainJunction & y) { return x.time_s < y.time_s; });
    spec.tf_s = t1;
    const auto lead = leaders_.leader_at(t1);
    if (!lead) {
      throw SolverError("no leader at constrained-window entry");
    }
    spec.terminal = {
      LinearCondition{params_.xi, params_.rho_s, 0.0, params_.xi * lead->p - params_.gamma_m},
      LinearCondition{0.0, params_.xi, params_.rho_s, params_.xi * lead->v}};
    return solve_arc_chain(spec);
  }

  RoutePlanProblem right_problem(double t2, const KinematicSample & at_t2) const
  {
    RoutePlanProblem right = problem_;
    right.schedule.entry = VehicleState{at_t2.p, at_t2.v, t2};
    right.schedule.waypoints.clear();
    for (const auto & w : problem_.schedule.waypoints) {
      if (w.time_s > t2) {
        right.schedule.waypoints.push_back(w);
      }
    }
    right.touches.clear();
    for (const auto & t : problem_.touches) {
      if (t.time_s > t2) {
        right.touches.push_back(t);
      }
    }
    return right;
  }

  Candidate evaluate(double t1, double t2) const
  {
    Candidate out;
    if (!inside(t1, t2)) {
      return out;
    }
    try {
      const auto left = left_arcs(t1);
      Trajectory left_traj;
      double cost = 0.0;
      for (const auto & arc : left) {
        left_traj.append(arc);
        cost += arc_cost(arc);
      }
      if (min_margin(left_traj, leaders_, params_, t0_, t1).margin_m < -options_.feasibility_m) {
        return out;
      }
      const auto seg =
        ConstrainedSegment::follow(*window_, params_, t1, left.back().at(t1).v, t2);
      cost += seg.cost();
      const auto right = right_problem(t2, seg.sample(t2));
      Trajectory right_traj = solve_interior_bvp(right);
      cost += right_traj.cost();
      const double local = min_margin(right_traj, leaders_, params_, t2, hi_).margin_m;
      if (local < -options_.feasibility_m) {
        return out;
      }
      out.cost = cost;
      out.local_ok = true;
      out.global_ok =
        min_margin(right_traj, leaders_, params_, t2, tf_).margin_m >= -options_.feasibility_m;
    } catch (const SolverError &) {
      return Candidate{};
    } catch (const ContractError &) {
      return Candidate{};
    }
    return out;
  }

  /// Grid scan followed by compass refinement; `strict` demands global safety of the tail.
  std::optional<std::pair<double, double>> optimize(bool strict) const
  {
    auto ok = [strict](const Candidate & c) { return strict ? c.global_ok : c.local_ok; };
    const int n = options_.grid;
    double best = kInf;
    double bt1 = 0.0;
    double bt2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double t1 = lo1_ + (hi2_ - lo1_) * i / n;
      for (int j = 1; j <= n; ++j) {
        const double t2 = t1 + (hi2_ - t1) * j / n;
        const Candidate c = evaluate(t1, t2);
        if (ok(c) && c.cost < best) {
          best = c.cost;
          bt1 = t1;
          bt2 = t2;
        }
      }
    }
    if (!std::isfinite(best)) {
      return std::nullopt;
    }
    double h1 = (hi2_ - lo1_) / n;
    double h2 = h1;
    static constexpr int kDirs[6][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, -1}};
    for (int it = 0; it < 2000 && std::max(h1, h2) > options_.time_tol_s; ++it) {
      double nb = best;
      double nt1 = bt1;
      double nt2 = bt2;
      for (const auto & d : kDirs) {
        double t1 = bt1 + d[0] * h1;
        double t2 = bt2 + d[1] * h2;
        // snap to the admissible edge so optima on the boundary are reachable
        t2 = std::min(t2, hi2_);
        t1 = std::max(t1, lo1_);
        const Candidate c = evaluate(t1, t2);
        if (ok(c) && c.cost < nb - 1e-15) {
          nb = c.cost;
          nt1 = t1;
          nt2 = t2;
        }
      }
      if (nb < best) {
        best = nb;
        bt1 = nt1;
        bt2 = nt2;
      } else {
        h1 *= 0.5;
        h2 *= 0.5;
      }
    }
    return std::make_pair(bt1, bt2);
  }

  /// Entry time of a window that rides the constraint up to the next knot and meets its
  /// position pin there, cheapest first; nullopt when there is none.
  std::optional<double> ride_to_knot() const
  {
    if (!ride_pin_m_ || !(hi2_ > lo1_)) {
      return std::nullopt;
    }
    auto miss = [&](double t1) -> std::optional<double> {
      try {
        const auto left = left_arcs(t1);
        const auto seg = ConstrainedSegment::follow(*window_, params_, t1, left.back().at(t1).v, b_);
        return seg.sample(b_).p - *ride_pin_m_;
      } catch (const SolverError &) {
      } catch (const ContractError &) {
      }
      return std::nullopt;
    };
    const int n = 2 * options_.grid;
    std::optional<double> best;
    double best_cost = kInf;
    std::optional<double> prev = miss(lo1_);
    double t_prev = lo1_;
    for (int i = 1; i <= n; ++i) {
      const double t = lo1_ + (hi2_ - lo1_) * i / n;
      const auto cur = miss(t);
      if (prev && cur && (*prev > 0.0) != (*cur > 0.0)) {
        double a = t_prev;
        double b = t;
        double fa = *prev;
        for (int it = 0; it < 80 && b - a > 1e-13; ++it) {
          const double m = 0.5 * (a + b);
          const auto fm = miss(m);
          if (!fm) {
            break;
          }
          if ((*fm > 0.0) == (fa > 0.0)) {
            a = m;
            fa = *fm;
          } else {
            b = m;
          }
        }
        const double t1 = 0.5 * (a + b);
        const double c = ride_cost(t1);
        if (c < best_cost) {
          best_cost = c;
          best = t1;
        }
      }
      prev = cur;
      t_prev = t;
    }
    return best;
  }

  /// Left chain plus a constrained segment up to the knot, and the tail problem past it (none
  /// when the knot is the terminal).
  std::pair<Trajectory, std::optional<RoutePlanProblem>> build_ride(double t1) const
  {
    Trajectory head;
    const auto left = left_arcs(t1);
    for (const auto & arc : left) {
      head.append(arc);
    }
    const auto seg = ConstrainedSegment::follow(*window_, params_, t1, left.back().at(t1).v, b_);
    head.append(seg);
    if (b_ >= tf_) {
      return {head, std::nullopt};
    }
    return {head, right_problem(b_, seg.sample(b_))};
  }

  /// Left chain plus constrained segment over [t0, t2], and the tail problem from t2.
  std::pair<Trajectory, RoutePlanProblem> build(double t1, double t2) const
  {
    Trajectory head;
    const auto left = left_arcs(t1);
    for (const auto & arc : left) {
      head.append(arc);
    }
    const auto seg = ConstrainedSegment::follow(*window_, params_, t1, left.back().at(t1).v, t2);
    head.append(seg);
    return {head, right_problem(t2, seg.sample(t2))};
  }

private:
  /// Cost of the ride candidate up to the knot, +inf when the left chain breaks the margin.
  double ride_cost(double t1) const
  {
    try {
      const auto left = left_arcs(t1);
      Trajectory left_traj;
      double cost = 0.0;
      for (const auto & arc : left) {
        left_traj.append(arc);
        cost += arc_cost(arc);
      }
      if (min_margin(left_traj, leaders_, params_, t0_, t1).margin_m < -options_.feasibility_m) {
        return kInf;
      }
      return cost + ConstrainedSegment::follow(*window_, params_, t1, left.back().at(t1).v, b_).cost();
    } catch (const SolverError &) {
    } catch (const ContractError &) {
    }
    return kInf;
  }

  const RoutePlanProblem & problem_;
  JunctionSearchOptions options_;
  const LeaderContext & leaders_;
  SafetyParams params_;
  const LeaderWindow * window_{nullptr};
  double t0_{0.0};
  double tf_{0.0};
  double a_{0.0};
  double b_{0.0};
  double lo_{0.0};
  double hi_{0.0};
  double lo1_{0.0};
  double hi2_{0.0};
  std::optional<double> ride_pin_m_;
};

Trajectory piece(const RoutePlanProblem & problem, const JunctionSearchOptions & options, int depth)
{
  Trajectory free = solve_interior_bvp(problem);
  const auto & safety = *problem.safety;
  const double t0 = free.t_begin();
  const double tf = free.t_end();
  const auto tv =
    first_violation(free, safety.leaders, safety.params, t0, tf, options.feasibility_m);
  if (!tv) {
    return free;
  }
  auto infeasible = [&](double t, const std::string & why) {
    return InfeasibleError(
      problem.vehicle_id, t,
      "vehicle " + std::to_string(problem.vehicle_id) + " infeasible at t=" + std::to_string(t) +
        ": " + why);
  };
  if (*tv <= t0 + 1e-9) {
    throw infeasible(*tv, "rear-end margin negative at entry");
  }
  if (depth >= options.max_windows) {
    throw infeasible(*tv, "too many constrained windows");
  }
  const WindowSearch search(problem, options, *tv);
  if (!search.valid()) {
    throw infeasible(*tv, "no room for a constrained window");
  }

  std::optional<Trajectory> best;
  auto consider = [&](Trajectory t) {
    if (!best || t.cost() < best->cost()) {
      best = std::move(t);
    }
  };
  const auto strict = search.optimize(true);
  if (strict) {
    auto [head, tail] = search.build(strict->first, strict->second);
    head.append(solve_interior_bvp(tail));
    consider(std::move(head));
  }
  const auto relaxed = search.optimize(false);
  if (relaxed && (!strict || relaxed->first != strict->first || relaxed->second != strict->second)) {
    try {
      auto [head, tail] = search.build(relaxed->first, relaxed->second);
      head.append(piece(tail, options, depth + 1));
      consider(std::move(head));
    } catch (const InfeasibleError &) {
      if (!best) {
        throw;
      }
    }
  }
  if (const auto t1 = search.ride_to_knot()) {
    try {
      auto [head, tail] = search.build_ride(*t1);
      if (tail) {
        head.append(piece(*tail, options, depth + 1));
      }
      consider(std::move(head));
    } catch (const InfeasibleError &) {
    } catch (const SolverError &) {
    }
  }
  if (!best) {
    throw infeasible(*tv, "no constrained window restores the margin");
  }
  return *best;
}

/// Copies of `problem` with one more point where the margin is held at zero: a leader's exit
/// between knots, or a waypoint or terminal whose speed is still free.
std::vector<RoutePlanProblem> touch_variants(const RoutePlanProblem & problem, double edge_s)
{
  std::vector<RoutePlanProblem> out;
  const auto & s = *problem.safety;
  const auto knots = problem_knots(problem);
  auto zero_margin_speed = [&](double t, double p) -> std::optional<double> {
    const auto lead = s.leaders.leader_at(t);
    if (!lead) {
      return std::nullopt;
    }
    return (s.params.xi * (lead->p - p) - s.params.gamma_m) / s.params.rho_s;
  };
  for (std::size_t k = 0; k < problem.schedule.waypoints.size(); ++k) {
    const auto & w = problem.schedule.waypoints[k];
    const auto v = zero_margin_speed(w.time_s, w.position_m);
    if (!w.speed_mps && v && *v > 0.0) {
      out.push_back(problem);
      out.back().schedule.waypoints[k].speed_mps = *v;
    }
  }
  const auto & term = problem.schedule.terminal;
  if (const auto v = zero_margin_speed(term.time_s, term.position_m);
      !term.speed_mps && v && *v > 0.0) {
    out.push_back(problem);
    out.back().schedule.terminal.speed_mps = *v;
  }
  for (const auto & w : s.leaders.windows()) {
    const double te = w.present_to();
    if (!(te > knots.front() + edge_s && te < knots.back() - edge_s)) {
      continue;
    }
    const bool is_knot = std::any_of(
      knots.begin(), knots.end(), [&](double k) { return std::abs(k - te) < edge_s; });
    const auto lead = s.leaders.leader_at(te);
    if (is_knot || !lead) {
      continue;
    }
    out.push_back(problem);
    out.back().touches.push_back(MarginTouch{
      te, LinearCondition{s.params.xi, s.params.rho_s, 0.0, s.params.xi * lead->p - s.params.gamma_m}});
  }
  return out;
}

}  // namespace

double constrained_control(double leader_speed_mps, double speed_mps, const SafetyParams & params)
{
  if (!(params.rho_s > 0.0)) {
    throw std::domain_error("constrained_control: time gap must be positive");
  }
  return params.xi / params.rho_s * (leader_speed_mps - speed_mps);
}

double constrained_control(
  const LeaderProfile & leader, const VehicleState & state, const SafetyParams & params)
{
  return constrained_control(leader_state_at(leader, state.time_s).speed_mps, state.speed_mps, params);
}

ConstrainedSolution solve_constrained(
  const RoutePlanProblem & problem, const JunctionSearchOptions & options)
{
  if (!problem.safety || problem.safety->leaders.empty()) {
    throw ContractError("solve_constrained: problem has no leader");
  }
  ConstrainedSolution out;
  out.trajectory = piece(problem, options, 0);
  out.windows = junction_reports(out.trajectory, problem.safety->leaders, problem.safety->params);
  return out;
}

Trajectory solve_with_safety(const RoutePlanProblem & problem, double margin_tol_m)
{
  if (!problem.safety || problem.safety->leaders.empty()) {
    return solve_interior_bvp(problem);
  }
  const JunctionSearchOptions options;
  const auto & s = *problem.safety;
  std::optional<Trajectory> traj;
  std::optional<InfeasibleError> failure;
  try {
    traj = piece(problem, options, 0);
  } catch (const InfeasibleError & e) {
    failure = e;
  }
  const bool constrained =
    !traj || std::any_of(traj->segments().begin(), traj->segments().end(), [](const auto & seg) {
      return std::holds_alternative<ConstrainedSegment>(seg);
    });

  // Windows are placed one at a time, so a margin that only closes at an instant (a leader
  // leaving, a waypoint, the terminal time) ends up as a tangential window. Try point touches
  // at those instants and keep whatever safe solution is cheapest.
  RoutePlanProblem base = problem;
  for (int round = 0; constrained && round < 4; ++round) {
    std::optional<std::pair<Trajectory, RoutePlanProblem>> improved;
    for (const auto & variant : touch_variants(base, options.edge_s)) {
      try {
        Trajectory t = piece(variant, options, 0);
        const double worst = min_margin(t, s.leaders, s.params, t.t_begin(), t.t_end()).margin_m;
        const double bar = improved ? improved->first.cost() : traj ? traj->cost() : kInf;
        if (worst >= -margin_tol_m && t.cost() < bar - 1e-12) {
          improved.emplace(std::move(t), variant);
        }
      } catch (const InfeasibleError &) {
      } catch (const SolverError &) {
      }
    }
    if (!improved) {
      break;
    }
    traj = std::move(improved->first);
    base = std::move(improved->second);
  }
  if (!traj) {
    throw *failure;
  }

  const auto worst = min_margin(*traj, s.leaders, s.params, traj->t_begin(), traj->t_end());
  if (worst.margin_m < -margin_tol_m) {
    throw InfeasibleError(
      problem.vehicle_id, worst.t_s,
      "vehicle " + std::to_string(problem.vehicle_id) + " margin " +
        std::to_string(worst.margin_m) + " m at t=" + std::to_string(worst.t_s));
  }
  return *traj;
}

std::pair<double, double> find_junction_times(const RoutePlanProblem & problem)
{
  const auto sol = solve_constrained(problem);
  if (sol.windows.empty()) {
    throw ContractError("find_junction_times: the unconstrained solution is already safe");
  }
  return {sol.windows.front().t1_s, sol.windows.front().t2_s};
}

Trajectory piece_case2(const RoutePlanProblem & problem)
{
  if (!problem.schedule.waypoints.empty()) {
    throw ContractError("piece_case2: schedule has interior waypoints");
  }
  return solve_constrained(problem).trajectory;
}

Trajectory piece_case4(const RoutePlanProblem & problem)
{
  if (problem.schedule.waypoints.empty()) {
    throw ContractError("piece_case4: schedule has no interior waypoints");
  }
  return solve_constrained(problem).trajectory;
}

WindowPlacement classify_window(const ScheduleAssignment & schedule, double t1_s, double t2_s)
{
  if (schedule.waypoints.empty()) {
    return WindowPlacement::kNoWaypoints;
  }
  if (t2_s <= schedule.waypoints.front().time_s) {
    return WindowPlacement::kBeforeWaypoints;
  }
  if (t1_s >= schedule.waypoints.back().time_s) {
    return WindowPlacement::kAfterWaypoints;
  }
  return WindowPlacement::kBetweenWaypoints;
}

std::vector<JunctionReport> junction_reports(
  const Trajectory & trajectory, const LeaderContext & leaders, const SafetyParams & params)
{
  std::vector<JunctionReport> out;
  const auto & segs = trajectory.segments();
  for (std::size_t k = 0; k < segs.size(); ++k) {
    const auto * c = std::get_if<ConstrainedSegment>(&segs[k]);
    if (c == nullptr) {
      continue;
    }
    JunctionReport r;
    r.t1_s = c->t_start();
    r.t2_s = c->t_end();
    r.leader_id = c->leader_id();
    const auto lead = leaders.leader_at(r.t1_s);
    if (k > 0 && lead) {
      const auto * arc = std::get_if<PolynomialArc>(&segs[k - 1]);
      const KinematicSample s = arc ? arc->at(r.t1_s) : c->sample(r.t1_s);
      r.entry_margin_m = margin_value(params, s, *lead);
      r.entry_margin_rate = margin_rate(params, s, *lead);
    }
    if (k + 1 < segs.size()) {
      const auto * arc = std::get_if<PolynomialArc>(&segs[k + 1]);
      if (arc != nullptr) {
        r.exit_control_jump = arc->at(r.t2_s).u - c->sample(r.t2_s).u;
      }
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace corridor
