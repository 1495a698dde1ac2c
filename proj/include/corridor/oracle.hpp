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

#ifndef CORRIDOR__ORACLE_HPP_
#define CORRIDOR__ORACLE_HPP_

#include <vector>

#include "corridor/interior_bvp.hpp"
#include "corridor/motion.hpp"

namespace corridor
{

/// One linear constraint on the control samples: a . u = b (equality) or a . u >= b.
struct LinearRow
{
  std::vector<double> a;
  double b{0.0};
  bool equality{false};
};

/// Direct transcription of a route problem.
///
/// The control is held constant on each of `steps` intervals; position and speed follow the
/// exact double-integrator response, so pins may sit anywhere inside an interval. The grid is
/// uniform with step h except that the nearest node is moved onto every waypoint time and every
/// instant a leader appears or leaves, where the optimal control may jump.
/// Margin rows sample the rear-end constraint at the nodes where a leader is present.
struct TranscribedProblem
{
  int steps{0};
  double h{0.0};              // nominal step
  std::vector<double> nodes;  // steps + 1 interval ends
  double t0_s{0.0};
  double p0_m{0.0};
  double v0_mps{0.0};
  std::vector<LinearRow> rows;
  std::vector<double> margin_times_s;  // sample time of each inequality row, in row order

  /// Coefficients of p(t) and v(t) with respect to the control samples.
  std::vector<double> position_coeffs(double t_s) const;
  std::vector<double> speed_coeffs(double t_s) const;
};

/// Throws ContractError for steps < 10.
TranscribedProblem transcribe(const RoutePlanProblem & problem, int steps);

struct OracleOptions
{
  /// Margin rows (indices into the inequality rows) treated as active at the start.
  std::vector<int> initial_active;
  int max_iterations{0};  // 0 selects 4 * (steps + rows)
};

struct OracleSolution
{
  std::vector<double> u;  // control samples
  double cost{0.0};       // 0.5 * sum(h_i * u_i^2)
  int iterations{0};
  int active_inequalities{0};
  double h{0.0};
  std::vector<double> nodes;
  double t0_s{0.0};
  double p0_m{0.0};
  double v0_mps{0.0};

  KinematicSample sample(double t_s) const;
};

/// Minimizes 0.5 * h * sum(u_j^2) subject to every pin and sampled margin >= 0 with a dual
/// active-set method. Throws SolverError on an infeasible constraint set or when the active set
/// does not settle within the iteration limit.
OracleSolution solve_transcribed(
  const RoutePlanProblem & problem, int steps, const OracleOptions & options = {});

}  // namespace corridor

#endif  // CORRIDOR__ORACLE_HPP_
