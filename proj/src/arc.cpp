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

#include "corridor/arc.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "corridor/errors.hpp"
#include "corridor/linalg.hpp"

namespace corridor
{
namespace
{

struct Row
{
  std::array<double, 4> coeffs;
  double rhs;
};

PolynomialArc solve_rows(double t0, double tf, const std::vector<Row> & rows)
{
  if (!(tf > t0)) {
    throw SolverError("singular system: zero-length arc");
  }
  DenseMatrix a(4, 4);
  std::vector<double> b(4);
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) {
      a(r, c) = rows[r].coeffs[c];
    }
    b[r] = rows[r].rhs;
  }
  const auto x = solve_linear_system(a, b);
  return PolynomialArc{t0, tf, x[0], x[1], x[2], x[3]};
}

}  // namespace

KinematicSample PolynomialArc::at(double t_s) const
{
  const double tau = t_s - t_start_s;
  return KinematicSample{
    ((alpha * tau / 6.0 + c / 2.0) * tau + d) * tau + e, (alpha * tau / 2.0 + c) * tau + d,
    alpha * tau + c};
}

std::array<double, 4> position_row(double tau)
{
  return {tau * tau * tau / 6.0, tau * tau / 2.0, tau, 1.0};
}

std::array<double, 4> speed_row(double tau) { return {tau * tau / 2.0, tau, 1.0, 0.0}; }

std::array<double, 4> control_row(double tau) { return {tau, 1.0, 0.0, 0.0}; }

PolynomialArc solve_free_arc(const BoundarySpec & bc)
{
  if (bc.kind != TerminalKind::kFreeSpeed) {
    throw ContractError("solve_free_arc: terminal kind must be free speed");
  }
  if (!bc.v0_mps) {
    throw ContractError("solve_free_arc: initial speed required");
  }
  const double T = bc.tf_s - bc.t0_s;
  return solve_rows(
    bc.t0_s, bc.tf_s,
    {Row{position_row(0.0), bc.p0_m}, Row{speed_row(0.0), *bc.v0_mps}, Row{position_row(T), bc.pf_m},
     Row{control_row(T), 0.0}});
}

PolynomialArc solve_pinned_arc(const BoundarySpec & bc)
{
  if (bc.kind == TerminalKind::kFreeSpeed) {
    throw ContractError("solve_pinned_arc: terminal speed must be pinned");
  }
  if (!bc.vf_mps) {
    throw ContractError("solve_pinned_arc: pinned terminal speed missing");
  }
  const double T = bc.tf_s - bc.t0_s;
  std::vector<Row> rows;
  rows.push_back(Row{position_row(0.0), bc.p0_m});
  if (bc.v0_mps) {
    rows.push_back(Row{speed_row(0.0), *bc.v0_mps});
  }
  rows.push_back(Row{position_row(T), bc.pf_m});
  rows.push_back(Row{speed_row(T), *bc.vf_mps});
  if (bc.kind == TerminalKind::kPinnedSpeedAndControl) {
    if (!bc.uf_mps2) {
      throw ContractError("solve_pinned_arc: pinned terminal control missing");
    }
    rows.push_back(Row{control_row(T), *bc.uf_mps2});
  }
  if (rows.size() != 4) {
    throw ContractError(
      "solve_pinned_arc: " + std::to_string(rows.size()) + " conditions given, exactly 4 required");
  }
  return solve_rows(bc.t0_s, bc.tf_s, rows);
}

KinematicSample eval_arc(const PolynomialArc & arc, double t_s)
{
  const double tol = 1e-9 * std::max(1.0, std::abs(t_s));
  if (t_s < arc.t_start_s - tol || t_s > arc.t_end_s + tol) {
    throw std::domain_error("eval_arc: time outside arc");
  }
  return arc.at(t_s);
}

double arc_cost(const PolynomialArc & arc)
{
  const double T = arc.duration();
  const double a = arc.alpha;
  const double c = arc.c;
  return 0.5 * (a * a * T * T * T / 3.0 + a * c * T * T + c * c * T);
}

}  // namespace corridor
