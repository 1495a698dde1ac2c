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

#include <gtest/gtest.h>

#include <stdexcept>

#include "corridor/arc.hpp"
#include "corridor/errors.hpp"
#include "corridor/linalg.hpp"

namespace corridor
{
namespace
{

BoundarySpec free_spec(double v0, double tf, double pf)
{
  BoundarySpec bc;
  bc.v0_mps = v0;
  bc.tf_s = tf;
  bc.pf_m = pf;
  return bc;
}

TEST(FreeArc, ConstantSpeedIsOptimal)
{
  const auto arc = solve_free_arc(free_spec(10.0, 30.0, 300.0));
  EXPECT_NEAR(arc.alpha, 0.0, 1e-12);
  EXPECT_NEAR(arc.c, 0.0, 1e-12);
  EXPECT_NEAR(arc.d, 10.0, 1e-12);
  EXPECT_NEAR(arc.e, 0.0, 1e-12);
}

TEST(FreeArc, SingleVehicleApproach)
{
  const auto arc = solve_free_arc(free_spec(12.0, 26.0, 300.0));
  EXPECT_NEAR(arc.alpha, 2.0483e-3, 1e-6);
  EXPECT_NEAR(arc.c, -5.3255e-2, 1e-6);
  const auto end = eval_arc(arc, 26.0);
  EXPECT_NEAR(end.u, 0.0, 1e-9);
  EXPECT_NEAR(end.p, 300.0, 1e-9);
  EXPECT_NEAR(end.v, 11.3077, 1e-4);
  // decelerates first, magnitude shrinking linearly to zero
  EXPECT_LT(eval_arc(arc, 0.0).u, 0.0);
  EXPECT_LT(eval_arc(arc, 0.0).u, eval_arc(arc, 13.0).u);
}

TEST(PinnedArc, ConsistentConstantSpeed)
{
  BoundarySpec bc;
  bc.v0_mps = 10.0;
  bc.tf_s = 10.0;
  bc.pf_m = 100.0;
  bc.kind = TerminalKind::kPinnedSpeed;
  bc.vf_mps = 10.0;
  const auto arc = solve_pinned_arc(bc);
  EXPECT_NEAR(arc.alpha, 0.0, 1e-12);
  EXPECT_NEAR(arc.c, 0.0, 1e-12);
}

TEST(PinnedArc, MeetsAllFourConditions)
{
  BoundarySpec bc;
  bc.v0_mps = 12.0;
  bc.tf_s = 15.0;
  bc.pf_m = 150.0;
  bc.kind = TerminalKind::kPinnedSpeed;
  bc.vf_mps = 11.0;
  const auto arc = solve_pinned_arc(bc);
  const auto s0 = eval_arc(arc, 0.0);
  const auto sf = eval_arc(arc, 15.0);
  EXPECT_NEAR(s0.p, 0.0, 1e-9);
  EXPECT_NEAR(s0.v, 12.0, 1e-9);
  EXPECT_NEAR(sf.p, 150.0, 1e-9);
  EXPECT_NEAR(sf.v, 11.0, 1e-9);
}

TEST(PinnedArc, DegenerateIntervalThrows)
{
  BoundarySpec bc;
  bc.v0_mps = 12.0;
  bc.tf_s = 0.0;
  bc.pf_m = 0.0;
  bc.kind = TerminalKind::kPinnedSpeed;
  bc.vf_mps = 12.0;
  EXPECT_THROW(solve_pinned_arc(bc), SolverError);
}

TEST(EvalArc, Monomials)
{
  const PolynomialArc cruise{0.0, 10.0, 0.0, 0.0, 10.0, 0.0};
  const auto a = eval_arc(cruise, 3.0);
  EXPECT_DOUBLE_EQ(a.u, 0.0);
  EXPECT_DOUBLE_EQ(a.v, 10.0);
  EXPECT_DOUBLE_EQ(a.p, 30.0);
  const PolynomialArc jerk{0.0, 2.0, 6.0, 0.0, 0.0, 0.0};
  const auto b = eval_arc(jerk, 1.0);
  EXPECT_DOUBLE_EQ(b.u, 6.0);
  EXPECT_DOUBLE_EQ(b.v, 3.0);
  EXPECT_DOUBLE_EQ(b.p, 1.0);
}

TEST(EvalArc, LocalTimeOrigin)
{
  const PolynomialArc arc{5.0, 7.0, 6.0, 1.0, 2.0, 3.0};
  const auto s = eval_arc(arc, 6.0);
  EXPECT_DOUBLE_EQ(s.u, 7.0);
  EXPECT_DOUBLE_EQ(s.v, 3.0 + 1.0 + 2.0);
  EXPECT_DOUBLE_EQ(s.p, 1.0 + 0.5 + 2.0 + 3.0);
  EXPECT_THROW(eval_arc(arc, 7.5), std::domain_error);
}

TEST(ArcCost, ClosedForm)
{
  EXPECT_DOUBLE_EQ(arc_cost(PolynomialArc{0.0, 5.0, 0.0, 0.0, 10.0, 0.0}), 0.0);
  EXPECT_NEAR(arc_cost(PolynomialArc{0.0, 2.0, 0.0, 1.0, 0.0, 0.0}), 1.0, 1e-15);
}

TEST(ArcCost, MatchesQuadrature)
{
  const auto arc = solve_free_arc(free_spec(12.0, 26.0, 300.0));
  const int n = 20000;
  const double h = 26.0 / n;
  double sum = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double u = eval_arc(arc, k * h).u;
    sum += (k == 0 || k == n ? 0.5 : 1.0) * u * u;
  }
  EXPECT_NEAR(arc_cost(arc), 0.5 * sum * h, 1e-6 * arc_cost(arc));
}

TEST(LinearSolve, SmallSystem)
{
  DenseMatrix a(2, 2);
  a(0, 0) = 2.0;
  a(0, 1) = 1.0;
  a(1, 0) = 1.0;
  a(1, 1) = 3.0;
  const auto x = solve_linear_system(a, {3.0, 5.0});
  EXPECT_NEAR(x[0], 0.8, 1e-12);
  EXPECT_NEAR(x[1], 1.4, 1e-12);
}

TEST(LinearSolve, SingularThrows)
{
  DenseMatrix a(2, 2);
  a(0, 0) = 1.0;
  a(0, 1) = 2.0;
  a(1, 0) = 2.0;
  a(1, 1) = 4.0;
  EXPECT_THROW(solve_linear_system(a, {1.0, 2.0}), SolverError);
}

}  // namespace
}  // namespace corridor
