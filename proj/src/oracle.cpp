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

#include "corridor/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <string>

#include "corridor/errors.hpp"

namespace corridor
{
namespace
{
constexpr double kInf = std::numeric_limits<double>::infinity();

double dot(const std::vector<double> & a, const std::vector<double> & b)
{
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

int interval_of(const std::vector<double> & nodes, double t)
{
  const auto it = std::upper_bound(nodes.begin(), nodes.end(), t);
  const int j = static_cast<int>(it - nodes.begin()) - 1;
  return std::clamp(j, 0, static_cast<int>(nodes.size()) - 2);
}

/// Uniform nodes with the nearest interior node moved onto each event time.
std::vector<double> snapped_nodes(double t0, double tf, int steps, std::vector<double> events)
{
  const double h = (tf - t0) / steps;
  std::vector<double> nodes(static_cast<std::size_t>(steps) + 1);
  for (int j = 0; j <= steps; ++j) {
    nodes[static_cast<std::size_t>(j)] = j == steps ? tf : t0 + j * h;
  }
  std::vector<bool> moved(nodes.size(), false);
  std::sort(events.begin(), events.end());
  for (const double e : events) {
    if (!(e > t0 + 0.5 * h && e < tf - 0.5 * h)) {
      continue;
    }
    const auto k = static_cast<std::size_t>(std::clamp(
      static_cast<int>(std::lround((e - t0) / h)), 1, steps - 1));
    if (moved[k] || !(e - nodes[k - 1] > 0.1 * h && nodes[k + 1] - e > 0.1 * h)) {
      continue;
    }
    nodes[k] = e;
    moved[k] = true;
  }
  return nodes;
}

/// Orthonormal basis of the active normals, grown one column at a time by modified
/// Gram-Schmidt with one reorthogonalization pass.
class IncrementalQr
{
public:
  explicit IncrementalQr(std::size_t dim) : dim_(dim) {}

  std::size_t size() const { return q_.size(); }

  /// Q^T a
  std::vector<double> project(const std::vector<double> & a) const
  {
    std::vector<double> r(q_.size());
    for (std::size_t k = 0; k < q_.size(); ++k) {
      r[k] = dot(q_[k], a);
    }
    return r;
  }

  /// a - Q Q^T a, computed twice for stability
  std::vector<double> residual(const std::vector<double> & a, std::vector<double> * coeffs) const
  {
    std::vector<double> z = a;
    std::vector<double> c(q_.size(), 0.0);
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < q_.size(); ++k) {
        const double s = dot(q_[k], z);
        c[k] += s;
        for (std::size_t i = 0; i < dim_; ++i) {
          z[i] -= s * q_[k][i];
        }
      }
    }
    if (coeffs != nullptr) {
      *coeffs = std::move(c);
    }
    return z;
  }

  /// Appends a column; false when it is numerically dependent on the current ones.
  bool add(const std::vector<double> & a)
  {
    std::vector<double> c;
    std::vector<double> z = residual(a, &c);
    const double nz = std::sqrt(dot(z, z));
    if (nz <= 1e-10 * std::max(1.0, std::sqrt(dot(a, a)))) {
      return false;
    }
    for (double & x : z) {
      x /= nz;
    }
    q_.push_back(std::move(z));
    c.push_back(nz);
    r_.push_back(std::move(c));
    return true;
  }

  /// Solves R x = b (R upper triangular, stored by columns).
  std::vector<double> solve_r(std::vector<double> b) const
  {
    const std::size_t n = q_.size();
    for (std::size_t i = n; i-- > 0;) {
      double s = b[i];
      for (std::size_t k = i + 1; k < n; ++k) {
        s -= r_[k][i] * b[k];
      }
      b[i] = s / r_[i][i];
    }
    return b;
  }

  /// Solves R^T x = b.
  std::vector<double> solve_rt(std::vector<double> b) const
  {
    const std::size_t n = q_.size();
    for (std::size_t i = 0; i < n; ++i) {
      double s = b[i];
      for (std::size_t k = 0; k < i; ++k) {
        s -= r_[i][k] * b[k];
      }
      b[i] = s / r_[i][i];
    }
    return b;
  }

  /// Q w
  std::vector<double> combine(const std::vector<double> & w) const
  {
    std::vector<double> x(dim_, 0.0);
    for (std::size_t k = 0; k < q_.size(); ++k) {
      for (std::size_t i = 0; i < dim_; ++i) {
        x[i] += w[k] * q_[k][i];
      }
    }
    return x;
  }

private:
  std::size_t dim_;
  std::vector<std::vector<double>> q_;
  std::vector<std::vector<double>> r_;  // column k holds k + 1 entries
};

/// Dual active-set solver for min 0.5 |y|^2 over unit-norm rows.
class DualActiveSet
{
public:
  DualActiveSet(std::vector<LinearRow> rows, std::size_t dim) : rows_(std::move(rows)), dim_(dim)
  {
    for (auto & r : rows_) {
      const double n = std::sqrt(dot(r.a, r.a));
      if (n > 0.0) {
        for (double & x : r.a) {
          x /= n;
        }
        r.b /= n;
      } else if (r.equality ? r.b != 0.0 : r.b > 0.0) {
        throw SolverError("oracle: constraint with zero normal cannot be met");
      }
    }
  }

  std::vector<double> solve(const std::vector<int> & initial, int max_iterations, int * iterations)
  {
    active_.clear();
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (rows_[i].equality) {
        active_.push_back(static_cast<int>(i));
      }
    }
    const std::size_t n_eq = active_.size();
    for (int i : initial) {
      if (!rows_[static_cast<std::size_t>(i)].equality) {
        active_.push_back(i);
      }
    }
    // start from the minimum-norm point on the initial set, dropping rows until dual feasible
    for (;;) {
      rebuild();
      x_ = subspace_minimizer();
      lambda_ = qr_->solve_r(qr_->project(x_));
      std::size_t worst = active_.size();
      double most = -1e-12;
      for (std::size_t k = n_eq; k < active_.size(); ++k) {
        if (lambda_[k] < most) {
          most = lambda_[k];
          worst = k;
        }
      }
      if (worst == active_.size()) {
        break;
      }
      active_.erase(active_.begin() + static_cast<long>(worst));
    }

    int it = 0;
    for (; it < max_iterations; ++it) {
      int p = -1;
      double worst = -1e-11;
      std::vector<char> is_active(rows_.size(), 0);
      for (int a : active_) {
        is_active[static_cast<std::size_t>(a)] = 1;
      }
      for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (is_active[i] || rows_[i].equality) {
          continue;
        }
        const double s = dot(rows_[i].a, x_) - rows_[i].b;
        if (s < worst) {
          worst = s;
          p = static_cast<int>(i);
        }
      }
      if (p < 0) {
        break;
      }
      add_constraint(p, n_eq, max_iterations, &it);
    }
    if (it >= max_iterations) {
      throw SolverError("oracle: active set did not settle within the iteration limit");
    }
    *iterations = it;
    return x_;
  }

  int active_inequalities() const
  {
    int n = 0;
    for (int a : active_) {
      n += rows_[static_cast<std::size_t>(a)].equality ? 0 : 1;
    }
    return n;
  }

private:
  void rebuild()
  {
    qr_ = std::make_unique<IncrementalQr>(dim_);
    std::vector<int> kept;
    for (int a : active_) {
      if (qr_->add(rows_[static_cast<std::size_t>(a)].a)) {
        kept.push_back(a);
      } else if (rows_[static_cast<std::size_t>(a)].equality) {
        throw SolverError("oracle: dependent equality pins");
      }
    }
    active_ = std::move(kept);
  }

  std::vector<double> subspace_minimizer() const
  {
    std::vector<double> b(active_.size());
    for (std::size_t k = 0; k < active_.size(); ++k) {
      b[k] = rows_[static_cast<std::size_t>(active_[k])].b;
    }
    return qr_->combine(qr_->solve_rt(b));
  }

  void add_constraint(int p, std::size_t n_eq, int max_iterations, int * it)
  {
    const auto & np = rows_[static_cast<std::size_t>(p)].a;
    const double bp = rows_[static_cast<std::size_t>(p)].b;
    double lambda_p = 0.0;
    for (;;) {
      if (++*it > max_iterations) {
        return;
      }
      std::vector<double> coeffs;
      const std::vector<double> z = qr_->residual(np, &coeffs);
      const std::vector<double> r = qr_->solve_r(coeffs);
      const double zz = dot(z, np);
      double t1 = kInf;
      std::size_t block = active_.size();
      for (std::size_t k = n_eq; k < active_.size(); ++k) {
        if (r[k] > 1e-14 && lambda_[k] / r[k] < t1) {
          t1 = lambda_[k] / r[k];
          block = k;
        }
      }
      const double s = dot(np, x_) - bp;
      const bool dependent = zz <= 1e-20;
      const double t2 = dependent ? kInf : -s / zz;
      if (!std::isfinite(t1) && !std::isfinite(t2)) {
        throw SolverError("oracle: infeasible constraint set");
      }
      const double t = std::min(t1, t2);
      if (!dependent) {
        for (std::size_t i = 0; i < dim_; ++i) {
          x_[i] += t * z[i];
        }
      }
      for (std::size_t k = 0; k < active_.size(); ++k) {
        lambda_[k] -= t * r[k];
      }
      lambda_p += t;
      if (t2 <= t1) {
        active_.push_back(p);
        lambda_.push_back(lambda_p);
        if (!qr_->add(np)) {
          // numerically dependent after all: keep the primal step, drop the row again
          active_.pop_back();
          lambda_.pop_back();
        }
        return;
      }
      active_.erase(active_.begin() + static_cast<long>(block));
      lambda_.erase(lambda_.begin() + static_cast<long>(block));
      rebuild_keep_multipliers();
    }
  }

  void rebuild_keep_multipliers()
  {
    qr_ = std::make_unique<IncrementalQr>(dim_);
    for (int a : active_) {
      qr_->add(rows_[static_cast<std::size_t>(a)].a);
    }
  }

  std::vector<LinearRow> rows_;
  std::size_t dim_;
  std::vector<int> active_;
  std::vector<double> lambda_;
  std::vector<double> x_;
  std::unique_ptr<IncrementalQr> qr_;
};

}  // namespace

std::vector<double> TranscribedProblem::position_coeffs(double t_s) const
{
  std::vector<double> c(static_cast<std::size_t>(steps), 0.0);
  const int j = interval_of(nodes, t_s);
  for (int i = 0; i < j; ++i) {
    const double ti = nodes[static_cast<std::size_t>(i)];
    const double hi = nodes[static_cast<std::size_t>(i) + 1] - ti;
    c[static_cast<std::size_t>(i)] = hi * (t_s - ti - 0.5 * hi);
  }
  const double tau = t_s - nodes[static_cast<std::size_t>(j)];
  c[static_cast<std::size_t>(j)] = 0.5 * tau * tau;
  return c;
}

std::vector<double> TranscribedProblem::speed_coeffs(double t_s) const
{
  std::vector<double> c(static_cast<std::size_t>(steps), 0.0);
  const int j = interval_of(nodes, t_s);
  for (int i = 0; i < j; ++i) {
    c[static_cast<std::size_t>(i)] = nodes[static_cast<std::size_t>(i) + 1] - nodes[static_cast<std::size_t>(i)];
  }
  c[static_cast<std::size_t>(j)] = t_s - nodes[static_cast<std::size_t>(j)];
  return c;
}

TranscribedProblem transcribe(const RoutePlanProblem & problem, int steps)
{
  if (steps < 10) {
    throw ContractError("transcribe: at least 10 steps required");
  }
  const auto & s = problem.schedule;
  TranscribedProblem tp;
  tp.steps = steps;
  tp.t0_s = s.entry.time_s;
  tp.p0_m = s.entry.position_m;
  tp.v0_mps = s.entry.speed_mps;
  const double tf = s.terminal.time_s;
  if (!(tf > tp.t0_s)) {
    throw SolverError("transcribe: zero-length horizon");
  }
  tp.h = (tf - tp.t0_s) / steps;
  std::vector<double> events;
  for (const auto & w : s.waypoints) {
    events.push_back(w.time_s);
  }
  if (problem.safety) {
    for (const auto & w : problem.safety->leaders.windows()) {
      events.push_back(w.present_from());
      events.push_back(w.present_to());
    }
  }
  tp.nodes = snapped_nodes(tp.t0_s, tf, steps, std::move(events));

  auto pin = [&](double t, double p, const std::optional<double> & v) {
    tp.rows.push_back(LinearRow{tp.position_coeffs(t), p - tp.p0_m - tp.v0_mps * (t - tp.t0_s), true});
    if (v) {
      tp.rows.push_back(LinearRow{tp.speed_coeffs(t), *v - tp.v0_mps, true});
    }
  };
  for (const auto & w : s.waypoints) {
    pin(w.time_s, w.position_m, w.speed_mps);
  }
  pin(tf, s.terminal.position_m, s.terminal.speed_mps);

  if (problem.safety) {
    const auto & sp = problem.safety->params;
    for (int j = 1; j <= steps; ++j) {
      const double t = tp.nodes[static_cast<std::size_t>(j)];
      const auto lead = problem.safety->leaders.leader_at(t);
      if (!lead) {
        continue;
      }
      // xi (p_k - p) - gamma - rho v >= 0, with p and v affine in u
      auto pc = tp.position_coeffs(t);
      const auto vc = tp.speed_coeffs(t);
      for (std::size_t i = 0; i < pc.size(); ++i) {
        pc[i] = -sp.xi * pc[i] - sp.rho_s * vc[i];
      }
      const double p_free = tp.p0_m + tp.v0_mps * (t - tp.t0_s);
      const double rhs = sp.gamma_m + sp.rho_s * tp.v0_mps + sp.xi * (p_free - lead->p);
      tp.rows.push_back(LinearRow{std::move(pc), rhs, false});
      tp.margin_times_s.push_back(t);
    }
  }
  return tp;
}

KinematicSample OracleSolution::sample(double t_s) const
{
  const double tf = nodes.back();
  if (t_s < t0_s - 1e-9 || t_s > tf + 1e-9) {
    throw QueryError("oracle solution queried outside its horizon");
  }
  const int j = interval_of(nodes, t_s);
  double p = p0_m;
  double v = v0_mps;
  for (int i = 0; i < j; ++i) {
    const double hi = nodes[static_cast<std::size_t>(i) + 1] - nodes[static_cast<std::size_t>(i)];
    p += v * hi + 0.5 * u[static_cast<std::size_t>(i)] * hi * hi;
    v += u[static_cast<std::size_t>(i)] * hi;
  }
  const double tau = t_s - nodes[static_cast<std::size_t>(j)];
  const double uj = u[static_cast<std::size_t>(j)];
  return KinematicSample{p + v * tau + 0.5 * uj * tau * tau, v + uj * tau, uj};
}

OracleSolution solve_transcribed(
  const RoutePlanProblem & problem, int steps, const OracleOptions & options)
{
  TranscribedProblem tp = transcribe(problem, steps);
  // work in y_i = sqrt(h_i) u_i so the Hessian is the identity
  std::vector<double> sh(static_cast<std::size_t>(steps));
  for (std::size_t i = 0; i < sh.size(); ++i) {
    sh[i] = std::sqrt(tp.nodes[i + 1] - tp.nodes[i]);
  }
  int n_eq = 0;
  for (auto & r : tp.rows) {
    for (std::size_t i = 0; i < r.a.size(); ++i) {
      r.a[i] /= sh[i];
    }
    n_eq += r.equality ? 1 : 0;
  }
  std::vector<int> initial;
  const int n_ineq = static_cast<int>(tp.rows.size()) - n_eq;
  for (int k : options.initial_active) {
    if (k < 0 || k >= n_ineq) {
      throw ContractError("solve_transcribed: initial active index out of range");
    }
    initial.push_back(n_eq + k);
  }
  const int limit = options.max_iterations > 0
                      ? options.max_iterations
                      : 4 * (steps + static_cast<int>(tp.rows.size()));
  DualActiveSet qp(std::move(tp.rows), static_cast<std::size_t>(steps));
  OracleSolution out;
  const std::vector<double> y = qp.solve(initial, limit, &out.iterations);
  out.u.resize(y.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    out.u[i] = y[i] / sh[i];
    sum += y[i] * y[i];
  }
  out.cost = 0.5 * sum;
  out.active_inequalities = qp.active_inequalities();
  out.h = tp.h;
  out.nodes = tp.nodes;
  out.t0_s = tp.t0_s;
  out.p0_m = tp.p0_m;
  out.v0_mps = tp.v0_mps;
  return out;
}

}  // namespace corridor
