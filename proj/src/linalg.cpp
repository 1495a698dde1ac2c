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

#include "corridor/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "corridor/errors.hpp"

namespace corridor
{

std::vector<double> solve_linear_system(DenseMatrix a, std::vector<double> b)
{
  const std::size_t n = a.rows();
  if (a.cols() != n || b.size() != n) {
    throw ContractError("solve_linear_system: dimension mismatch");
  }
  // row equilibration: position rows carry tau^3 terms, control rows only tau
  for (std::size_t r = 0; r < n; ++r) {
    double row_max = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
      row_max = std::max(row_max, std::abs(a(r, c)));
    }
    if (row_max == 0.0) {
      throw SolverError("singular system (zero row " + std::to_string(r) + ")");
    }
    for (std::size_t c = 0; c < n; ++c) {
      a(r, c) /= row_max;
    }
    b[r] /= row_max;
  }
  const double tiny = 1e-13;

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    for (std::size_t r = k + 1; r < n; ++r) {
      if (std::abs(a(r, k)) > std::abs(a(pivot, k))) {
        pivot = r;
      }
    }
    if (std::abs(a(pivot, k)) <= tiny) {
      throw SolverError("singular system at column " + std::to_string(k));
    }
    if (pivot != k) {
      for (std::size_t c = 0; c < n; ++c) {
        std::swap(a(k, c), a(pivot, c));
      }
      std::swap(b[k], b[pivot]);
    }
    for (std::size_t r = k + 1; r < n; ++r) {
      const double f = a(r, k) / a(k, k);
      if (f == 0.0) {
        continue;
      }
      for (std::size_t c = k; c < n; ++c) {
        a(r, c) -= f * a(k, c);
      }
      b[r] -= f * b[k];
    }
  }
  std::vector<double> x(n, 0.0);
  for (std::size_t k = n; k-- > 0;) {
    double s = b[k];
    for (std::size_t c = k + 1; c < n; ++c) {
      s -= a(k, c) * x[c];
    }
    x[k] = s / a(k, k);
  }
  return x;
}

}  // namespace corridor
