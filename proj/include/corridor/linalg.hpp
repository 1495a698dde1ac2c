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

#ifndef CORRIDOR__LINALG_HPP_
#define CORRIDOR__LINALG_HPP_

#include <cstddef>
#include <vector>

namespace corridor
{

/// Row-major dense matrix for the small systems assembled by the arc solvers.
class DenseMatrix
{
public:
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0)
  {
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double & operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

/// Gaussian elimination with partial pivoting. Throws SolverError when the matrix is
/// (numerically) singular.
std::vector<double> solve_linear_system(DenseMatrix a, std::vector<double> b);

}  // namespace corridor

#endif  // CORRIDOR__LINALG_HPP_
