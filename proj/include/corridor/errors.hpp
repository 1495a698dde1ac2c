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

#ifndef CORRIDOR__ERRORS_HPP_
#define CORRIDOR__ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace corridor
{

/// Singular or ill-posed linear system, zero-length interval, non-convergent iteration.
class SolverError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Caller violated an operation's precondition (wrong number of conditions, bad arguments).
class ContractError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// Time query outside the span a motion is defined on.
class QueryError : public std::out_of_range
{
public:
  using std::out_of_range::out_of_range;
};

/// A schedule that cannot be met without breaking the rear-end safety constraint.
class InfeasibleError : public std::runtime_error
{
public:
  InfeasibleError(int vehicle_id, double time_s, const std::string & what)
  : std::runtime_error(what), vehicle_id_(vehicle_id), time_s_(time_s)
  {
  }

  int vehicle_id() const { return vehicle_id_; }
  double time_s() const { return time_s_; }

private:
  int vehicle_id_;
  double time_s_;
};

/// Malformed scenario input. `location` is "line N" or a field path.
class ParseError : public std::runtime_error
{
public:
  ParseError(std::string location, const std::string & what)
  : std::runtime_error(location + ": " + what), location_(std::move(location))
  {
  }

  const std::string & location() const { return location_; }

private:
  std::string location_;
};

}  // namespace corridor

#endif  // CORRIDOR__ERRORS_HPP_
