// Copyright 2026 The MDIEW Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Dense linear programming by a primal active-set method.
//
//   minimize    c^T x
//   subject to  G x >= h,  E x = f,  lower <= x <= upper
//
// Suited to few variables and many inequality rows. Iterates stay feasible;
// each step moves along the projected steepest-descent direction in the null
// space of the working set until a constraint blocks, and a working
// constraint is released only when its multiplier is negative.

#ifndef MDIEW_LP_HPP_
#define MDIEW_LP_HPP_

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mdiew::lp {

struct LinearProgram {
  Eigen::VectorXd cost;
  Eigen::MatrixXd inequality;  // G
  Eigen::VectorXd inequality_rhs;  // h
  Eigen::MatrixXd equality;  // E
  Eigen::VectorXd equality_rhs;  // f
  Eigen::VectorXd lower;  // may hold -inf
  Eigen::VectorXd upper;  // may hold +inf

  /// Empty constraint blocks and unbounded box for n variables.
  static LinearProgram with_variables(int n);
  int n_variables() const { return static_cast<int>(cost.size()); }
};

enum class Status { kOptimal, kInfeasible, kUnbounded, kMaxIterations };

std::string to_string(Status s);

struct Options {
  double feasibility_tolerance = 1e-10;
  double optimality_tolerance = 1e-9;
  int max_iterations = 0;  // 0 selects 20 * (rows + variables) + 1000
  std::optional<Eigen::VectorXd> start;
};

struct Solution {
  Status status = Status::kInfeasible;
  Eigen::VectorXd x;
  double objective = 0.0;
  Eigen::VectorXd inequality_multipliers;  // >= 0, zero off the working set
  Eigen::VectorXd equality_multipliers;
  Eigen::VectorXd lower_multipliers;
  Eigen::VectorXd upper_multipliers;
  int iterations = 0;

  // KKT residuals at x.
  double primal_violation = 0.0;
  double min_multiplier = 0.0;
  double stationarity = 0.0;
};

Solution solve(const LinearProgram& program, const Options& options = {});

}  // namespace mdiew::lp

#endif  // MDIEW_LP_HPP_
