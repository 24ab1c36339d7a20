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

#include "mdiew/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mdiew/errors.hpp"

namespace mdiew::lp {

namespace {

constexpr int kDegenerateStepsBeforeBland = 50;

struct ActiveSetState {
  Eigen::VectorXd x;
  std::vector<int> working;  // indices into the inequality rows
  Eigen::VectorXd equality_multipliers;
  Eigen::VectorXd working_multipliers;
  int iterations = 0;
};

Eigen::MatrixXd stack_working(const Eigen::MatrixXd& g, const Eigen::MatrixXd& e,
                              const std::vector<int>& working) {
  Eigen::MatrixXd a(e.rows() + static_cast<Eigen::Index>(working.size()), g.cols());
  if (e.rows() > 0) a.topRows(e.rows()) = e;
  for (std::size_t k = 0; k < working.size(); ++k) {
    a.row(e.rows() + static_cast<Eigen::Index>(k)) = g.row(working[k]);
  }
  return a;
}

// Runs the active-set iteration from a feasible state. Returns kOptimal,
// kUnbounded or kMaxIterations.
Status run_active_set(const Eigen::VectorXd& c, const Eigen::MatrixXd& g, const Eigen::VectorXd& h,
                      const Eigen::MatrixXd& e, const Options& options, int max_iterations,
                      ActiveSetState& state) {
  const Eigen::Index n = c.size();
  const double c_scale = std::max(1.0, c.norm());
  std::vector<bool> in_working(g.rows(), false);
  for (int w : state.working) in_working[w] = true;
  Eigen::VectorXd row_norm = g.rowwise().norm();

  int degenerate_run = 0;
  bool bland = false;

  while (state.iterations < max_iterations) {
    ++state.iterations;
    const Eigen::MatrixXd a = stack_working(g, e, state.working);
    Eigen::VectorXd direction;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr;
    if (a.rows() == 0) {
      direction = -c;
    } else {
      qr.compute(a.transpose());
      const Eigen::Index rank = qr.rank();
      const Eigen::MatrixXd q = qr.householderQ();
      const Eigen::MatrixXd z = q.rightCols(n - rank);
      direction = -(z * (z.transpose() * c));
    }

    if (direction.norm() > 1e-11 * c_scale) {
      // Ratio test against every non-working row that decreases along the direction.
      const Eigen::VectorXd rate = g * direction;
      const double p_norm = direction.norm();
      double best_step = std::numeric_limits<double>::infinity();
      int blocking = -1;
      for (Eigen::Index i = 0; i < g.rows(); ++i) {
        if (in_working[i]) continue;
        if (rate(i) >= -1e-13 * row_norm(i) * p_norm) continue;
        const double slack = std::max(0.0, g.row(i).dot(state.x) - h(i));
        const double step = slack / -rate(i);
        if (step < best_step) {
          best_step = step;
          blocking = static_cast<int>(i);
        }
      }
      if (blocking < 0) return Status::kUnbounded;
      state.x += best_step * direction;
      state.working.push_back(blocking);
      in_working[blocking] = true;
      if (best_step * p_norm < options.feasibility_tolerance) {
        if (++degenerate_run > kDegenerateStepsBeforeBland) bland = true;
      } else {
        degenerate_run = 0;
      }
      continue;
    }

    // Stationary on the working set: inspect multipliers of A^T [mu; lambda] = c.
    Eigen::VectorXd multipliers = Eigen::VectorXd::Zero(a.rows());
    if (a.rows() > 0) multipliers = qr.solve(c);
    state.equality_multipliers = multipliers.head(e.rows());
    state.working_multipliers = multipliers.tail(static_cast<Eigen::Index>(state.working.size()));

    int release = -1;
    double most_negative = -options.optimality_tolerance;
    for (std::size_t k = 0; k < state.working.size(); ++k) {
      const double lambda = state.working_multipliers(static_cast<Eigen::Index>(k));
      if (lambda >= -options.optimality_tolerance) continue;
      if (bland) {
        if (release < 0 || state.working[k] < state.working[release]) release = static_cast<int>(k);
      } else if (lambda < most_negative) {
        most_negative = lambda;
        release = static_cast<int>(k);
      }
    }
    if (release < 0) return Status::kOptimal;
    in_working[state.working[release]] = false;
    state.working.erase(state.working.begin() + release);
  }
  return Status::kMaxIterations;
}

}  // namespace

std::string to_string(Status s) {
  switch (s) {
    case Status::kOptimal: return "optimal";
    case Status::kInfeasible: return "infeasible";
    case Status::kUnbounded: return "unbounded";
    case Status::kMaxIterations: return "max_iterations";
  }
  return "unknown";
}

LinearProgram LinearProgram::with_variables(int n) {
  LinearProgram p;
  p.cost = Eigen::VectorXd::Zero(n);
  p.inequality = Eigen::MatrixXd(0, n);
  p.inequality_rhs = Eigen::VectorXd(0);
  p.equality = Eigen::MatrixXd(0, n);
  p.equality_rhs = Eigen::VectorXd(0);
  p.lower = Eigen::VectorXd::Constant(n, -std::numeric_limits<double>::infinity());
  p.upper = Eigen::VectorXd::Constant(n, std::numeric_limits<double>::infinity());
  return p;
}

Solution solve(const LinearProgram& program, const Options& options) {
  const int n = program.n_variables();
  if (n == 0) throw LayoutError("lp::solve: program has no variables");
  if (program.inequality.cols() != n || program.inequality.rows() != program.inequality_rhs.size() ||
      program.equality.cols() != n || program.equality.rows() != program.equality_rhs.size() ||
      program.lower.size() != n || program.upper.size() != n) {
    throw LayoutError("lp::solve: inconsistent program dimensions");
  }
  const Eigen::MatrixXd& e = program.equality;
  const Eigen::VectorXd& f = program.equality_rhs;
  if (e.rows() > 0) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> rank_check(e);
    if (rank_check.rank() < e.rows()) {
      throw LayoutError("lp::solve: equality rows must be linearly independent");
    }
  }

  // Fold finite bounds into the inequality block.
  const Eigen::Index m = program.inequality.rows();
  std::vector<std::pair<int, bool>> bound_rows;  // (variable, is_upper)
  for (int j = 0; j < n; ++j) {
    if (std::isfinite(program.lower(j))) bound_rows.emplace_back(j, false);
    if (std::isfinite(program.upper(j))) bound_rows.emplace_back(j, true);
  }
  const Eigen::Index total = m + static_cast<Eigen::Index>(bound_rows.size());
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(total, n);
  Eigen::VectorXd h(total);
  g.topRows(m) = program.inequality;
  h.head(m) = program.inequality_rhs;
  for (std::size_t k = 0; k < bound_rows.size(); ++k) {
    const auto [j, is_upper] = bound_rows[k];
    const Eigen::Index r = m + static_cast<Eigen::Index>(k);
    g(r, j) = is_upper ? -1.0 : 1.0;
    h(r) = is_upper ? -program.upper(j) : program.lower(j);
  }

  const int max_iterations =
      options.max_iterations > 0 ? options.max_iterations : static_cast<int>(20 * (total + n) + 1000);

  Solution out;
  auto violation = [&](const Eigen::VectorXd& x) {
    double v = 0.0;
    if (total > 0) v = std::max(v, (h - g * x).maxCoeff());
    if (e.rows() > 0) v = std::max(v, (e * x - f).cwiseAbs().maxCoeff());
    return v;
  };

  // Starting point: caller's, or the minimum-norm solution of E x = f
  // clipped into the box when there are no equalities.
  Eigen::VectorXd x0;
  if (options.start) {
    if (options.start->size() != n) throw LayoutError("lp::solve: start has wrong length");
    x0 = *options.start;
  } else if (e.rows() > 0) {
    x0 = e.completeOrthogonalDecomposition().solve(f);
  } else {
    x0 = Eigen::VectorXd::Zero(n).cwiseMax(program.lower).cwiseMin(program.upper);
  }
  if (e.rows() > 0 && (e * x0 - f).cwiseAbs().maxCoeff() > options.feasibility_tolerance) {
    x0 = e.completeOrthogonalDecomposition().solve(f);
    if ((e * x0 - f).cwiseAbs().maxCoeff() > options.feasibility_tolerance) {
      out.status = Status::kInfeasible;
      out.x = x0;
      return out;
    }
  }

  ActiveSetState state;
  state.x = x0;
  int used_iterations = 0;

  if (violation(x0) > options.feasibility_tolerance) {
    // Phase 1: minimize a single slack s added to every inequality row.
    Eigen::MatrixXd g1 = Eigen::MatrixXd::Zero(total + 1, n + 1);
    g1.topLeftCorner(total, n) = g;
    g1.topRightCorner(total, 1).setOnes();
    g1(total, n) = 1.0;
    Eigen::VectorXd h1(total + 1);
    h1.head(total) = h;
    h1(total) = 0.0;
    Eigen::MatrixXd e1 = Eigen::MatrixXd::Zero(e.rows(), n + 1);
    if (e.rows() > 0) e1.leftCols(n) = e;
    Eigen::VectorXd c1 = Eigen::VectorXd::Zero(n + 1);
    c1(n) = 1.0;

    ActiveSetState phase1;
    phase1.x.resize(n + 1);
    phase1.x.head(n) = x0;
    phase1.x(n) = std::max(0.0, (h - g * x0).maxCoeff());
    const Status s1 = run_active_set(c1, g1, h1, e1, options, max_iterations, phase1);
    used_iterations = phase1.iterations;
    if (s1 == Status::kMaxIterations) {
      out.status = s1;
      out.x = phase1.x.head(n);
      out.iterations = used_iterations;
      return out;
    }
    if (phase1.x(n) > options.feasibility_tolerance) {
      out.status = Status::kInfeasible;
      out.x = phase1.x.head(n);
      out.iterations = used_iterations;
      out.primal_violation = violation(out.x);
      return out;
    }
    state.x = phase1.x.head(n);
  }

  state.iterations = used_iterations;
  out.status = run_active_set(program.cost, g, h, e, options, max_iterations, state);
  out.x = state.x;
  out.iterations = state.iterations;
  out.objective = program.cost.dot(out.x);
  out.primal_violation = std::max(0.0, violation(out.x));

  out.inequality_multipliers = Eigen::VectorXd::Zero(m);
  out.lower_multipliers = Eigen::VectorXd::Zero(n);
  out.upper_multipliers = Eigen::VectorXd::Zero(n);
  out.equality_multipliers = Eigen::VectorXd::Zero(e.rows());
  if (out.status == Status::kOptimal) {
    if (state.equality_multipliers.size() == e.rows()) out.equality_multipliers = state.equality_multipliers;
    Eigen::VectorXd residual = program.cost;
    if (e.rows() > 0) residual -= e.transpose() * out.equality_multipliers;
    out.min_multiplier = 0.0;
    for (std::size_t k = 0; k < state.working.size(); ++k) {
      const int row = state.working[k];
      const double lambda = state.working_multipliers(static_cast<Eigen::Index>(k));
      residual -= lambda * g.row(row).transpose();
      out.min_multiplier = std::min(out.min_multiplier, lambda);
      if (row < m) {
        out.inequality_multipliers(row) = lambda;
      } else {
        const auto [j, is_upper] = bound_rows[static_cast<std::size_t>(row - m)];
        (is_upper ? out.upper_multipliers : out.lower_multipliers)(j) = lambda;
      }
    }
    out.stationarity = residual.cwiseAbs().maxCoeff();
  }
  return out;
}

}  // namespace mdiew::lp
