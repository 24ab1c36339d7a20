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

#include "mdiew/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>

#include "mdiew/lp.hpp"

namespace mdiew {

namespace {

Eigen::VectorXd side_expectations(const std::vector<DensityMatrix>& side, const ComplexVector& v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(side.size()));
  for (std::size_t k = 0; k < side.size(); ++k) {
    out(static_cast<Eigen::Index>(k)) = v.dot(side[k].matrix().transpose() * v).real();
  }
  return out;
}

constexpr double kRowTolerance = 1e-12;

}  // namespace

std::string to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::kOptimal: return "optimal";
    case SolverStatus::kInfeasible: return "infeasible";
    case SolverStatus::kUnboundedGuarded: return "unbounded_guarded";
    case SolverStatus::kMaxIterations: return "max_iterations";
  }
  return "unknown";
}

std::vector<ProductSample> sample_product_states(int d_a, int d_b, std::int64_t n, Rng& rng) {
  if (n < 1) throw ParameterError("sample_product_states: n must be >= 1");
  std::vector<ProductSample> out;
  out.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    PureState a = haar_random_pure_state(d_a, rng);
    PureState b = haar_random_pure_state(d_b, rng);
    out.emplace_back(std::move(a), std::move(b));
  }
  return out;
}

Eigen::RowVectorXd constraint_row(const InputBasis& basis, const ComplexVector& psi,
                                  const ComplexVector& phi) {
  if (psi.size() != basis.d_a() || phi.size() != basis.d_b()) {
    throw LayoutError("constraint_row: state dimensions do not match the basis");
  }
  const Eigen::VectorXd ea = side_expectations(basis.side_a(), psi);
  const Eigen::VectorXd eb = side_expectations(basis.side_b(), phi);
  Eigen::RowVectorXd row(ea.size() * eb.size());
  for (Eigen::Index x = 0; x < ea.size(); ++x) {
    for (Eigen::Index y = 0; y < eb.size(); ++y) row(x * eb.size() + y) = ea(x) * eb(y);
  }
  return row;
}

Eigen::MatrixXd sample_constraints(const InputBasis& basis, std::int64_t n, Rng& rng) {
  const auto states = sample_product_states(basis.d_a(), basis.d_b(), n, rng);
  Eigen::MatrixXd rows(n, basis.size_a() * basis.size_b());
  for (std::int64_t i = 0; i < n; ++i) {
    const auto& [a, b] = states[static_cast<std::size_t>(i)];
    rows.row(i) = constraint_row(basis, a.amplitudes(), b.amplitudes());
  }
  return rows;
}

SampledProgram build_sampled_program(const ProbabilityTable& table,
                                     const Eigen::MatrixXd& constraint_rows,
                                     const InputBasis& basis) {
  if (table.rows() != basis.size_a() || table.cols() != basis.size_b()) {
    throw LayoutError("build_sampled_program: probability table shape does not match the basis");
  }
  const int n_coeff = basis.size_a() * basis.size_b();
  if (constraint_rows.rows() > 0 && constraint_rows.cols() != n_coeff) {
    throw LayoutError("build_sampled_program: constraint rows have " +
                      std::to_string(constraint_rows.cols()) + " columns, expected " +
                      std::to_string(n_coeff));
  }
  if (constraint_rows.size() > 0 &&
      (constraint_rows.minCoeff() < -kRowTolerance || constraint_rows.maxCoeff() > 1.0 + kRowTolerance)) {
    throw InvariantError("build_sampled_program: constraint rows must hold expectations in [0, 1]");
  }
  SampledProgram program;
  program.objective = table.flattened();
  program.constraint_rows = constraint_rows.rows() > 0 ? constraint_rows : Eigen::MatrixXd(0, n_coeff);
  program.normalization_row.resize(n_coeff);
  for (int x = 0; x < basis.size_a(); ++x) {
    for (int y = 0; y < basis.size_b(); ++y) {
      program.normalization_row(x * basis.size_b() + y) = basis.product_transpose(x, y).trace().real();
    }
  }
  program.table_rows = table.rows();
  program.table_cols = table.cols();
  return program;
}

OptimizedWitness solve(const SampledProgram& program, const InputBasis& basis,
                       const SolveOptions& options) {
  const int n = static_cast<int>(program.objective.size());
  if (n != program.table_rows * program.table_cols || program.normalization_row.size() != n ||
      program.constraint_rows.cols() != n) {
    throw LayoutError("solve: malformed sampled program");
  }
  lp::LinearProgram lin = lp::LinearProgram::with_variables(n);
  lin.cost = program.objective;
  lin.inequality = program.constraint_rows;
  lin.inequality_rhs = Eigen::VectorXd::Zero(program.n_constraints());
  lin.equality = program.normalization_row.transpose();
  lin.equality_rhs = Eigen::VectorXd::Ones(1);
  lin.lower = Eigen::VectorXd::Constant(n, -options.box_bound);
  lin.upper = Eigen::VectorXd::Constant(n, options.box_bound);

  lp::Options lp_options;
  lp_options.optimality_tolerance = options.tolerance;
  // Uniform coefficients meet the normalization and every realizable row.
  const double norm2 = program.normalization_row.squaredNorm();
  if (norm2 > 0.0) lp_options.start = program.normalization_row / norm2;

  const lp::Solution sol = lp::solve(lin, lp_options);

  OptimizedWitness out;
  out.lp_iterations = sol.iterations;
  out.kkt_residual = std::max({sol.primal_violation, -sol.min_multiplier, sol.stationarity});
  switch (sol.status) {
    case lp::Status::kOptimal: {
      const bool on_box = (sol.x.cwiseAbs().array() >= options.box_bound - options.tolerance).any();
      out.status = on_box ? SolverStatus::kUnboundedGuarded : SolverStatus::kOptimal;
      break;
    }
    case lp::Status::kUnbounded:
      out.status = SolverStatus::kUnboundedGuarded;
      break;
    case lp::Status::kInfeasible: out.status = SolverStatus::kInfeasible; break;
    case lp::Status::kMaxIterations: out.status = SolverStatus::kMaxIterations; break;
  }
  out.beta = CoefficientTable::from_flat(sol.x, program.table_rows, program.table_cols);
  out.j_value = program.objective.dot(sol.x);
  out.op = reconstruct(out.beta, basis);
  out.certificate.n_samples = program.n_constraints();
  return out;
}

OptimizedWitness refine_with_constraint_generation(SampledProgram& program, const InputBasis& basis,
                                                   OptimizedWitness current, int rounds,
                                                   int restarts, const SolveOptions& options,
                                                   Rng& rng) {
  for (int round = 0; round < rounds; ++round) {
    if (current.status == SolverStatus::kInfeasible) break;
    const ProductMinimum worst =
        min_product_expectation(current.op, basis.d_a(), basis.d_b(), restarts, rng);
    if (worst.value >= -options.tolerance) break;
    const Eigen::RowVectorXd cut =
        constraint_row(basis, worst.state_a.amplitudes(), worst.state_b.amplitudes());
    program.constraint_rows.conservativeResize(program.constraint_rows.rows() + 1, Eigen::NoChange);
    program.constraint_rows.bottomRows(1) = cut;
    const EpsilonCertificate certificate = current.certificate;
    current = solve(program, basis, options);
    current.certificate = certificate;
    current.refinement_rounds = round + 1;
  }
  return current;
}

OptimizedWitness optimize_epsilon_witness(const ProbabilityTable& table, const InputBasis& basis,
                                          double epsilon, double delta, Rng& rng,
                                          const OptimizeOptions& options) {
  const std::int64_t n = required_sample_count(epsilon, delta, basis.d_a(), basis.d_b());
  const Eigen::MatrixXd rows = sample_constraints(basis, n, rng);
  SampledProgram program = build_sampled_program(table, rows, basis);
  OptimizedWitness result = solve(program, basis, options.solve);
  if (options.refinement_rounds > 0) {
    result = refine_with_constraint_generation(program, basis, std::move(result),
                                               options.refinement_rounds,
                                               options.refinement_restarts, options.solve, rng);
  }

  result.certificate.epsilon = epsilon;
  result.certificate.delta = delta;
  result.certificate.n_samples = n;
  // Fresh states only; the training constraints would bias the estimate.
  const std::int64_t n_check = std::min<std::int64_t>(10 * n, options.max_certification_samples);
  result.certificate.estimated_violation_rate =
      estimate_failure_rate(result.op, basis.d_a(), basis.d_b(), n_check, rng);
  return result;
}

std::vector<double> sweep_grid(double step) {
  if (!(step > 0.0 && step <= 1.0)) throw ParameterError("sweep_grid: step must lie in (0, 1]");
  std::vector<double> grid;
  const double cells = std::round(1.0 / step);
  if (std::abs(cells * step - 1.0) < 1e-9) {
    // i / cells reproduces decimal grids such as 0.02 * i without drift.
    for (int i = 0; i <= static_cast<int>(cells); ++i) grid.push_back(i / cells);
    return grid;
  }
  for (int i = 0; i * step < 1.0 - 1e-12; ++i) grid.push_back(i * step);
  grid.push_back(1.0);
  return grid;
}

std::vector<SweepPoint> sweep_werner(const std::vector<double>& v_values,
                                     const MeasurementModel& model, const InputBasis& basis,
                                     double epsilon, double delta, std::uint64_t master_seed,
                                     const OptimizeOptions& options, int threads) {
  for (double v : v_values) {
    if (!(v >= 0.0 && v <= 1.0)) throw ParameterError("sweep_werner: visibilities must lie in [0, 1]");
  }
  required_sample_count(epsilon, delta, basis.d_a(), basis.d_b());  // validates parameters
  const CoefficientTable fixed = decompose_witness(werner_witness(), basis);

  std::vector<SweepPoint> points(v_values.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < v_values.size(); i = next++) {
      try {
        Rng rng(derive_seed(master_seed, i));
        const ProbabilityTable table =
            simulate_probability_table(werner_state(v_values[i]), basis, model, master_seed);
        const OptimizedWitness opt =
            optimize_epsilon_witness(table, basis, epsilon, delta, rng, options);
        points[i] = {v_values[i], compute_j_value(fixed, table), opt.j_value, opt.status};
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  int n_threads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  n_threads = std::clamp(n_threads, 1, std::max(1, static_cast<int>(v_values.size())));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return points;
}

}  // namespace mdiew
