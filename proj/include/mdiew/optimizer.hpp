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

// Epsilon-level optimal witness search: the witness condition "non-negative
// on every separable state" is replaced by N sampled pure product states,
// which turns the search into a linear program over the coefficients.

#ifndef MDIEW_OPTIMIZER_HPP_
#define MDIEW_OPTIMIZER_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mdiew/qmat.hpp"
#include "mdiew/simulation.hpp"
#include "mdiew/witness.hpp"

namespace mdiew {

inline constexpr double kDefaultBoxBound = 100.0;
inline constexpr int kDefaultRefinementRounds = 20;
inline constexpr double kConstraintTolerance = 1e-9;

struct SampledProgram {
  Eigen::VectorXd objective;         // flattened probability table
  Eigen::MatrixXd constraint_rows;   // one row per sampled product state
  Eigen::VectorXd normalization_row; // Tr[omega_x^T (x) tau_y^T]
  int table_rows = 0;
  int table_cols = 0;

  int n_constraints() const { return static_cast<int>(constraint_rows.rows()); }
};

enum class SolverStatus { kOptimal, kInfeasible, kUnboundedGuarded, kMaxIterations };

std::string to_string(SolverStatus s);

struct OptimizedWitness {
  CoefficientTable beta;
  double j_value = 0.0;
  HermitianOperator op;
  EpsilonCertificate certificate;
  SolverStatus status = SolverStatus::kInfeasible;
  int lp_iterations = 0;
  int refinement_rounds = 0;
  double kkt_residual = 0.0;
};

struct SolveOptions {
  double box_bound = kDefaultBoxBound;
  double tolerance = kConstraintTolerance;
};

struct OptimizeOptions {
  SolveOptions solve;
  /// Constraint-generation rounds after the sampled solve; 0 disables.
  int refinement_rounds = 0;
  int refinement_restarts = kDefaultRestarts;
  std::int64_t max_certification_samples = 100000;
};

using ProductSample = std::pair<PureState, PureState>;

std::vector<ProductSample> sample_product_states(int d_a, int d_b, std::int64_t n, Rng& rng);

/// Entry (x, y) is <psi|omega_x^T|psi> <phi|tau_y^T|phi>, flattened row-major.
Eigen::RowVectorXd constraint_row(const InputBasis& basis, const ComplexVector& psi,
                                  const ComplexVector& phi);

/// n rows for independent Haar-random product states.
Eigen::MatrixXd sample_constraints(const InputBasis& basis, std::int64_t n, Rng& rng);

SampledProgram build_sampled_program(const ProbabilityTable& table,
                                     const Eigen::MatrixXd& constraint_rows,
                                     const InputBasis& basis);

/// Minimizes the objective over beta subject to every constraint row >= 0,
/// the normalization equality and the box |beta| <= box_bound.
OptimizedWitness solve(const SampledProgram& program, const InputBasis& basis,
                       const SolveOptions& options = {});

/// Appends violated product states found by the see-saw on the reconstructed
/// operator and re-solves, for at most `rounds` rounds.
OptimizedWitness refine_with_constraint_generation(SampledProgram& program, const InputBasis& basis,
                                                   OptimizedWitness current, int rounds,
                                                   int restarts, const SolveOptions& options,
                                                   Rng& rng);

OptimizedWitness optimize_epsilon_witness(const ProbabilityTable& table, const InputBasis& basis,
                                          double epsilon, double delta, Rng& rng,
                                          const OptimizeOptions& options = {});

struct SweepPoint {
  double v = 0.0;
  double j_original = 0.0;
  double j_optimized = 0.0;
  SolverStatus status = SolverStatus::kOptimal;
};

/// Default grid {0, step, 2 step, ..., 1}.
std::vector<double> sweep_grid(double step);

/// For each visibility: J of the fixed Werner-witness coefficients and J of
/// the epsilon-level optimum, both on the simulated table. Point i draws from
/// the stream derive_seed(master_seed, i), so results do not depend on
/// scheduling.
std::vector<SweepPoint> sweep_werner(const std::vector<double>& v_values,
                                     const MeasurementModel& model, const InputBasis& basis,
                                     double epsilon, double delta, std::uint64_t master_seed,
                                     const OptimizeOptions& options = {}, int threads = 0);

}  // namespace mdiew

#endif  // MDIEW_OPTIMIZER_HPP_
