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

#include <chrono>
#include <cmath>

#include "gtest/gtest.h"

#include "mdiew/simulation.hpp"

namespace mdiew {
namespace {

ProbabilityTable ideal_werner_table(double v) {
  return simulate_probability_table(werner_state(v), tetrahedral_basis(), MeasurementModel::ideal(2, 2));
}

// J of the exact witness obtained by lifting the optimizer output.
double lifted_j(const OptimizedWitness& w, const ProbabilityTable& table, Rng& rng) {
  const InputBasis basis = tetrahedral_basis();
  const LiftedWitness lifted = lift_to_strict_witness(w.op, 2, 2, kDefaultRestarts, rng);
  return compute_j_value(decompose_witness(lifted.op, basis), table);
}

TEST(ConstraintRow, EntriesAreProductExpectations) {
  Rng rng(20);
  const InputBasis basis = tetrahedral_basis();
  for (int trial = 0; trial < 20; ++trial) {
    const PureState a = haar_random_pure_state(2, rng);
    const PureState b = haar_random_pure_state(2, rng);
    const Eigen::RowVectorXd row = constraint_row(basis, a.amplitudes(), b.amplitudes());
    ASSERT_EQ(row.size(), 16);
    EXPECT_GE(row.minCoeff(), 0.0);
    EXPECT_LE(row.maxCoeff(), 1.0);
    // Each side's transposed family sums to 2 I.
    EXPECT_NEAR(row.sum(), 4.0, 1e-12);
    const ComplexVector ab = tensor(ComplexMatrix(a.amplitudes()), ComplexMatrix(b.amplitudes()));
    for (int x = 0; x < 4; ++x) {
      for (int y = 0; y < 4; ++y) {
        const ComplexMatrix op = tensor(basis.side_a()[x].matrix().transpose(),
                                        basis.side_b()[y].matrix().transpose());
        EXPECT_NEAR(row(x * 4 + y), ab.dot(op * ab).real(), 1e-14);
      }
    }
  }
}

TEST(SampleConstraints, DeterministicForFixedSeed) {
  const InputBasis basis = tetrahedral_basis();
  Rng a(21), b(21), c(22);
  const Eigen::MatrixXd first = sample_constraints(basis, 50, a);
  EXPECT_EQ(first, sample_constraints(basis, 50, b));
  EXPECT_NE(first, sample_constraints(basis, 50, c));
  EXPECT_EQ(first.rows(), 50);
  EXPECT_THROW(sample_constraints(basis, -1, a), ParameterError);
}

TEST(BuildSampledProgram, FieldsAndValidation) {
  Rng rng(23);
  const InputBasis basis = tetrahedral_basis();
  const ProbabilityTable table = ideal_werner_table(0.5);
  const SampledProgram program = build_sampled_program(table, sample_constraints(basis, 10, rng), basis);
  EXPECT_EQ(program.n_constraints(), 10);
  EXPECT_EQ(program.objective, table.flattened());
  EXPECT_LT((program.normalization_row - Eigen::VectorXd::Ones(16)).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_THROW(build_sampled_program(table, Eigen::MatrixXd::Zero(3, 15), basis), LayoutError);
  EXPECT_THROW(build_sampled_program(table, Eigen::MatrixXd::Constant(3, 16, 2.0), basis), InvariantError);
}

TEST(Solve, SatisfiesEveryConstraintAndNormalization) {
  Rng rng(24);
  const InputBasis basis = tetrahedral_basis();
  const SampledProgram program =
      build_sampled_program(ideal_werner_table(0.8), sample_constraints(basis, 1999, rng), basis);
  const OptimizedWitness w = solve(program, basis);
  ASSERT_EQ(w.status, SolverStatus::kOptimal);
  EXPECT_GE((program.constraint_rows * w.beta.flattened()).minCoeff(), -1e-9);
  EXPECT_NEAR(w.beta.sum(), 1.0, 1e-12);
  EXPECT_NEAR(w.op.trace(), 1.0, 1e-12);
  EXPECT_LT(w.kkt_residual, 1e-8);
  EXPECT_NEAR(w.j_value, compute_j_value(w.beta, ideal_werner_table(0.8)), 1e-15);
}

TEST(Solve, MonotoneInConstraintSet) {
  Rng rng(25);
  const InputBasis basis = tetrahedral_basis();
  const ProbabilityTable table = ideal_werner_table(0.7);
  const Eigen::MatrixXd rows = sample_constraints(basis, 2000, rng);
  double previous = -std::numeric_limits<double>::infinity();
  for (int n : {100, 400, 1000, 2000}) {
    const OptimizedWitness w = solve(build_sampled_program(table, rows.topRows(n), basis), basis);
    ASSERT_EQ(w.status, SolverStatus::kOptimal) << n;
    EXPECT_GE(w.j_value, previous - 1e-12) << n;
    previous = w.j_value;
  }
}

TEST(Solve, ScalesWithTable) {
  Rng rng(26);
  const InputBasis basis = tetrahedral_basis();
  const ProbabilityTable table = ideal_werner_table(0.9);
  const Eigen::MatrixXd rows = sample_constraints(basis, 1999, rng);
  const OptimizedWitness full = solve(build_sampled_program(table, rows, basis), basis);
  const OptimizedWitness half = solve(build_sampled_program(table.scaled(0.5), rows, basis), basis);
  EXPECT_NEAR(half.j_value, 0.5 * full.j_value, 1e-10);
}

TEST(Solve, TooFewConstraintsHitTheBox) {
  Rng rng(27);
  const InputBasis basis = tetrahedral_basis();
  const OptimizedWitness w =
      solve(build_sampled_program(ideal_werner_table(1.0), sample_constraints(basis, 3, rng), basis), basis);
  EXPECT_EQ(w.status, SolverStatus::kUnboundedGuarded);
  EXPECT_EQ(to_string(w.status), "unbounded_guarded");
}

TEST(Solve, NeverWorseThanTheFixedWitness) {
  Rng rng(28);
  const InputBasis basis = tetrahedral_basis();
  const Eigen::MatrixXd rows = sample_constraints(basis, 1999, rng);
  for (double v : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const OptimizedWitness w = solve(build_sampled_program(ideal_werner_table(v), rows, basis), basis);
    EXPECT_LE(w.j_value, (1.0 - 3.0 * v) / 16.0 + 1e-9) << "v=" << v;
  }
}

TEST(OptimizeEpsilonWitness, SingletBeatsFixedWitnessAndLiftsBack) {
  Rng rng(29);
  const ProbabilityTable table = ideal_werner_table(1.0);
  const OptimizedWitness w = optimize_epsilon_witness(table, tetrahedral_basis(), 0.1, 0.1, rng);
  ASSERT_EQ(w.status, SolverStatus::kOptimal);
  EXPECT_LE(w.j_value, -0.125 + 1e-9);
  EXPECT_GE(w.j_value, -0.135);
  EXPECT_GE(lifted_j(w, table, rng), -0.125 - 1e-6);
  EXPECT_EQ(w.certificate.n_samples, 1999);
  EXPECT_LE(w.certificate.estimated_violation_rate, 0.1);
}

TEST(OptimizeEpsilonWitness, HighVisibilityIsDetected) {
  Rng rng(30);
  const ProbabilityTable table = ideal_werner_table(0.9);
  const OptimizedWitness w = optimize_epsilon_witness(table, tetrahedral_basis(), 0.1, 0.1, rng);
  EXPECT_LE(w.j_value, (1.0 - 2.7) / 16.0 + 1e-9);
  EXPECT_LT(lifted_j(w, table, rng), 0.0);
}

TEST(OptimizeEpsilonWitness, SeparableWernerLiftsToNonNegative) {
  Rng rng(31);
  const ProbabilityTable table = ideal_werner_table(0.2);
  const OptimizedWitness w = optimize_epsilon_witness(table, tetrahedral_basis(), 0.1, 0.1, rng);
  EXPECT_GE(w.j_value, -0.05);
  EXPECT_GE(lifted_j(w, table, rng), -1e-9);
}

TEST(OptimizeEpsilonWitness, SeparableTablesStayWithinSamplingSlack) {
  Rng rng(32);
  const InputBasis basis = tetrahedral_basis();
  for (int trial = 0; trial < 100; ++trial) {
    const DensityMatrix rho(tensor(haar_random_pure_state(2, rng).density().matrix(),
                                   haar_random_pure_state(2, rng).density().matrix()));
    const ProbabilityTable table = simulate_probability_table(rho, basis, MeasurementModel::ideal(2, 2));
    const OptimizedWitness w = optimize_epsilon_witness(table, basis, 0.1, 0.1, rng);
    EXPECT_GE(w.j_value, -0.05) << trial;
    if (trial % 10 == 0) EXPECT_GE(lifted_j(w, table, rng), -1e-9) << trial;
  }
}

TEST(OptimizeEpsilonWitness, PhaseFlippedSingletIsStillDetected) {
  Rng rng(33);
  const ProbabilityTable table = simulate_probability_table(werner_state(1.0), tetrahedral_basis(),
                                                            MeasurementModel::phase_flip());
  const OptimizedWitness w = optimize_epsilon_witness(table, tetrahedral_basis(), 0.1, 0.1, rng);
  EXPECT_LT(w.j_value, -0.1);
  EXPECT_GT(compute_j_value(decompose_witness(werner_witness(), tetrahedral_basis()), table), 0.0);
}

TEST(OptimizeEpsilonWitness, RefinementOnlyTightens) {
  Rng plain_rng(34), refined_rng(34);
  const ProbabilityTable table = ideal_werner_table(1.0);
  OptimizeOptions options;
  options.refinement_rounds = kDefaultRefinementRounds;
  const OptimizedWitness plain = optimize_epsilon_witness(table, tetrahedral_basis(), 0.1, 0.1, plain_rng);
  const OptimizedWitness refined =
      optimize_epsilon_witness(table, tetrahedral_basis(), 0.1, 0.1, refined_rng, options);
  EXPECT_GE(refined.j_value, plain.j_value - 1e-12);
  EXPECT_GT(refined.refinement_rounds, 0);
  EXPECT_LE(refined.certificate.estimated_violation_rate, plain.certificate.estimated_violation_rate);
}

TEST(SweepGrid, ExactDecimalPoints) {
  const std::vector<double> grid = sweep_grid(0.02);
  ASSERT_EQ(grid.size(), 51u);
  EXPECT_EQ(grid.front(), 0.0);
  EXPECT_EQ(grid.back(), 1.0);
  EXPECT_EQ(grid[17], 0.34);
  const std::vector<double> odd = sweep_grid(0.3);
  EXPECT_EQ(odd, (std::vector<double>{0.0, 0.3, 0.6, 0.8999999999999999, 1.0}));
  EXPECT_THROW(sweep_grid(0.0), ParameterError);
}

TEST(SweepWerner, IdealModelReproducesClosedForm) {
  const std::vector<double> v{0.0, 0.5, 1.0};
  const auto points = sweep_werner(v, MeasurementModel::ideal(2, 2), tetrahedral_basis(), 0.1, 0.1, 1);
  for (const SweepPoint& p : points) {
    EXPECT_NEAR(p.j_original, (1.0 - 3.0 * p.v) / 16.0, 1e-12);
    EXPECT_LE(p.j_optimized, p.j_original + 1e-9);
  }
}

TEST(SweepWerner, PhaseFlipModelRecoversDetection) {
  const std::vector<double> v{0.2, 0.3, 0.34, 0.4, 0.6, 1.0};
  const auto points = sweep_werner(v, MeasurementModel::phase_flip(), tetrahedral_basis(), 0.1, 0.1, 7);
  for (const SweepPoint& p : points) {
    EXPECT_GE(p.j_original, 0.0) << p.v;
    EXPECT_LE(p.j_optimized, p.j_original + 1e-9) << p.v;
    if (p.v <= 0.3) EXPECT_GT(p.j_optimized, 0.0) << p.v;
    if (p.v >= 0.34) EXPECT_LT(p.j_optimized, 0.0) << p.v;
  }
}

TEST(SweepWerner, IndependentOfThreadCount) {
  const std::vector<double> v = sweep_grid(0.25);
  const auto one = sweep_werner(v, MeasurementModel::phase_flip(), tetrahedral_basis(), 0.1, 0.1, 99, {}, 1);
  const auto three = sweep_werner(v, MeasurementModel::phase_flip(), tetrahedral_basis(), 0.1, 0.1, 99, {}, 3);
  ASSERT_EQ(one.size(), three.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    EXPECT_EQ(one[i].j_optimized, three[i].j_optimized);
    EXPECT_EQ(one[i].j_original, three[i].j_original);
  }
}

TEST(SweepWerner, RejectsBadParameters) {
  EXPECT_THROW(sweep_werner({1.5}, MeasurementModel::ideal(2, 2), tetrahedral_basis(), 0.1, 0.1, 0),
               ParameterError);
  EXPECT_THROW(sweep_werner({0.5}, MeasurementModel::ideal(2, 2), tetrahedral_basis(), 0.0, 0.1, 0),
               ParameterError);
}

}  // namespace
}  // namespace mdiew
