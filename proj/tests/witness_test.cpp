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

#include "mdiew/witness.hpp"

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"

#include "mdiew/simulation.hpp"

namespace mdiew {
namespace {

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

ComplexMatrix ket_projector(int dim, int index) {
  ComplexMatrix p = ComplexMatrix::Zero(dim, dim);
  p(index, index) = 1.0;
  return p;
}

// Brute-force minimum of <psi phi|W|psi phi> over a Bloch-sphere grid on both
// qubits; poles are included exactly.
double bloch_grid_minimum(const ComplexMatrix& w, int n_theta, int n_phi) {
  std::vector<ComplexVector> states;
  for (int t = 0; t <= n_theta; ++t) {
    const double theta = std::numbers::pi * t / n_theta;
    for (int p = 0; p < n_phi; ++p) {
      const double phase = 2.0 * std::numbers::pi * p / n_phi;
      ComplexVector v(2);
      v << std::cos(theta / 2.0), std::polar(std::sin(theta / 2.0), phase);
      states.push_back(v);
      if (t == 0 || t == n_theta) break;
    }
  }
  double best = std::numeric_limits<double>::infinity();
  for (const auto& a : states) {
    for (const auto& b : states) {
      ComplexVector v(4);
      v << a(0) * b(0), a(0) * b(1), a(1) * b(0), a(1) * b(1);
      best = std::min(best, v.dot(w * v).real());
    }
  }
  return best;
}

TEST(TetrahedralBasis, FirstElementIsBlochProjector) {
  const InputBasis basis = tetrahedral_basis();
  const double c = 1.0 / std::sqrt(3.0);
  const ComplexMatrix expected =
      (pauli(0) + c * (pauli(1) + pauli(2) + pauli(3))) / 2.0;
  EXPECT_LT(max_abs(basis.side_a()[0].matrix() - expected), 1e-15);
  EXPECT_LT(max_abs(basis.side_b()[0].matrix() - expected), 1e-15);
}

TEST(TetrahedralBasis, ElementsSumToTwiceIdentity) {
  const InputBasis basis = tetrahedral_basis();
  ComplexMatrix sum = ComplexMatrix::Zero(2, 2);
  for (const auto& w : basis.side_a()) sum += w.matrix();
  EXPECT_LT(max_abs(sum - 2.0 * ComplexMatrix::Identity(2, 2)), 1e-14);
}

TEST(TetrahedralBasis, ElementsArePureStates) {
  const InputBasis basis = tetrahedral_basis();
  EXPECT_EQ(basis.size_a(), 4);
  EXPECT_EQ(basis.size_b(), 4);
  for (const auto& w : basis.side_a()) {
    const auto e = eigendecompose_hermitian(w.op()).eigenvalues;
    EXPECT_NEAR(e(0), 0.0, 1e-14);
    EXPECT_NEAR(e(1), 1.0, 1e-14);
  }
}

TEST(InputBasis, RejectsWrongCountAndDependentFamilies) {
  const InputBasis good = tetrahedral_basis();
  std::vector<DensityMatrix> three(good.side_a().begin(), good.side_a().begin() + 3);
  EXPECT_THROW(InputBasis("short", three, good.side_b()), SingularBasisError);
  std::vector<DensityMatrix> dependent = good.side_a();
  dependent[3] = dependent[2];
  EXPECT_THROW(InputBasis("dup", dependent, good.side_b()), SingularBasisError);
  std::vector<DensityMatrix> mixed = good.side_a();
  mixed[0] = DensityMatrix(ComplexMatrix(ComplexMatrix::Identity(3, 3) / 3.0));
  EXPECT_THROW(InputBasis("mixed", mixed, good.side_b()), LayoutError);
}

TEST(DecomposeWitness, IdentityGivesUniformQuarter) {
  const CoefficientTable beta = decompose_witness(HermitianOperator::identity(4), tetrahedral_basis());
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y) EXPECT_NEAR(beta(x, y), 0.25, 1e-12);
}

TEST(DecomposeWitness, WernerWitnessCoefficients) {
  const CoefficientTable beta = decompose_witness(werner_witness(), tetrahedral_basis());
  for (int x = 0; x < 4; ++x) {
    for (int y = 0; y < 4; ++y) EXPECT_NEAR(beta(x, y), x == y ? 5.0 / 8.0 : -1.0 / 8.0, 1e-10);
  }
  EXPECT_NEAR(beta.sum(), 1.0, 1e-12);
}

TEST(DecomposeWitness, RoundTripsBothWays) {
  Rng rng(41);
  const InputBasis basis = tetrahedral_basis();
  for (int trial = 0; trial < 25; ++trial) {
    const HermitianOperator w = random_hermitian(4, rng);
    EXPECT_LT(max_abs(reconstruct(decompose_witness(w, basis), basis).matrix() - w.matrix()), 1e-10);

    Eigen::MatrixXd raw = Eigen::MatrixXd::Random(4, 4);
    const CoefficientTable beta(raw);
    const CoefficientTable back = decompose_witness(reconstruct(beta, basis), basis);
    EXPECT_LT((back.beta() - beta.beta()).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(DecomposeWitness, RejectsDimensionMismatch) {
  EXPECT_THROW(decompose_witness(HermitianOperator::identity(3), tetrahedral_basis()), LayoutError);
}

TEST(Reconstruct, ZeroAndTraceIdentity) {
  const InputBasis basis = tetrahedral_basis();
  EXPECT_EQ(max_abs(reconstruct(CoefficientTable(Eigen::MatrixXd::Zero(4, 4)), basis).matrix()), 0.0);
  const CoefficientTable beta(Eigen::MatrixXd::Random(4, 4));
  EXPECT_NEAR(reconstruct(beta, basis).trace(), beta.sum(), 1e-12);
  EXPECT_THROW(reconstruct(CoefficientTable(Eigen::MatrixXd::Zero(3, 4)), basis), LayoutError);
}

TEST(MinProductExpectation, IdentityIsOne) {
  Rng rng(1);
  EXPECT_NEAR(min_product_expectation(HermitianOperator::identity(4), 2, 2, 5, rng).value, 1.0, 1e-12);
}

TEST(MinProductExpectation, WernerWitnessIsTangent) {
  Rng rng(2);
  const HermitianOperator w = werner_witness().op();
  const ProductMinimum m = min_product_expectation(w, 2, 2, kDefaultRestarts, rng);
  const double grid = bloch_grid_minimum(w.matrix(), 30, 60);
  EXPECT_NEAR(grid, 0.0, 1e-12);
  EXPECT_NEAR(m.value, 0.0, 1e-10);
}

TEST(MinProductExpectation, DiagonalNegativeProjector) {
  Rng rng(3);
  const HermitianOperator w(ComplexMatrix(-ket_projector(4, 0)));
  const ProductMinimum m = min_product_expectation(w, 2, 2, 10, rng);
  EXPECT_NEAR(m.value, -1.0, 1e-12);
  EXPECT_NEAR(std::norm(m.state_a.amplitudes()(0)), 1.0, 1e-10);
  EXPECT_NEAR(std::norm(m.state_b.amplitudes()(0)), 1.0, 1e-10);
}

TEST(MinProductExpectation, MatchesGridOracleAndBoundsSpectrum) {
  Rng rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const HermitianOperator w = random_hermitian(4, rng);
    const double seesaw = min_product_expectation(w, 2, 2, kDefaultRestarts, rng).value;
    const double grid = bloch_grid_minimum(w.matrix(), 40, 80);
    EXPECT_LE(seesaw, grid + 1e-12);
    EXPECT_GE(seesaw, grid - 0.02 * max_abs(w.matrix()));
    EXPECT_GE(seesaw, min_eigenvalue(w) - 1e-12);
  }
}

TEST(MinProductExpectation, ValidatesArguments) {
  Rng rng(5);
  EXPECT_THROW(min_product_expectation(HermitianOperator::identity(4), 2, 3, 1, rng), LayoutError);
  EXPECT_THROW(min_product_expectation(HermitianOperator::identity(4), 2, 2, 0, rng), ParameterError);
}

TEST(WitnessOperator, RejectsPositiveOperatorsAndBadTrace) {
  EXPECT_THROW(WitnessOperator(HermitianOperator::identity(4), 2, 2), InvariantError);
  EXPECT_THROW(WitnessOperator(werner_witness().op() * 2.0, 2, 2, true), InvariantError);
  EXPECT_THROW(WitnessOperator(werner_witness().op(), 2, 3), LayoutError);
}

TEST(IsStrictWitness, Examples) {
  Rng rng(6);
  EXPECT_TRUE(is_strict_witness(werner_witness(), kDefaultRestarts, rng));
  EXPECT_FALSE(is_strict_witness(HermitianOperator::identity(4), 2, 2, kDefaultRestarts, rng));
  EXPECT_FALSE(is_strict_witness(HermitianOperator::identity(4) * -1.0, 2, 2, kDefaultRestarts, rng));
}

TEST(EstimateFailureRate, Examples) {
  Rng rng(7);
  EXPECT_EQ(estimate_failure_rate(HermitianOperator::identity(4), 2, 2, 1000, rng), 0.0);
  EXPECT_EQ(estimate_failure_rate(HermitianOperator::identity(4) * -1.0, 2, 2, 1000, rng), 1.0);
  EXPECT_EQ(estimate_failure_rate(werner_witness().op(), 2, 2, 100000, rng), 0.0);
  EXPECT_THROW(estimate_failure_rate(HermitianOperator::identity(4), 2, 2, 0, rng), ParameterError);
}

TEST(EstimateFailureRate, MonotoneUnderLift) {
  Rng source(8);
  for (int trial = 0; trial < 5; ++trial) {
    const HermitianOperator w = random_hermitian(4, source);
    double previous = 1.0;
    for (double alpha : {0.0, 0.25, 0.5, 1.0, 2.0}) {
      Rng rng(100 + trial);  // same states for every alpha
      const double rate = estimate_failure_rate(w + HermitianOperator::identity(4) * alpha, 2, 2,
                                                5000, rng);
      EXPECT_LE(rate, previous);
      previous = rate;
    }
  }
}

TEST(LiftToStrictWitness, StrictInputIsUnchanged) {
  Rng rng(9);
  const LiftedWitness lifted = lift_to_strict_witness(werner_witness().op(), 2, 2, 20, rng);
  EXPECT_EQ(lifted.alpha, 0.0);
  EXPECT_FALSE(lifted.degenerate);
  EXPECT_LT(max_abs(lifted.op.matrix() - werner_witness().op().matrix()), 1e-15);
}

TEST(LiftToStrictWitness, NegativeProductProjectorIsDegenerate) {
  Rng rng(10);
  const LiftedWitness lifted =
      lift_to_strict_witness(HermitianOperator(ComplexMatrix(-ket_projector(4, 0))), 2, 2, 20, rng);
  EXPECT_NEAR(lifted.alpha, 1.0, 1e-12);
  const ComplexMatrix expected = (ComplexMatrix::Identity(4, 4) - ket_projector(4, 0)) / 3.0;
  EXPECT_LT(max_abs(lifted.op.matrix() - expected), 1e-12);
  EXPECT_TRUE(lifted.degenerate);
  EXPECT_THROW(lifted.witness(), InvariantError);
}

TEST(LiftToStrictWitness, RecoversShiftedWitness) {
  Rng rng(11);
  // (W - 0.05 I) / 0.8 has unit trace and min product expectation -0.0625.
  const HermitianOperator w = werner_witness().op();
  const HermitianOperator shifted = (w - HermitianOperator::identity(4) * 0.05) * (1.0 / 0.8);
  const LiftedWitness lifted = lift_to_strict_witness(shifted, 2, 2, kDefaultRestarts, rng);
  EXPECT_NEAR(lifted.alpha, 0.0625, 1e-10);
  EXPECT_FALSE(lifted.degenerate);
  EXPECT_LT(max_abs(lifted.op.matrix() - w.matrix()), 1e-9);
  EXPECT_TRUE(is_strict_witness(lifted.witness(), kDefaultRestarts, rng));
  EXPECT_EQ(estimate_failure_rate(lifted.op, 2, 2, 10000, rng), 0.0);
}

TEST(RequiredSampleCount, BoundArithmetic) {
  EXPECT_EQ(required_sample_count(0.1, 0.1, 2, 2), 1999);
  EXPECT_EQ(required_sample_count(0.01, 0.01, 2, 2), 199999);
  EXPECT_EQ(required_sample_count(0.5, 0.5, 1, 1), 7);
  const std::int64_t near_one = required_sample_count(1.0 - 1e-9, 1.0 - 1e-9, 2, 2);
  EXPECT_GE(near_one, 19);
  EXPECT_LE(near_one, 20);
}

TEST(RequiredSampleCount, MonotoneDecreasing) {
  std::int64_t previous = std::numeric_limits<std::int64_t>::max();
  for (double eps : {0.01, 0.02, 0.05, 0.1, 0.3, 0.6, 0.9}) {
    const std::int64_t n = required_sample_count(eps, 0.1, 2, 2);
    EXPECT_LE(n, previous);
    previous = n;
    EXPECT_LE(required_sample_count(0.1, eps, 2, 2), required_sample_count(0.1, eps / 2.0, 2, 2));
  }
}

TEST(RequiredSampleCount, RejectsParametersOutsideUnitInterval) {
  EXPECT_THROW(required_sample_count(0.0, 0.1, 2, 2), ParameterError);
  EXPECT_THROW(required_sample_count(1.0, 0.1, 2, 2), ParameterError);
  EXPECT_THROW(required_sample_count(0.1, -0.1, 2, 2), ParameterError);
  EXPECT_THROW(required_sample_count(std::nan(""), 0.1, 2, 2), ParameterError);
}

}  // namespace
}  // namespace mdiew
