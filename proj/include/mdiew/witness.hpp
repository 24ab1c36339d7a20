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

// Witness operators, their decomposition onto product density-matrix bases,
// numerical strictness oracles and epsilon-level certification.

#ifndef MDIEW_WITNESS_HPP_
#define MDIEW_WITNESS_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mdiew/qmat.hpp"

namespace mdiew {

/// Tolerance of the numerical witness oracles (see-saw and eigenvalue checks).
inline constexpr double kWitnessTolerance = 1e-9;
inline constexpr int kDefaultRestarts = 50;
inline constexpr double kSeeSawConvergence = 1e-12;

/// Ordered families {omega_x} on A and {tau_y} on B; each side must span the
/// Hermitian operators of its subsystem.
class InputBasis {
 public:
  InputBasis() = default;
  InputBasis(std::string name, std::vector<DensityMatrix> side_a, std::vector<DensityMatrix> side_b);

  const std::string& name() const { return name_; }
  int d_a() const { return d_a_; }
  int d_b() const { return d_b_; }
  const std::vector<DensityMatrix>& side_a() const { return side_a_; }
  const std::vector<DensityMatrix>& side_b() const { return side_b_; }
  int size_a() const { return static_cast<int>(side_a_.size()); }
  int size_b() const { return static_cast<int>(side_b_.size()); }

  /// omega_x^T (+) tau_y^T, cached.
  const ComplexMatrix& product_transpose(int x, int y) const { return products_[x * size_b() + y]; }

 private:
  std::string name_;
  int d_a_ = 0;
  int d_b_ = 0;
  std::vector<DensityMatrix> side_a_;
  std::vector<DensityMatrix> side_b_;
  std::vector<ComplexMatrix> products_;
};

/// Real coefficients beta(x, y) of sum beta omega_x^T (x) tau_y^T.
class CoefficientTable {
 public:
  CoefficientTable() = default;
  explicit CoefficientTable(Eigen::MatrixXd beta);

  const Eigen::MatrixXd& beta() const { return beta_; }
  int rows() const { return static_cast<int>(beta_.rows()); }
  int cols() const { return static_cast<int>(beta_.cols()); }
  double operator()(int x, int y) const { return beta_(x, y); }
  double sum() const { return beta_.sum(); }

  /// Row-major flattening, index x * cols + y.
  Eigen::VectorXd flattened() const;
  static CoefficientTable from_flat(const Eigen::VectorXd& flat, int rows, int cols);

 private:
  Eigen::MatrixXd beta_;
};

/// Hermitian operator on A (x) B with at least one negative eigenvalue.
class WitnessOperator {
 public:
  WitnessOperator(HermitianOperator op, int d_a, int d_b, bool trace_normalized = false);

  const HermitianOperator& op() const { return op_; }
  int d_a() const { return d_a_; }
  int d_b() const { return d_b_; }
  bool trace_normalized() const { return trace_normalized_; }

 private:
  HermitianOperator op_;
  int d_a_;
  int d_b_;
  bool trace_normalized_;
};

struct EpsilonCertificate {
  double epsilon = 0.0;
  double delta = 0.0;  // failure probability of the sampled program
  std::int64_t n_samples = 0;
  double estimated_violation_rate = 0.0;
};

struct ProductMinimum {
  double value = 0.0;
  PureState state_a;
  PureState state_b;
};

/// Result of W = (W_eps + alpha I) / Tr[...]. `degenerate` is set when the
/// lifted operator has no negative eigenvalue left.
struct LiftedWitness {
  HermitianOperator op;
  double alpha = 0.0;
  bool degenerate = false;
  int d_a = 0;
  int d_b = 0;

  /// Throws InvariantError for degenerate lifts.
  WitnessOperator witness() const;
};

/// Qubit bases omega_x = s_x P s_x, tau_y = s_y P s_y with P = (I + n.sigma)/2,
/// n = (1,1,1)/sqrt(3) and s_0 = I, s_1..3 the Pauli matrices.
InputBasis tetrahedral_basis();

/// Pauli matrices indexed 0..3 (identity first).
ComplexMatrix pauli(int index);

/// Real isometric coordinates of a Hermitian matrix: the diagonal, then
/// sqrt(2) Re and sqrt(2) Im of the strict upper triangle.
Eigen::VectorXd hermitian_coordinates(const ComplexMatrix& h);

CoefficientTable decompose_witness(const HermitianOperator& w, const InputBasis& basis);
CoefficientTable decompose_witness(const WitnessOperator& w, const InputBasis& basis);

HermitianOperator reconstruct(const CoefficientTable& beta, const InputBasis& basis);

/// Contracts W against |phi> on B, giving the d_a x d_a operator <phi|W|phi>_B.
ComplexMatrix contract_b(const ComplexMatrix& w, int d_a, int d_b, const ComplexVector& phi);
/// Contracts W against |psi> on A, giving the d_b x d_b operator <psi|W|psi>_A.
ComplexMatrix contract_a(const ComplexMatrix& w, int d_a, int d_b, const ComplexVector& psi);

/// <psi phi| W |psi phi>.
double product_expectation(const ComplexMatrix& w, const ComplexVector& psi, const ComplexVector& phi);

/// Alternating minimum-eigenvector minimization of <psi phi|W|psi phi> from
/// `restarts` Haar-random starts. A heuristic: the value is an upper bound on
/// the true minimum over product states.
ProductMinimum min_product_expectation(const HermitianOperator& w, int d_a, int d_b, int restarts,
                                       Rng& rng);

/// One-sided: false is conclusive, true is evidence at the given restart budget.
bool is_strict_witness(const HermitianOperator& w, int d_a, int d_b, int restarts, Rng& rng);
bool is_strict_witness(const WitnessOperator& w, int restarts, Rng& rng);

/// Fraction of n_trials Haar-random pure product states with <psi phi|W|psi phi> < 0.
double estimate_failure_rate(const HermitianOperator& w, int d_a, int d_b, std::int64_t n_trials,
                             Rng& rng);

LiftedWitness lift_to_strict_witness(const HermitianOperator& w_eps, int d_a, int d_b, int restarts,
                                     Rng& rng);

/// ceil(r / (epsilon delta) - 1), r = (d_a d_b)(d_a d_b + 1).
std::int64_t required_sample_count(double epsilon, double delta, int d_a, int d_b);

}  // namespace mdiew

#endif  // MDIEW_WITNESS_HPP_
