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
#include <limits>
#include <numbers>

namespace mdiew {

namespace {

int infer_side_dim(const std::vector<DensityMatrix>& side, const char* which) {
  if (side.empty()) throw LayoutError(std::string("InputBasis: side ") + which + " is empty");
  const int d = side.front().dim();
  for (const auto& m : side) {
    if (m.dim() != d) {
      throw LayoutError(std::string("InputBasis: side ") + which + " mixes operator dimensions");
    }
  }
  if (static_cast<int>(side.size()) != d * d) {
    throw SingularBasisError(std::string("InputBasis: side ") + which + " needs exactly " +
                             std::to_string(d * d) + " operators, got " +
                             std::to_string(side.size()));
  }
  return d;
}

// Columns are the Hermitian coordinates of each family member.
void check_spanning(const std::vector<DensityMatrix>& side, int d, const char* which) {
  Eigen::MatrixXd gram_root(d * d, static_cast<Eigen::Index>(side.size()));
  for (std::size_t k = 0; k < side.size(); ++k) {
    gram_root.col(static_cast<Eigen::Index>(k)) = hermitian_coordinates(side[k].matrix());
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(gram_root);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  if (!(smin > 1e-12 * smax)) {
    throw SingularBasisError(std::string("InputBasis: side ") + which +
                             " is not linearly independent (Gram matrix singular)");
  }
}

ComplexVector min_eigenvector(const ComplexMatrix& h, double& value) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  value = solver.eigenvalues()(0);
  ComplexVector v = solver.eigenvectors().col(0);
  return v / v.norm();
}

}  // namespace

InputBasis::InputBasis(std::string name, std::vector<DensityMatrix> side_a,
                       std::vector<DensityMatrix> side_b)
    : name_(std::move(name)), side_a_(std::move(side_a)), side_b_(std::move(side_b)) {
  d_a_ = infer_side_dim(side_a_, "A");
  d_b_ = infer_side_dim(side_b_, "B");
  check_spanning(side_a_, d_a_, "A");
  check_spanning(side_b_, d_b_, "B");
  products_.reserve(side_a_.size() * side_b_.size());
  for (const auto& omega : side_a_) {
    for (const auto& tau : side_b_) {
      products_.push_back(tensor(omega.matrix().transpose(), tau.matrix().transpose()));
    }
  }
}

CoefficientTable::CoefficientTable(Eigen::MatrixXd beta) : beta_(std::move(beta)) {
  if (!beta_.allFinite()) throw InvariantError("CoefficientTable: entries must be finite");
}

Eigen::VectorXd CoefficientTable::flattened() const {
  Eigen::VectorXd flat(beta_.size());
  for (int x = 0; x < rows(); ++x) {
    for (int y = 0; y < cols(); ++y) flat(x * cols() + y) = beta_(x, y);
  }
  return flat;
}

CoefficientTable CoefficientTable::from_flat(const Eigen::VectorXd& flat, int rows, int cols) {
  if (flat.size() != static_cast<Eigen::Index>(rows) * cols) {
    throw LayoutError("CoefficientTable: flat vector length does not match table shape");
  }
  Eigen::MatrixXd beta(rows, cols);
  for (int x = 0; x < rows; ++x) {
    for (int y = 0; y < cols; ++y) beta(x, y) = flat(x * cols + y);
  }
  return CoefficientTable(std::move(beta));
}

WitnessOperator::WitnessOperator(HermitianOperator op, int d_a, int d_b, bool trace_normalized)
    : op_(std::move(op)), d_a_(d_a), d_b_(d_b), trace_normalized_(trace_normalized) {
  if (d_a < 1 || d_b < 1 || op_.dim() != d_a * d_b) {
    throw LayoutError("WitnessOperator: operator dimension " + std::to_string(op_.dim()) +
                      " does not equal d_a * d_b");
  }
  if (trace_normalized_ && std::abs(op_.trace() - 1.0) > 1e-10) {
    throw InvariantError("WitnessOperator: trace-normalized witness must have trace 1, got " +
                         std::to_string(op_.trace()));
  }
  if (min_eigenvalue(op_) >= -kWitnessTolerance) {
    throw InvariantError(
        "WitnessOperator: operator is positive semidefinite and witnesses nothing");
  }
}

WitnessOperator LiftedWitness::witness() const {
  if (degenerate) throw InvariantError("LiftedWitness: lift degenerate, no negative eigenvalue");
  return WitnessOperator(op, d_a, d_b, true);
}

ComplexMatrix pauli(int index) {
  using namespace std::complex_literals;
  ComplexMatrix s(2, 2);
  switch (index) {
    case 0: s << 1.0, 0.0, 0.0, 1.0; break;
    case 1: s << 0.0, 1.0, 1.0, 0.0; break;
    case 2: s << 0.0, -1i, 1i, 0.0; break;
    case 3: s << 1.0, 0.0, 0.0, -1.0; break;
    default: throw ParameterError("pauli: index must be in 0..3");
  }
  return s;
}

InputBasis tetrahedral_basis() {
  const double c = 1.0 / std::numbers::sqrt3;
  ComplexMatrix projector = pauli(0);
  for (int k = 1; k <= 3; ++k) projector += c * pauli(k);
  projector /= 2.0;

  std::vector<DensityMatrix> side;
  side.reserve(4);
  for (int x = 0; x < 4; ++x) {
    const ComplexMatrix s = pauli(x);
    side.emplace_back(ComplexMatrix(s * projector * s));
  }
  return InputBasis("tetrahedral", side, side);
}

Eigen::VectorXd hermitian_coordinates(const ComplexMatrix& h) {
  const auto d = h.rows();
  Eigen::VectorXd v(d * d);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < d; ++i) v(k++) = h(i, i).real();
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      v(k++) = std::numbers::sqrt2 * h(i, j).real();
      v(k++) = std::numbers::sqrt2 * h(i, j).imag();
    }
  }
  return v;
}

CoefficientTable decompose_witness(const HermitianOperator& w, const InputBasis& basis) {
  const int dim = basis.d_a() * basis.d_b();
  if (dim == 0) throw LayoutError("decompose_witness: empty input basis");
  if (w.dim() != dim) {
    throw LayoutError("decompose_witness: witness dimension " + std::to_string(w.dim()) +
                      " does not match basis d_a * d_b = " + std::to_string(dim));
  }
  const int n = dim * dim;
  Eigen::MatrixXd system(n, basis.size_a() * basis.size_b());
  for (int x = 0; x < basis.size_a(); ++x) {
    for (int y = 0; y < basis.size_b(); ++y) {
      system.col(x * basis.size_b() + y) = hermitian_coordinates(basis.product_transpose(x, y));
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) {
    throw SingularBasisError("decompose_witness: product basis does not span Hermitian operators");
  }
  const Eigen::VectorXd flat = lu.solve(hermitian_coordinates(w.matrix()));
  return CoefficientTable::from_flat(flat, basis.size_a(), basis.size_b());
}

CoefficientTable decompose_witness(const WitnessOperator& w, const InputBasis& basis) {
  return decompose_witness(w.op(), basis);
}

HermitianOperator reconstruct(const CoefficientTable& beta, const InputBasis& basis) {
  if (beta.rows() != basis.size_a() || beta.cols() != basis.size_b()) {
    throw LayoutError("reconstruct: coefficient table shape does not match the basis");
  }
  const int dim = basis.d_a() * basis.d_b();
  ComplexMatrix w = ComplexMatrix::Zero(dim, dim);
  for (int x = 0; x < beta.rows(); ++x) {
    for (int y = 0; y < beta.cols(); ++y) w += beta(x, y) * basis.product_transpose(x, y);
  }
  return HermitianOperator(w);
}

ComplexMatrix contract_b(const ComplexMatrix& w, int d_a, int d_b, const ComplexVector& phi) {
  ComplexMatrix out(d_a, d_a);
  for (int i = 0; i < d_a; ++i) {
    for (int j = 0; j < d_a; ++j) {
      out(i, j) = phi.dot(w.block(i * d_b, j * d_b, d_b, d_b) * phi);
    }
  }
  return out;
}

ComplexMatrix contract_a(const ComplexMatrix& w, int d_a, int d_b, const ComplexVector& psi) {
  ComplexMatrix out = ComplexMatrix::Zero(d_b, d_b);
  for (int i = 0; i < d_a; ++i) {
    for (int j = 0; j < d_a; ++j) {
      out += std::conj(psi(i)) * psi(j) * w.block(i * d_b, j * d_b, d_b, d_b);
    }
  }
  return out;
}

double product_expectation(const ComplexMatrix& w, const ComplexVector& psi,
                           const ComplexVector& phi) {
  const ComplexVector v = tensor(psi, phi);
  return v.dot(w * v).real();
}

ProductMinimum min_product_expectation(const HermitianOperator& w, int d_a, int d_b, int restarts,
                                       Rng& rng) {
  if (d_a < 1 || d_b < 1 || w.dim() != d_a * d_b) {
    throw LayoutError("min_product_expectation: operator dimension does not equal d_a * d_b");
  }
  if (restarts < 1) throw ParameterError("min_product_expectation: restarts must be >= 1");
  constexpr int kMaxSweeps = 1000;

  ProductMinimum best;
  best.value = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    ComplexVector phi = haar_random_pure_state(d_b, rng).amplitudes();
    ComplexVector psi;
    double value = std::numeric_limits<double>::infinity();
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
      double ignored = 0.0;
      psi = min_eigenvector(contract_b(w.matrix(), d_a, d_b, phi), ignored);
      double next = 0.0;
      phi = min_eigenvector(contract_a(w.matrix(), d_a, d_b, psi), next);
      const bool converged = value - next < kSeeSawConvergence;
      value = std::min(value, next);
      if (converged) break;
    }
    if (value < best.value) {
      best.value = value;
      best.state_a = PureState(psi);
      best.state_b = PureState(phi);
    }
  }
  // Report the exact expectation of the returned product state.
  best.value = product_expectation(w.matrix(), best.state_a.amplitudes(), best.state_b.amplitudes());
  return best;
}

bool is_strict_witness(const HermitianOperator& w, int d_a, int d_b, int restarts, Rng& rng) {
  if (min_eigenvalue(w) >= -kWitnessTolerance) return false;
  return min_product_expectation(w, d_a, d_b, restarts, rng).value >= -kWitnessTolerance;
}

bool is_strict_witness(const WitnessOperator& w, int restarts, Rng& rng) {
  return is_strict_witness(w.op(), w.d_a(), w.d_b(), restarts, rng);
}

double estimate_failure_rate(const HermitianOperator& w, int d_a, int d_b, std::int64_t n_trials,
                             Rng& rng) {
  if (n_trials < 1) throw ParameterError("estimate_failure_rate: n_trials must be >= 1");
  if (d_a < 1 || d_b < 1 || w.dim() != d_a * d_b) {
    throw LayoutError("estimate_failure_rate: operator dimension does not equal d_a * d_b");
  }
  std::int64_t failures = 0;
  for (std::int64_t t = 0; t < n_trials; ++t) {
    const PureState psi = haar_random_pure_state(d_a, rng);
    const PureState phi = haar_random_pure_state(d_b, rng);
    if (product_expectation(w.matrix(), psi.amplitudes(), phi.amplitudes()) < 0.0) ++failures;
  }
  return static_cast<double>(failures) / static_cast<double>(n_trials);
}

LiftedWitness lift_to_strict_witness(const HermitianOperator& w_eps, int d_a, int d_b, int restarts,
                                     Rng& rng) {
  const double m = min_product_expectation(w_eps, d_a, d_b, restarts, rng).value;
  LiftedWitness out;
  out.d_a = d_a;
  out.d_b = d_b;
  if (m >= 0.0) {
    out.op = w_eps;
  } else {
    out.alpha = -m;
    const int dim = d_a * d_b;
    ComplexMatrix lifted = w_eps.matrix() + out.alpha * ComplexMatrix::Identity(dim, dim);
    const double tr = lifted.trace().real();
    if (tr > 0.0) lifted /= tr;
    out.op = HermitianOperator(lifted);
  }
  out.degenerate = min_eigenvalue(out.op) >= -kWitnessTolerance;
  return out;
}

std::int64_t required_sample_count(double epsilon, double delta, int d_a, int d_b) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw ParameterError("required_sample_count: epsilon must lie in (0, 1)");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ParameterError("required_sample_count: delta must lie in (0, 1)");
  }
  if (d_a < 1 || d_b < 1) throw ParameterError("required_sample_count: dimensions must be >= 1");
  const double d = static_cast<double>(d_a) * d_b;
  const double r = d * (d + 1.0);
  const double bound = r / (epsilon * delta) - 1.0;
  if (bound > 9.0e18) throw ParameterError("required_sample_count: sample count overflows");
  // Slack absorbs binary rounding of decimal inputs such as 0.01 * 0.01.
  const double n = std::ceil(bound - 1e-9 * std::max(1.0, std::abs(bound)));
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(n));
}

}  // namespace mdiew
