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

// Dense complex linear algebra and quantum-state primitives.
//
// Multi-system operators use row-major subsystem ordering: for dims
// (d_0, d_1, ..., d_{k-1}) the basis index is i_0 d_1...d_{k-1} + ... + i_{k-1},
// so subsystem 0 is the most significant factor of every Kronecker product.
// Transposes are always taken in this computational basis.

#ifndef MDIEW_QMAT_HPP_
#define MDIEW_QMAT_HPP_

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mdiew/errors.hpp"

namespace mdiew {

template <typename Scalar>
using CMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using CVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

using ComplexMatrix = CMatrix<double>;
using ComplexVector = CVector<double>;

/// Seeded random source passed explicitly to every sampler.
using Rng = std::mt19937_64;

/// Independent stream seed for item `index` of a run seeded with `master`
/// (splitmix64 finalizer over the pair).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kTraceTolerance = 1e-12;
inline constexpr double kEigenvalueFloor = -1e-10;

/// Kronecker product; entry (i*b.rows()+k, j*b.cols()+l) is a(i,j)*b(k,l).
template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> tensor(
    const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Result = Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index br = b.rows();
  const Eigen::Index bc = b.cols();
  Result out(a.rows() * br, a.cols() * bc);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * br, j * bc, br, bc) = a(i, j) * b;
    }
  }
  return out;
}

/// Traces out every subsystem not listed in `keep`. Kept subsystems stay in
/// their original relative order.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> partial_trace(
    const Eigen::MatrixBase<Derived>& m, std::span<const int> dims, std::span<const int> keep) {
  using Result = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const int n_sys = static_cast<int>(dims.size());
  if (n_sys == 0) throw LayoutError("partial_trace: empty subsystem list");
  long total = 1;
  for (int d : dims) {
    if (d < 1) throw LayoutError("partial_trace: subsystem dimensions must be positive");
    total *= d;
  }
  if (m.rows() != m.cols() || m.rows() != total) {
    throw LayoutError("partial_trace: product of subsystem dimensions " + std::to_string(total) +
                      " does not match matrix shape " + std::to_string(m.rows()) + "x" +
                      std::to_string(m.cols()));
  }
  std::vector<bool> kept(n_sys, false);
  for (int k : keep) {
    if (k < 0 || k >= n_sys || kept[k]) {
      throw LayoutError("partial_trace: invalid or repeated subsystem index in keep set");
    }
    kept[k] = true;
  }

  // Strides of the full index and of the reduced (kept) index.
  std::vector<long> stride(n_sys), kept_stride(n_sys, 0);
  long s = 1, ks = 1;
  for (int q = n_sys - 1; q >= 0; --q) {
    stride[q] = s;
    s *= dims[q];
    if (kept[q]) {
      kept_stride[q] = ks;
      ks *= dims[q];
    }
  }
  const long kept_dim = ks;
  const long traced_dim = total / kept_dim;

  // Offsets contributed by the kept digits and by the traced digits.
  auto offsets = [&](bool want_kept, long count) {
    std::vector<long> off(count, 0);
    for (long idx = 0; idx < count; ++idx) {
      long rem = idx, o = 0;
      for (int q = n_sys - 1; q >= 0; --q) {
        if (kept[q] != want_kept) continue;
        o += (rem % dims[q]) * stride[q];
        rem /= dims[q];
      }
      off[idx] = o;
    }
    return off;
  };
  const std::vector<long> kept_off = offsets(true, kept_dim);
  const std::vector<long> traced_off = offsets(false, traced_dim);

  Result out = Result::Zero(kept_dim, kept_dim);
  for (long r = 0; r < kept_dim; ++r) {
    for (long c = 0; c < kept_dim; ++c) {
      typename Derived::Scalar acc(0);
      for (long t = 0; t < traced_dim; ++t) {
        acc += m(kept_off[r] + traced_off[t], kept_off[c] + traced_off[t]);
      }
      out(r, c) = acc;
    }
  }
  return out;
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (!std::isfinite(std::real(m(i, j))) || !std::isfinite(std::imag(m(i, j)))) return false;
    }
  }
  return true;
}

template <typename Derived>
double hermiticity_defect(const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

/// Square complex matrix equal to its conjugate transpose.
class HermitianOperator {
 public:
  HermitianOperator() = default;

  /// Validates shape, finiteness and Hermiticity (entrywise, 1e-12), then
  /// stores the exactly symmetrized matrix.
  explicit HermitianOperator(const ComplexMatrix& m) {
    if (m.rows() == 0 || m.rows() != m.cols()) {
      throw LayoutError("HermitianOperator: matrix must be square and non-empty, got " +
                        std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
    if (!all_finite(m)) throw InvariantError("HermitianOperator: entries must be finite");
    const double defect = hermiticity_defect(m);
    if (defect > kHermitianTolerance) {
      throw InvariantError("HermitianOperator: matrix is not Hermitian (max |m - m^dagger| = " +
                           std::to_string(defect) + ")");
    }
    matrix_ = (m + m.adjoint()) / 2.0;
  }

  static HermitianOperator identity(int dim) {
    return HermitianOperator(ComplexMatrix::Identity(dim, dim));
  }
  static HermitianOperator zero(int dim) { return HermitianOperator(ComplexMatrix::Zero(dim, dim)); }

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const ComplexMatrix& matrix() const { return matrix_; }
  double trace() const { return matrix_.trace().real(); }

  /// Computational-basis transpose (again Hermitian, same spectrum).
  HermitianOperator transpose() const { return HermitianOperator(ComplexMatrix(matrix_.transpose())); }

  HermitianOperator operator+(const HermitianOperator& o) const {
    return HermitianOperator(ComplexMatrix(matrix_ + o.matrix_));
  }
  HermitianOperator operator-(const HermitianOperator& o) const {
    return HermitianOperator(ComplexMatrix(matrix_ - o.matrix_));
  }
  HermitianOperator operator*(double s) const { return HermitianOperator(ComplexMatrix(matrix_ * s)); }

 private:
  ComplexMatrix matrix_;
};

inline HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b) {
  return HermitianOperator(tensor(a.matrix(), b.matrix()));
}

struct EigenDecomposition {
  Eigen::VectorXd eigenvalues;  // ascending
  ComplexMatrix eigenvectors;   // column k pairs with eigenvalues(k)
};

inline EigenDecomposition eigendecompose_hermitian(const HermitianOperator& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.matrix());
  return {solver.eigenvalues(), solver.eigenvectors()};
}

inline double min_eigenvalue(const HermitianOperator& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.matrix(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

/// Trace-one positive-semidefinite operator.
class DensityMatrix {
 public:
  DensityMatrix() = default;

  explicit DensityMatrix(HermitianOperator op) : op_(std::move(op)) {
    if (std::abs(op_.trace() - 1.0) > kTraceTolerance) {
      throw InvariantError("DensityMatrix: trace must equal 1, got " + std::to_string(op_.trace()));
    }
    const double lo = min_eigenvalue(op_);
    if (lo < kEigenvalueFloor) {
      throw InvariantError("DensityMatrix: minimum eigenvalue " + std::to_string(lo) +
                           " is below the positivity floor");
    }
  }
  explicit DensityMatrix(const ComplexMatrix& m) : DensityMatrix(HermitianOperator(m)) {}

  int dim() const { return op_.dim(); }
  const HermitianOperator& op() const { return op_; }
  const ComplexMatrix& matrix() const { return op_.matrix(); }

 private:
  HermitianOperator op_;
};

/// Unit-norm state vector.
class PureState {
 public:
  PureState() = default;

  explicit PureState(ComplexVector amplitudes) : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() == 0) throw LayoutError("PureState: dimension must be positive");
    if (!all_finite(amplitudes_)) throw InvariantError("PureState: amplitudes must be finite");
    if (std::abs(amplitudes_.norm() - 1.0) > kHermitianTolerance) {
      throw InvariantError("PureState: amplitudes must have unit norm, got " +
                           std::to_string(amplitudes_.norm()));
    }
  }

  int dim() const { return static_cast<int>(amplitudes_.size()); }
  const ComplexVector& amplitudes() const { return amplitudes_; }

  ComplexMatrix projector() const { return amplitudes_ * amplitudes_.adjoint(); }
  DensityMatrix density() const { return DensityMatrix(projector()); }

  /// <psi|op|psi>
  double expectation(const HermitianOperator& op) const {
    return amplitudes_.dot(op.matrix() * amplitudes_).real();
  }

 private:
  ComplexVector amplitudes_;
};

/// Vector of independent standard complex Gaussians, E|z_i|^2 = 1.
template <typename Scalar = double, typename Urbg>
CVector<Scalar> complex_gaussian_vector(int dim, Urbg& rng) {
  std::normal_distribution<Scalar> normal(Scalar(0), std::sqrt(Scalar(0.5)));
  CVector<Scalar> z(dim);
  for (int i = 0; i < dim; ++i) {
    const Scalar re = normal(rng);
    const Scalar im = normal(rng);
    z(i) = {re, im};
  }
  return z;
}

/// Haar-distributed pure state: normalized complex Gaussian vector.
template <typename Urbg>
PureState haar_random_pure_state(int dim, Urbg& rng) {
  if (dim < 1) throw ParameterError("haar_random_pure_state: dim must be >= 1");
  ComplexVector z = complex_gaussian_vector(dim, rng);
  double norm = z.norm();
  while (norm == 0.0) {
    z = complex_gaussian_vector(dim, rng);
    norm = z.norm();
  }
  return PureState(z / norm);
}

/// Haar-distributed unitary via QR of a Ginibre matrix with the phases of R's
/// diagonal absorbed into Q.
template <typename Scalar = double, typename Urbg>
CMatrix<Scalar> haar_random_unitary(int dim, Urbg& rng) {
  if (dim < 1) throw ParameterError("haar_random_unitary: dim must be >= 1");
  CMatrix<Scalar> g(dim, dim);
  for (int j = 0; j < dim; ++j) g.col(j) = complex_gaussian_vector<Scalar>(dim, rng);
  Eigen::HouseholderQR<CMatrix<Scalar>> qr(g);
  CMatrix<Scalar> q = qr.householderQ();
  const CMatrix<Scalar> r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    const std::complex<Scalar> d = r(j, j);
    const Scalar a = std::abs(d);
    if (a > Scalar(0)) q.col(j) *= d / a;
  }
  return q;
}

/// Random mixed state G G^dagger / Tr, G Ginibre (Hilbert-Schmidt measure).
template <typename Urbg>
DensityMatrix random_density_matrix(int dim, Urbg& rng) {
  ComplexMatrix g(dim, dim);
  for (int j = 0; j < dim; ++j) g.col(j) = complex_gaussian_vector(dim, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(ComplexMatrix((rho + rho.adjoint()) / 2.0));
}

/// Random Hermitian matrix with i.i.d. Gaussian entries (GUE-like).
template <typename Urbg>
HermitianOperator random_hermitian(int dim, Urbg& rng) {
  ComplexMatrix g(dim, dim);
  for (int j = 0; j < dim; ++j) g.col(j) = complex_gaussian_vector(dim, rng);
  return HermitianOperator(ComplexMatrix((g + g.adjoint()) / 2.0));
}

/// Tr[a b] for Hermitian a, b (real part).
inline double trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a.transpose().cwiseProduct(b)).sum().real();
}

}  // namespace mdiew

#endif  // MDIEW_QMAT_HPP_
