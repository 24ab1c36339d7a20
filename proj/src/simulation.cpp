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

#include "mdiew/simulation.hpp"

#include <cmath>
#include <numbers>

namespace mdiew {

namespace {

constexpr double kPovmTolerance = 1e-10;
constexpr double kProbabilityTolerance = 1e-12;

void check_povm(const HermitianOperator& m, int expected_dim, const char* which) {
  if (m.dim() != expected_dim) {
    throw LayoutError(std::string("MeasurementModel: POVM element ") + which + " has dimension " +
                      std::to_string(m.dim()) + ", expected " + std::to_string(expected_dim));
  }
  const EigenDecomposition eig = eigendecompose_hermitian(m);
  if (eig.eigenvalues(0) < -kPovmTolerance) {
    throw InvariantError(std::string("MeasurementModel: POVM element ") + which +
                         " is not positive semidefinite");
  }
  if (eig.eigenvalues(eig.eigenvalues.size() - 1) > 1.0 + kPovmTolerance) {
    throw InvariantError(std::string("MeasurementModel: POVM element ") + which +
                         " exceeds the identity");
  }
}

}  // namespace

std::string to_string(Provenance p) { return p == Provenance::kSimulated ? "simulated" : "loaded"; }

Provenance provenance_from_string(const std::string& s) {
  if (s == "simulated") return Provenance::kSimulated;
  if (s == "loaded") return Provenance::kLoaded;
  throw FormatError("unknown provenance '" + s + "'");
}

MeasurementModel::MeasurementModel(HermitianOperator povm_a, HermitianOperator povm_b, int d_a,
                                   int d_b, std::string name)
    : povm_a_(std::move(povm_a)),
      povm_b_(std::move(povm_b)),
      d_a_(d_a),
      d_b_(d_b),
      name_(std::move(name)) {
  if (d_a < 1 || d_b < 1) throw LayoutError("MeasurementModel: dimensions must be positive");
  check_povm(povm_a_, d_a * d_a, "A");
  check_povm(povm_b_, d_b * d_b, "B");
}

MeasurementModel MeasurementModel::ideal(int d_a, int d_b) {
  return MeasurementModel(ideal_bell_projector(d_a), ideal_bell_projector(d_b), d_a, d_b, "ideal");
}

MeasurementModel MeasurementModel::phase_flip() {
  return MeasurementModel(ideal_bell_projector(2), phase_flipped_bell_projector(), 2, 2,
                          "phase_flip");
}

MeasurementModel MeasurementModel::random(int d_a, int d_b, Rng& rng) {
  HermitianOperator a = random_povm_element(d_a * d_a, rng);
  HermitianOperator b = random_povm_element(d_b * d_b, rng);
  return MeasurementModel(std::move(a), std::move(b), d_a, d_b, "random");
}

ProbabilityTable::ProbabilityTable(Eigen::MatrixXd p, std::string basis_name, int d_a, int d_b,
                                   Provenance provenance, std::optional<std::uint64_t> seed)
    : p_(std::move(p)),
      basis_name_(std::move(basis_name)),
      d_a_(d_a),
      d_b_(d_b),
      provenance_(provenance),
      seed_(seed) {
  if (p_.size() == 0) throw LayoutError("ProbabilityTable: table is empty");
  if (d_a_ < 1 || d_b_ < 1 || p_.rows() != d_a_ * d_a_ || p_.cols() != d_b_ * d_b_) {
    throw LayoutError("ProbabilityTable: shape must be d_a^2 x d_b^2");
  }
  if (!p_.allFinite()) throw InvariantError("ProbabilityTable: entries must be finite");
  if (p_.minCoeff() < -kProbabilityTolerance || p_.maxCoeff() > 1.0 + kProbabilityTolerance) {
    throw InvariantError("ProbabilityTable: entries must lie in [0, 1]");
  }
}

Eigen::VectorXd ProbabilityTable::flattened() const {
  Eigen::VectorXd flat(p_.size());
  for (int x = 0; x < rows(); ++x) {
    for (int y = 0; y < cols(); ++y) flat(x * cols() + y) = p_(x, y);
  }
  return flat;
}

ProbabilityTable ProbabilityTable::scaled(double factor) const {
  return ProbabilityTable(p_ * factor, basis_name_, d_a_, d_b_, provenance_, seed_);
}

ComplexVector singlet_state() {
  ComplexVector psi = ComplexVector::Zero(4);
  psi(1) = 1.0 / std::numbers::sqrt2;
  psi(2) = -1.0 / std::numbers::sqrt2;
  return psi;
}

HermitianOperator ideal_bell_projector(int d) {
  if (d < 2) throw ParameterError("ideal_bell_projector: d must be >= 2");
  ComplexVector phi = ComplexVector::Zero(d * d);
  for (int i = 0; i < d; ++i) phi(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
  return HermitianOperator(ComplexMatrix(phi * phi.adjoint()));
}

HermitianOperator phase_flipped_bell_projector() {
  ComplexVector phi = ComplexVector::Zero(4);
  phi(0) = 1.0 / std::numbers::sqrt2;
  phi(3) = -1.0 / std::numbers::sqrt2;
  return HermitianOperator(ComplexMatrix(phi * phi.adjoint()));
}

DensityMatrix werner_state(double v) {
  if (!(v >= 0.0 && v <= 1.0)) throw ParameterError("werner_state: visibility must lie in [0, 1]");
  const ComplexVector psi = singlet_state();
  ComplexMatrix rho = v * psi * psi.adjoint() + (1.0 - v) / 4.0 * ComplexMatrix::Identity(4, 4);
  return DensityMatrix(rho);
}

WitnessOperator werner_witness() {
  const ComplexVector psi = singlet_state();
  ComplexMatrix w = 0.5 * ComplexMatrix::Identity(4, 4) - psi * psi.adjoint();
  return WitnessOperator(HermitianOperator(w), 2, 2, true);
}

ProbabilityTable simulate_probability_table(const DensityMatrix& rho, const InputBasis& basis,
                                            const MeasurementModel& model,
                                            std::optional<std::uint64_t> seed) {
  const int d_a = basis.d_a();
  const int d_b = basis.d_b();
  if (rho.dim() != d_a * d_b) {
    throw LayoutError("simulate_probability_table: state dimension " + std::to_string(rho.dim()) +
                      " does not match basis d_a * d_b = " + std::to_string(d_a * d_b));
  }
  if (model.d_a() != d_a || model.d_b() != d_b) {
    throw LayoutError("simulate_probability_table: measurement model dimensions do not match basis");
  }
  // (M_A (x) M_B) on (input-A, A, B, input-B).
  const ComplexMatrix joint = tensor(model.povm_a().matrix(), model.povm_b().matrix());
  Eigen::MatrixXd p(basis.size_a(), basis.size_b());
  for (int x = 0; x < basis.size_a(); ++x) {
    const ComplexMatrix left = tensor(basis.side_a()[x].matrix(), rho.matrix());
    for (int y = 0; y < basis.size_b(); ++y) {
      const ComplexMatrix full = tensor(left, basis.side_b()[y].matrix());
      p(x, y) = trace_product(joint, full);
    }
  }
  return ProbabilityTable(std::move(p), basis.name(), d_a, d_b, Provenance::kSimulated, seed);
}

double compute_j_value(const CoefficientTable& beta, const ProbabilityTable& table) {
  if (beta.rows() != table.rows() || beta.cols() != table.cols()) {
    throw LayoutError("compute_j_value: coefficient table and probability table shapes differ");
  }
  return beta.beta().cwiseProduct(table.p()).sum();
}

HermitianOperator random_povm_element(int dim, Rng& rng) {
  if (dim < 1) throw ParameterError("random_povm_element: dim must be >= 1");
  const ComplexMatrix u = haar_random_unitary(dim, rng);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::VectorXd spectrum(dim);
  for (int i = 0; i < dim; ++i) spectrum(i) = unit(rng);
  ComplexMatrix m = u * spectrum.cast<std::complex<double>>().asDiagonal() * u.adjoint();
  return HermitianOperator(ComplexMatrix((m + m.adjoint()) / 2.0));
}

}  // namespace mdiew
