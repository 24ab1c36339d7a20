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

// Simulation of the measurement-device-independent witnessing experiment:
// Bell-state-measurement models, probability tables and the witness value J.
//
// Global subsystem ordering is (input-A, A, B, input-B): Alice's POVM element
// acts on (input-A, A) and Bob's on (B, input-B).

#ifndef MDIEW_SIMULATION_HPP_
#define MDIEW_SIMULATION_HPP_

#include <cstdint>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "mdiew/qmat.hpp"
#include "mdiew/witness.hpp"

namespace mdiew {

enum class Provenance { kSimulated, kLoaded };

std::string to_string(Provenance p);
Provenance provenance_from_string(const std::string& s);

/// The (1,1)-outcome POVM elements of both parties, each with 0 <= M <= I.
class MeasurementModel {
 public:
  MeasurementModel(HermitianOperator povm_a, HermitianOperator povm_b, int d_a, int d_b,
                   std::string name = "custom");

  /// Both parties project onto |Phi+>.
  static MeasurementModel ideal(int d_a, int d_b);
  /// Alice projects onto |Phi+>, Bob onto |Phi->: a phase error on Bob's side.
  static MeasurementModel phase_flip();
  /// Independent random POVM elements on both sides.
  static MeasurementModel random(int d_a, int d_b, Rng& rng);

  const HermitianOperator& povm_a() const { return povm_a_; }
  const HermitianOperator& povm_b() const { return povm_b_; }
  int d_a() const { return d_a_; }
  int d_b() const { return d_b_; }
  const std::string& name() const { return name_; }

 private:
  HermitianOperator povm_a_;
  HermitianOperator povm_b_;
  int d_a_;
  int d_b_;
  std::string name_;
};

/// p(1,1 | omega_x, tau_y), indexed (x, y).
class ProbabilityTable {
 public:
  ProbabilityTable(Eigen::MatrixXd p, std::string basis_name, int d_a, int d_b,
                   Provenance provenance, std::optional<std::uint64_t> seed = std::nullopt);

  const Eigen::MatrixXd& p() const { return p_; }
  double operator()(int x, int y) const { return p_(x, y); }
  int rows() const { return static_cast<int>(p_.rows()); }
  int cols() const { return static_cast<int>(p_.cols()); }
  const std::string& basis_name() const { return basis_name_; }
  int d_a() const { return d_a_; }
  int d_b() const { return d_b_; }
  Provenance provenance() const { return provenance_; }
  std::optional<std::uint64_t> seed() const { return seed_; }

  /// Row-major flattening, index x * cols + y.
  Eigen::VectorXd flattened() const;
  /// Same table with every entry multiplied by `factor`.
  ProbabilityTable scaled(double factor) const;

 private:
  Eigen::MatrixXd p_;
  std::string basis_name_;
  int d_a_;
  int d_b_;
  Provenance provenance_;
  std::optional<std::uint64_t> seed_;
};

/// (|01> - |10>) / sqrt(2).
ComplexVector singlet_state();

/// |Phi+><Phi+| on the doubled d x d space, |Phi+> = sum_i |ii> / sqrt(d).
HermitianOperator ideal_bell_projector(int d);

/// Projector onto (|00> - |11>) / sqrt(2).
HermitianOperator phase_flipped_bell_projector();

/// v |Psi-><Psi-| + (1 - v) I / 4.
DensityMatrix werner_state(double v);

/// I/2 - |Psi-><Psi-|, unit trace.
WitnessOperator werner_witness();

ProbabilityTable simulate_probability_table(const DensityMatrix& rho, const InputBasis& basis,
                                            const MeasurementModel& model,
                                            std::optional<std::uint64_t> seed = std::nullopt);

/// J = sum_{x,y} beta(x,y) p(x,y), without any dimension rescaling.
double compute_j_value(const CoefficientTable& beta, const ProbabilityTable& table);

/// U diag(u) U^dagger with u uniform in [0, 1] and U Haar-random.
HermitianOperator random_povm_element(int dim, Rng& rng);

}  // namespace mdiew

#endif  // MDIEW_SIMULATION_HPP_
