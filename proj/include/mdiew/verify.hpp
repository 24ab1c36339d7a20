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

// Property suites behind `mdiew verify`.

#ifndef MDIEW_VERIFY_HPP_
#define MDIEW_VERIFY_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "mdiew/qmat.hpp"
#include "mdiew/simulation.hpp"
#include "mdiew/witness.hpp"

namespace mdiew {

/// sum_i p_i sigma_A^i (x) sigma_B^i with 1..max_terms terms, Dirichlet(1)
/// weights and Hilbert-Schmidt random local states.
DensityMatrix random_separable_state(int d_a, int d_b, int max_terms, Rng& rng);

/// (U (x) V) W (U (x) V)^dagger for the unit-trace Werner witness W and
/// Haar-random local unitaries: a strict witness by construction.
WitnessOperator random_local_werner_witness(Rng& rng);

struct VerifyOptions {
  std::uint64_t seed = 0;
  /// Mutation check: negate the first term inside the round-trip reconstruction.
  bool flip_reconstruct_sign = false;
  int linearity_states = 100;
  int linearity_witnesses = 20;
  int nonnegativity_pairs = 1000;
  int soundness_runs = 50;
};

struct PropertyReport {
  std::string name;
  bool passed = false;
  double residual = 0.0;
  double threshold = 0.0;
  double runtime_ms = 0.0;
  std::string detail;
};

struct VerifyReport {
  std::vector<PropertyReport> properties;
  bool all_passed() const;
};

PropertyReport check_linearity(const VerifyOptions& options);
PropertyReport check_separable_nonnegativity(const VerifyOptions& options);
PropertyReport check_round_trip(const VerifyOptions& options);
PropertyReport check_certificate_soundness(const VerifyOptions& options);

VerifyReport run_verification(const VerifyOptions& options);

nlohmann::ordered_json report_to_json(const VerifyReport& report, std::uint64_t seed);

}  // namespace mdiew

#endif  // MDIEW_VERIFY_HPP_
