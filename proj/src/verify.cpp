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

#include "mdiew/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>

#include "mdiew/optimizer.hpp"

namespace mdiew {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Each suite gets its own stream so suites can be run and reordered independently.
Rng suite_rng(const VerifyOptions& options, std::uint64_t suite) {
  return Rng(derive_seed(options.seed, suite));
}

HermitianOperator faulty_reconstruct(const CoefficientTable& beta, const InputBasis& basis) {
  const int dim = basis.d_a() * basis.d_b();
  ComplexMatrix w = ComplexMatrix::Zero(dim, dim);
  for (int x = 0; x < beta.rows(); ++x) {
    for (int y = 0; y < beta.cols(); ++y) {
      const double sign = (x == 0 && y == 0) ? -1.0 : 1.0;
      w += sign * beta(x, y) * basis.product_transpose(x, y);
    }
  }
  return HermitianOperator(w);
}

}  // namespace

DensityMatrix random_separable_state(int d_a, int d_b, int max_terms, Rng& rng) {
  if (max_terms < 1) throw ParameterError("random_separable_state: max_terms must be >= 1");
  std::uniform_int_distribution<int> count(1, max_terms);
  std::exponential_distribution<double> expo(1.0);
  const int terms = count(rng);
  std::vector<double> weights(terms);
  for (double& w : weights) w = expo(rng);
  double total = 0.0;
  for (double w : weights) total += w;
  ComplexMatrix sigma = ComplexMatrix::Zero(d_a * d_b, d_a * d_b);
  for (int i = 0; i < terms; ++i) {
    const DensityMatrix a = random_density_matrix(d_a, rng);
    const DensityMatrix b = random_density_matrix(d_b, rng);
    sigma += (weights[i] / total) * tensor(a.matrix(), b.matrix());
  }
  sigma /= sigma.trace().real();
  return DensityMatrix(ComplexMatrix((sigma + sigma.adjoint()) / 2.0));
}

WitnessOperator random_local_werner_witness(Rng& rng) {
  const ComplexMatrix u = tensor(haar_random_unitary(2, rng), haar_random_unitary(2, rng));
  ComplexMatrix w = u * werner_witness().op().matrix() * u.adjoint();
  w = (w + w.adjoint()) / 2.0;
  w /= w.trace().real();
  return WitnessOperator(HermitianOperator(w), 2, 2, true);
}

bool VerifyReport::all_passed() const {
  return std::all_of(properties.begin(), properties.end(),
                     [](const PropertyReport& p) { return p.passed; });
}

PropertyReport check_linearity(const VerifyOptions& options) {
  const auto start = Clock::now();
  Rng rng = suite_rng(options, 1);
  const InputBasis basis = tetrahedral_basis();
  const MeasurementModel ideal = MeasurementModel::ideal(2, 2);
  const double scale = basis.d_a() * basis.d_b();

  std::vector<HermitianOperator> witnesses;
  for (int k = 0; k < options.linearity_witnesses; ++k) witnesses.push_back(random_hermitian(4, rng));
  std::vector<CoefficientTable> betas;
  for (const auto& w : witnesses) betas.push_back(decompose_witness(w, basis));

  double residual = 0.0;
  for (int s = 0; s < options.linearity_states; ++s) {
    const DensityMatrix rho = random_density_matrix(4, rng);
    const ProbabilityTable table = simulate_probability_table(rho, basis, ideal);
    for (std::size_t k = 0; k < witnesses.size(); ++k) {
      const double j = compute_j_value(betas[k], table);
      const double expected = trace_product(witnesses[k].matrix(), rho.matrix()) / scale;
      residual = std::max(residual, std::abs(j - expected));
    }
  }
  PropertyReport r{"linearity", residual < 1e-10, residual, 1e-10, elapsed_ms(start),
                   "max |J - Tr[W rho]/(d_A d_B)| under the ideal model"};
  return r;
}

PropertyReport check_separable_nonnegativity(const VerifyOptions& options) {
  const auto start = Clock::now();
  Rng rng = suite_rng(options, 2);
  const InputBasis basis = tetrahedral_basis();
  double min_j = std::numeric_limits<double>::infinity();
  for (int k = 0; k < options.nonnegativity_pairs; ++k) {
    const MeasurementModel model = MeasurementModel::random(2, 2, rng);
    const DensityMatrix sigma = random_separable_state(2, 2, 5, rng);
    const CoefficientTable beta = decompose_witness(random_local_werner_witness(rng), basis);
    min_j = std::min(min_j, compute_j_value(beta, simulate_probability_table(sigma, basis, model)));
  }
  PropertyReport r{"separable_nonnegativity", min_j >= -1e-9, std::max(0.0, -min_j), 1e-9,
                   elapsed_ms(start), "min J over random (POVM model, separable state, witness)"};
  return r;
}

PropertyReport check_round_trip(const VerifyOptions& options) {
  const auto start = Clock::now();
  Rng rng = suite_rng(options, 3);
  const InputBasis basis = tetrahedral_basis();
  const std::function<HermitianOperator(const CoefficientTable&, const InputBasis&)> rebuild =
      options.flip_reconstruct_sign ? faulty_reconstruct : reconstruct;

  std::vector<HermitianOperator> cases{werner_witness().op()};
  for (int k = 0; k < 20; ++k) cases.push_back(random_hermitian(4, rng));
  double residual = 0.0;
  for (const auto& w : cases) {
    const HermitianOperator back = rebuild(decompose_witness(w, basis), basis);
    residual = std::max(residual, (back.matrix() - w.matrix()).cwiseAbs().maxCoeff());
  }
  PropertyReport r{"decomposition_round_trip", residual < 1e-10, residual, 1e-10,
                   elapsed_ms(start), "max entrywise |reconstruct(decompose(W)) - W|"};
  return r;
}

PropertyReport check_certificate_soundness(const VerifyOptions& options) {
  const auto start = Clock::now();
  const InputBasis basis = tetrahedral_basis();
  const ProbabilityTable table =
      simulate_probability_table(werner_state(0.2), basis, MeasurementModel::ideal(2, 2));
  int sound = 0;
  for (int run = 0; run < options.soundness_runs; ++run) {
    Rng rng(derive_seed(derive_seed(options.seed, 4), static_cast<std::uint64_t>(run)));
    const OptimizedWitness w = optimize_epsilon_witness(table, basis, 0.1, 0.1, rng);
    if (w.certificate.estimated_violation_rate <= 0.1) ++sound;
  }
  const int needed = static_cast<int>(std::ceil(0.9 * options.soundness_runs));
  const double failing = 1.0 - static_cast<double>(sound) / std::max(1, options.soundness_runs);
  PropertyReport r{"certificate_soundness", sound >= needed, failing, 0.1, elapsed_ms(start),
                   std::to_string(sound) + "/" + std::to_string(options.soundness_runs) +
                       " runs with violation rate <= epsilon (epsilon = delta = 0.1, v = 0.2)"};
  return r;
}

VerifyReport run_verification(const VerifyOptions& options) {
  VerifyReport report;
  report.properties.push_back(check_linearity(options));
  report.properties.push_back(check_separable_nonnegativity(options));
  report.properties.push_back(check_round_trip(options));
  report.properties.push_back(check_certificate_soundness(options));
  return report;
}

nlohmann::ordered_json report_to_json(const VerifyReport& report, std::uint64_t seed) {
  nlohmann::ordered_json j;
  j["seed"] = seed;
  j["passed"] = report.all_passed();
  nlohmann::ordered_json props = nlohmann::ordered_json::array();
  for (const auto& p : report.properties) {
    props.push_back({{"name", p.name},
                     {"passed", p.passed},
                     {"residual", p.residual},
                     {"threshold", p.threshold},
                     {"runtime_ms", p.runtime_ms},
                     {"detail", p.detail}});
  }
  j["properties"] = std::move(props);
  return j;
}

}  // namespace mdiew
