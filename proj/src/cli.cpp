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

#include "mdiew/cli.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "mdiew/io.hpp"
#include "mdiew/optimizer.hpp"
#include "mdiew/verify.hpp"

namespace mdiew::cli {

namespace {

constexpr const char* kPlotScript = R"(#!/usr/bin/env python3
# Renders sweep.csv: original and optimized witness values against visibility.
import csv
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else "sweep.csv"
v, j_orig, j_opt = [], [], []
with open(path) as f:
    for row in csv.DictReader(f):
        v.append(float(row["v"]))
        j_orig.append(float(row["j_original"]))
        j_opt.append(float(row["j_optimized"]))

plt.plot(v, j_orig, "o-", label="original")
plt.plot(v, j_opt, "s-", label="optimized")
plt.axhline(0.0, color="gray", linewidth=0.8)
plt.axvline(1.0 / 3.0, color="gray", linestyle="--", linewidth=0.8)
plt.xlabel("visibility v")
plt.ylabel("J")
plt.legend()
plt.savefig(path.rsplit(".", 1)[0] + ".png", dpi=150)
)";

void require_probability(double value, const char* flag) {
  if (!(value > 0.0 && value < 1.0)) {
    throw UsageError(std::string(flag) + " must lie in (0, 1)");
  }
}

nlohmann::ordered_json descriptor(const RunConfig& config) {
  nlohmann::ordered_json j;
  j["command"] = to_string(config.command);
  j["seed"] = config.seed;
  j["config_hash"] = config.hash();
  j["config"] = config.canonical();
  return j;
}

std::string dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

void ensure_output_dir(const RunConfig& config) {
  std::error_code ec;
  std::filesystem::create_directories(config.output_dir, ec);
  if (ec) throw FormatError("cannot create output directory " + config.output_dir.string());
}

}  // namespace

std::string to_string(Command c) {
  switch (c) {
    case Command::kDecompose: return "decompose";
    case Command::kSimulate: return "simulate";
    case Command::kOptimize: return "optimize";
    case Command::kSweep: return "sweep";
    case Command::kVerify: return "verify";
  }
  return "unknown";
}

std::string RunConfig::canonical() const {
  std::ostringstream s;
  s << "command=" << to_string(command) << ";basis=" << basis_name << ";state=" << state_spec
    << ";model=" << model_spec << ";epsilon=" << io::format_double(epsilon)
    << ";delta=" << io::format_double(delta) << ";seed=" << seed
    << ";grid_step=" << io::format_double(grid_step) << ";witness=" << witness_path
    << ";table=" << table_path << ";refine_rounds=" << refine_rounds
    << ";inject_fault=" << (inject_fault ? 1 : 0);
  return s.str();
}

std::string RunConfig::hash() const { return io::fnv1a_hex(canonical()); }

InputBasis resolve_basis(const std::string& name) {
  if (name == "tetrahedral") return tetrahedral_basis();
  throw UsageError("unknown basis '" + name + "' (available: tetrahedral)");
}

DensityMatrix resolve_state(const std::string& spec) {
  if (spec.rfind("werner:", 0) == 0) {
    const std::string value = spec.substr(7);
    double v = 0.0;
    try {
      std::size_t used = 0;
      v = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      throw UsageError("--state werner:<v> needs a number, got '" + value + "'");
    }
    if (!(v >= 0.0 && v <= 1.0)) throw UsageError("--state werner:<v> needs v in [0, 1]");
    return werner_state(v);
  }
  if (spec.rfind("file:", 0) == 0) return DensityMatrix(io::read_operator(spec.substr(5)));
  throw UsageError("--state must be werner:<v> or file:<path>, got '" + spec + "'");
}

MeasurementModel resolve_model(const std::string& spec) {
  if (spec == "ideal") return MeasurementModel::ideal(2, 2);
  if (spec == "phase_flip") return MeasurementModel::phase_flip();
  if (spec.rfind("file:", 0) == 0) {
    const std::string path = spec.substr(5);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(io::read_text(path));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("model file " + path + ": " + e.what());
    }
    if (!j.contains("povm_a") || !j.contains("povm_b")) {
      throw FormatError("model file " + path + ": expected 'povm_a' and 'povm_b' operators");
    }
    HermitianOperator a = io::operator_from_json(j["povm_a"]);
    HermitianOperator b = io::operator_from_json(j["povm_b"]);
    const int d_a = j.value("d_a", static_cast<int>(std::lround(std::sqrt(a.dim()))));
    const int d_b = j.value("d_b", static_cast<int>(std::lround(std::sqrt(b.dim()))));
    return MeasurementModel(std::move(a), std::move(b), d_a, d_b, "file");
  }
  throw UsageError("--model must be ideal, phase_flip or file:<path>, got '" + spec + "'");
}

int cmd_decompose(const RunConfig& config, std::ostream& log) {
  const InputBasis basis = resolve_basis(config.basis_name);
  std::string path = config.witness_path;
  if (path.empty() && config.state_spec.rfind("file:", 0) == 0) path = config.state_spec.substr(5);
  if (path.empty()) throw UsageError("decompose needs --witness <path>");
  const HermitianOperator w = io::read_operator(path);
  const CoefficientTable beta = decompose_witness(w, basis);
  const double residual = (reconstruct(beta, basis).matrix() - w.matrix()).cwiseAbs().maxCoeff();

  ensure_output_dir(config);
  nlohmann::ordered_json j = descriptor(config);
  j["basis_name"] = basis.name();
  j["d_a"] = basis.d_a();
  j["d_b"] = basis.d_b();
  j["beta"] = io::beta_to_json(beta);
  j["beta_shape"] = {beta.rows(), beta.cols()};
  j["residual"] = residual;
  io::write_text(config.output_dir / "beta.json", dump(j));
  log << "decomposed " << path << " on basis " << basis.name() << ", max residual "
      << io::format_double(residual) << "\n";
  return residual < 1e-10 ? kExitSuccess : kExitFailure;
}

int cmd_simulate(const RunConfig& config, std::ostream& log) {
  const InputBasis basis = resolve_basis(config.basis_name);
  const DensityMatrix rho = resolve_state(config.state_spec);
  const MeasurementModel model = resolve_model(config.model_spec);
  const ProbabilityTable table = simulate_probability_table(rho, basis, model, config.seed);
  ensure_output_dir(config);
  io::write_text(config.output_dir / "table.csv", io::table_csv(table));
  nlohmann::ordered_json d = io::table_descriptor(table, config.hash());
  io::write_text(config.output_dir / "table.json", dump(d));
  log << "wrote " << (config.output_dir / "table.csv").string() << "\n";
  return kExitSuccess;
}

int cmd_optimize(const RunConfig& config, std::ostream& log) {
  require_probability(config.epsilon, "--epsilon");
  require_probability(config.delta, "--delta");
  const InputBasis basis = resolve_basis(config.basis_name);
  const ProbabilityTable table =
      config.table_path.empty()
          ? simulate_probability_table(resolve_state(config.state_spec), basis,
                                       resolve_model(config.model_spec), config.seed)
          : io::read_table(config.table_path);
  if (table.rows() != basis.size_a() || table.cols() != basis.size_b()) {
    throw LayoutError("probability table shape does not match basis " + basis.name());
  }
  OptimizeOptions options;
  options.refinement_rounds = config.refine_rounds;
  Rng rng(config.seed);
  const OptimizedWitness w =
      optimize_epsilon_witness(table, basis, config.epsilon, config.delta, rng, options);

  ensure_output_dir(config);
  nlohmann::ordered_json j = io::witness_to_json(w, config.seed);
  j["config_hash"] = config.hash();
  j["operator"] = io::operator_to_json(w.op.matrix());
  io::write_text(config.output_dir / "witness.json", dump(j));
  log << "J = " << io::format_double(w.j_value) << " (" << to_string(w.status) << "), N = "
      << w.certificate.n_samples << ", estimated violation rate "
      << io::format_double(w.certificate.estimated_violation_rate) << "\n";
  return w.status == SolverStatus::kInfeasible ? kExitFailure : kExitSuccess;
}

int cmd_sweep(const RunConfig& config, std::ostream& log) {
  require_probability(config.epsilon, "--epsilon");
  require_probability(config.delta, "--delta");
  if (!(config.grid_step > 0.0 && config.grid_step <= 1.0)) {
    throw UsageError("--grid-step must lie in (0, 1]");
  }
  const InputBasis basis = resolve_basis(config.basis_name);
  const MeasurementModel model = resolve_model(config.model_spec);
  OptimizeOptions options;
  options.refinement_rounds = config.refine_rounds;
  const std::vector<SweepPoint> points = sweep_werner(
      sweep_grid(config.grid_step), model, basis, config.epsilon, config.delta, config.seed, options);

  std::ostringstream csv;
  csv << "v,j_original,j_optimized\n";
  for (const auto& p : points) {
    csv << io::format_double(p.v) << ',' << io::format_double(p.j_original) << ','
        << io::format_double(p.j_optimized) << '\n';
  }
  ensure_output_dir(config);
  io::write_text(config.output_dir / "sweep.csv", csv.str());
  nlohmann::ordered_json d = descriptor(config);
  d["model"] = model.name();
  d["basis_name"] = basis.name();
  nlohmann::ordered_json statuses = nlohmann::ordered_json::array();
  for (const auto& p : points) statuses.push_back(to_string(p.status));
  d["solver_status"] = std::move(statuses);
  io::write_text(config.output_dir / "sweep.json", dump(d));
  io::write_text(config.output_dir / "sweep_plot.py", kPlotScript);
  log << "wrote " << points.size() << " sweep points to "
      << (config.output_dir / "sweep.csv").string() << "\n";
  return kExitSuccess;
}

int cmd_verify(const RunConfig& config, std::ostream& log) {
  VerifyOptions options;
  options.seed = config.seed;
  options.flip_reconstruct_sign = config.inject_fault;
  const VerifyReport report = run_verification(options);
  nlohmann::ordered_json j = report_to_json(report, config.seed);
  j["config_hash"] = config.hash();
  ensure_output_dir(config);
  io::write_text(config.output_dir / "verify.json", dump(j));
  log << dump(j);
  return report.all_passed() ? kExitSuccess : kExitFailure;
}

int run(const RunConfig& config, std::ostream& log, std::ostream& err) {
  try {
    switch (config.command) {
      case Command::kDecompose: return cmd_decompose(config, log);
      case Command::kSimulate: return cmd_simulate(config, log);
      case Command::kOptimize: return cmd_optimize(config, log);
      case Command::kSweep: return cmd_sweep(config, log);
      case Command::kVerify: return cmd_verify(config, log);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParameterError& e) {
    err << "parameter error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvariantError& e) {
    err << "invariant violated: " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace mdiew::cli
