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

// Command implementations behind the `mdiew` executable.

#ifndef MDIEW_CLI_HPP_
#define MDIEW_CLI_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "mdiew/errors.hpp"
#include "mdiew/qmat.hpp"
#include "mdiew/simulation.hpp"
#include "mdiew/witness.hpp"

namespace mdiew::cli {

enum class Command { kDecompose, kSimulate, kOptimize, kSweep, kVerify };

std::string to_string(Command c);

/// Bad flags or flag values; maps to exit code 2.
class UsageError : public Error {
 public:
  using Error::Error;
};

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

struct RunConfig {
  Command command = Command::kVerify;
  std::string basis_name = "tetrahedral";
  std::string state_spec = "werner:1";  // werner:<v> | file:<path>
  std::string model_spec = "ideal";     // ideal | phase_flip | file:<path>
  double epsilon = 0.1;
  double delta = 0.1;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = ".";
  double grid_step = 0.02;
  std::string witness_path;  // decompose input
  std::string table_path;    // optimize input (measured data)
  int refine_rounds = 0;
  bool inject_fault = false;

  /// Stable textual form of every field that influences outputs.
  std::string canonical() const;
  std::string hash() const;
};

InputBasis resolve_basis(const std::string& name);
DensityMatrix resolve_state(const std::string& spec);
MeasurementModel resolve_model(const std::string& spec);

int cmd_decompose(const RunConfig& config, std::ostream& log);
int cmd_simulate(const RunConfig& config, std::ostream& log);
int cmd_optimize(const RunConfig& config, std::ostream& log);
int cmd_sweep(const RunConfig& config, std::ostream& log);
int cmd_verify(const RunConfig& config, std::ostream& log);

/// Dispatches and maps exceptions to exit codes: UsageError and
/// ParameterError give 2, every other failure 1.
int run(const RunConfig& config, std::ostream& log, std::ostream& err);

}  // namespace mdiew::cli

#endif  // MDIEW_CLI_HPP_
