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

#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "mdiew/cli.hpp"

namespace {

void add_common_flags(CLI::App* sub, mdiew::cli::RunConfig& config) {
  sub->add_option("--basis", config.basis_name, "Input basis name")->capture_default_str();
  sub->add_option("--state", config.state_spec, "werner:<v> or file:<path>")->capture_default_str();
  sub->add_option("--model", config.model_spec, "ideal, phase_flip or file:<path>")
      ->capture_default_str();
  sub->add_option("--epsilon", config.epsilon, "Epsilon level")->capture_default_str();
  sub->add_option("--delta", config.delta, "Failure probability of the sampled program")
      ->capture_default_str();
  sub->add_option("--seed", config.seed, "Random seed")->capture_default_str();
  sub->add_option("--out", config.output_dir, "Output directory")->capture_default_str();
  sub->add_option("--grid-step", config.grid_step, "Visibility grid step for sweep")
      ->capture_default_str();
  sub->add_option("--refine-rounds", config.refine_rounds,
                  "Constraint-generation rounds after the sampled solve (0 disables)")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  using mdiew::cli::Command;
  CLI::App app{"Measurement-device-independent entanglement witnessing"};
  app.require_subcommand(1);
  mdiew::cli::RunConfig config;

  struct Entry {
    const char* name;
    const char* help;
    Command command;
  };
  const Entry entries[] = {
      {"decompose", "Decompose a witness operator onto the product input basis", Command::kDecompose},
      {"simulate", "Simulate a probability table", Command::kSimulate},
      {"optimize", "Find the epsilon-level optimal witness for a probability table", Command::kOptimize},
      {"sweep", "Werner visibility sweep of original and optimized witness values", Command::kSweep},
      {"verify", "Run the property suites", Command::kVerify},
  };
  for (const auto& e : entries) {
    CLI::App* sub = app.add_subcommand(e.name, e.help);
    add_common_flags(sub, config);
    sub->callback([&config, cmd = e.command] { config.command = cmd; });
    if (e.command == Command::kDecompose) {
      sub->add_option("--witness", config.witness_path, "Operator JSON file to decompose");
    }
    if (e.command == Command::kOptimize) {
      sub->add_option("--table", config.table_path, "Probability table CSV (measured data)");
    }
    if (e.command == Command::kVerify) {
      sub->add_flag("--inject-fault", config.inject_fault,
                    "Negate one reconstruction term to check that the suite catches it")
          ->group("");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return mdiew::cli::kExitUsage;
  }
  return mdiew::cli::run(config, std::cout, std::cerr);
}
