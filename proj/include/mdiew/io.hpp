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

// File formats: probability-table CSV with its JSON sidecar, operator JSON,
// coefficient-table JSON and optimized-witness JSON.

#ifndef MDIEW_IO_HPP_
#define MDIEW_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "json.hpp"

#include "mdiew/optimizer.hpp"
#include "mdiew/qmat.hpp"
#include "mdiew/simulation.hpp"
#include "mdiew/witness.hpp"

namespace mdiew::io {

/// Shortest round-trip decimal form of a double.
std::string format_double(double value);

/// 64-bit FNV-1a, hex encoded.
std::string fnv1a_hex(const std::string& text);

/// `x,y,p` header, one row per entry, x-major.
void write_table_csv(const ProbabilityTable& table, std::ostream& out);
std::string table_csv(const ProbabilityTable& table);

nlohmann::ordered_json table_descriptor(const ProbabilityTable& table,
                                        const std::string& config_hash = "");

/// Parses CSV text. Shape is inferred from the largest indices and every
/// (x, y) must appear exactly once. Metadata comes from `descriptor` when
/// given; provenance of the result is always `loaded`.
ProbabilityTable parse_table_csv(const std::string& csv,
                                 const std::optional<nlohmann::json>& descriptor = std::nullopt);

/// Reads `path` and, if present, the sidecar `<stem>.json` next to it.
ProbabilityTable read_table(const std::filesystem::path& path);

/// {"dim": d, "entries": [[re, im], ...]} row-major.
nlohmann::ordered_json operator_to_json(const ComplexMatrix& m);
HermitianOperator operator_from_json(const nlohmann::json& j);
HermitianOperator read_operator(const std::filesystem::path& path);

/// Flat row-major array.
nlohmann::ordered_json beta_to_json(const CoefficientTable& beta);
CoefficientTable beta_from_json(const nlohmann::json& j, int rows, int cols);

nlohmann::ordered_json witness_to_json(const OptimizedWitness& w, std::uint64_t seed);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace mdiew::io

#endif  // MDIEW_IO_HPP_
