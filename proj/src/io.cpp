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

#include "mdiew/io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>

namespace mdiew::io {

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(const std::string& field, int line) {
  const std::string t = trim(field);
  T value{};
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw FormatError("table CSV line " + std::to_string(line) + ": cannot parse '" + t + "'");
  }
  return value;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_table_csv(const ProbabilityTable& table, std::ostream& out) {
  out << "x,y,p\n";
  for (int x = 0; x < table.rows(); ++x) {
    for (int y = 0; y < table.cols(); ++y) {
      out << x << ',' << y << ',' << format_double(table(x, y)) << '\n';
    }
  }
}

std::string table_csv(const ProbabilityTable& table) {
  std::ostringstream out;
  write_table_csv(table, out);
  return out.str();
}

nlohmann::ordered_json table_descriptor(const ProbabilityTable& table,
                                        const std::string& config_hash) {
  nlohmann::ordered_json j;
  j["basis_name"] = table.basis_name();
  j["d_a"] = table.d_a();
  j["d_b"] = table.d_b();
  j["provenance"] = to_string(table.provenance());
  if (table.seed()) {
    j["seed"] = *table.seed();
  } else {
    j["seed"] = nullptr;
  }
  if (!config_hash.empty()) j["config_hash"] = config_hash;
  return j;
}

ProbabilityTable parse_table_csv(const std::string& csv,
                                 const std::optional<nlohmann::json>& descriptor) {
  std::istringstream in(csv);
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  std::map<std::pair<int, int>, double> entries;
  int max_x = -1, max_y = -1;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != "x,y,p") {
        throw FormatError("table CSV: expected header 'x,y,p', got '" + line + "'");
      }
      header_seen = true;
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != 3) {
      throw FormatError("table CSV line " + std::to_string(line_no) + ": expected 3 fields");
    }
    const int x = parse_number<int>(fields[0], line_no);
    const int y = parse_number<int>(fields[1], line_no);
    const double p = parse_number<double>(fields[2], line_no);
    if (x < 0 || y < 0) {
      throw FormatError("table CSV line " + std::to_string(line_no) + ": negative index");
    }
    if (!entries.emplace(std::make_pair(x, y), p).second) {
      throw FormatError("table CSV line " + std::to_string(line_no) + ": duplicate entry (" +
                        std::to_string(x) + "," + std::to_string(y) + ")");
    }
    max_x = std::max(max_x, x);
    max_y = std::max(max_y, y);
  }
  if (!header_seen) throw FormatError("table CSV: missing header");
  if (entries.empty()) throw FormatError("table CSV: no data rows");
  const int rows = max_x + 1, cols = max_y + 1;
  if (static_cast<long>(entries.size()) != static_cast<long>(rows) * cols) {
    throw FormatError("table CSV: table is incomplete, expected " + std::to_string(rows * cols) +
                      " entries, got " + std::to_string(entries.size()));
  }
  Eigen::MatrixXd p(rows, cols);
  for (const auto& [key, value] : entries) p(key.first, key.second) = value;

  std::string basis_name = "tetrahedral";
  int d_a = static_cast<int>(std::lround(std::sqrt(rows)));
  int d_b = static_cast<int>(std::lround(std::sqrt(cols)));
  std::optional<std::uint64_t> seed;
  if (descriptor) {
    try {
      basis_name = descriptor->value("basis_name", basis_name);
      d_a = descriptor->value("d_a", d_a);
      d_b = descriptor->value("d_b", d_b);
      if (descriptor->contains("seed") && !(*descriptor)["seed"].is_null()) {
        seed = (*descriptor)["seed"].get<std::uint64_t>();
      }
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(std::string("table descriptor: ") + e.what());
    }
  }
  if (d_a * d_a != rows || d_b * d_b != cols) {
    throw FormatError("table CSV: shape " + std::to_string(rows) + "x" + std::to_string(cols) +
                      " does not match d_a^2 x d_b^2 = " + std::to_string(d_a * d_a) + "x" +
                      std::to_string(d_b * d_b));
  }
  return ProbabilityTable(std::move(p), basis_name, d_a, d_b, Provenance::kLoaded, seed);
}

ProbabilityTable read_table(const std::filesystem::path& path) {
  const std::string csv = read_text(path);
  std::filesystem::path sidecar = path;
  sidecar.replace_extension(".json");
  std::optional<nlohmann::json> descriptor;
  if (std::filesystem::exists(sidecar)) {
    try {
      descriptor = nlohmann::json::parse(read_text(sidecar));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("table descriptor " + sidecar.string() + ": " + e.what());
    }
  }
  return parse_table_csv(csv, descriptor);
}

nlohmann::ordered_json operator_to_json(const ComplexMatrix& m) {
  nlohmann::ordered_json j;
  j["dim"] = m.rows();
  nlohmann::ordered_json entries = nlohmann::ordered_json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) entries.push_back({m(r, c).real(), m(r, c).imag()});
  }
  j["entries"] = std::move(entries);
  return j;
}

HermitianOperator operator_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("entries")) {
    throw FormatError("operator file: expected an object with 'dim' and 'entries'");
  }
  if (!j["dim"].is_number_integer() || j["dim"].get<long>() < 1) {
    throw FormatError("operator file: 'dim' must be a positive integer");
  }
  const long dim = j["dim"].get<long>();
  const auto& entries = j["entries"];
  if (!entries.is_array() || static_cast<long>(entries.size()) != dim * dim) {
    throw FormatError("operator file: 'entries' must hold dim*dim = " + std::to_string(dim * dim) +
                      " [re, im] pairs");
  }
  ComplexMatrix m(dim, dim);
  for (long k = 0; k < dim * dim; ++k) {
    const auto& e = entries[static_cast<std::size_t>(k)];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      throw FormatError("operator file: entry " + std::to_string(k) + " is not a [re, im] pair");
    }
    m(k / dim, k % dim) = {e[0].get<double>(), e[1].get<double>()};
  }
  return HermitianOperator(m);
}

HermitianOperator read_operator(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text(path));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("operator file " + path.string() + ": " + e.what());
  }
  return operator_from_json(j);
}

nlohmann::ordered_json beta_to_json(const CoefficientTable& beta) {
  nlohmann::ordered_json flat = nlohmann::ordered_json::array();
  for (int x = 0; x < beta.rows(); ++x) {
    for (int y = 0; y < beta.cols(); ++y) flat.push_back(beta(x, y));
  }
  return flat;
}

CoefficientTable beta_from_json(const nlohmann::json& j, int rows, int cols) {
  if (!j.is_array() || static_cast<long>(j.size()) != static_cast<long>(rows) * cols) {
    throw FormatError("beta: expected a flat row-major array of " + std::to_string(rows * cols) +
                      " numbers");
  }
  Eigen::MatrixXd beta(rows, cols);
  for (int k = 0; k < rows * cols; ++k) {
    if (!j[k].is_number()) throw FormatError("beta: entries must be numbers");
    beta(k / cols, k % cols) = j[k].get<double>();
  }
  return CoefficientTable(std::move(beta));
}

nlohmann::ordered_json witness_to_json(const OptimizedWitness& w, std::uint64_t seed) {
  nlohmann::ordered_json j;
  j["beta"] = beta_to_json(w.beta);
  j["beta_shape"] = {w.beta.rows(), w.beta.cols()};
  j["j_value"] = w.j_value;
  j["certificate"] = {{"epsilon", w.certificate.epsilon},
                      {"delta", w.certificate.delta},
                      {"n_samples", w.certificate.n_samples},
                      {"estimated_violation_rate", w.certificate.estimated_violation_rate}};
  j["solver_status"] = to_string(w.status);
  j["seed"] = seed;
  return j;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  out << text;
}

}  // namespace mdiew::io
