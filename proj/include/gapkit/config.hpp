#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "gapkit/lattice.hpp"
#include "gapkit/model.hpp"

namespace gapkit {

using Json = nlohmann::json;

/// Schema-validated run configuration: subcommand sections plus the global
/// seed / output / tolerance keys. Unknown keys are rejected up front.
struct RunConfig {
  Json raw;
  unsigned seed = 20240901;
  int threads = 2;
  std::string out_dir = ".";

  bool has(const std::string& section) const { return raw.contains(section); }
  const Json& section(const std::string& name) const;
};

/// Parses and schema-validates a config file. Throws std::invalid_argument
/// with a path-qualified message on any violation.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text);

/// Builders from validated sections.
LatticeConfig lattice_from_json(const Json& j, unsigned seed, int threads);
std::vector<WellSpec> wells_from_json(const Json& j);
Eigen::MatrixXcd matrix_from_json(const Json& re, const Json* im);

/// Morse constant of a configured potential: min over off-well grid points
/// of V(x) / dist(x, wells)^2 (periodic distance).
double morse_constant(const LatticeConfig& config);

}  // namespace gapkit
