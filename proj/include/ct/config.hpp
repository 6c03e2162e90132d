#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ct/numeric.hpp"

namespace ct {

// Resolved run configuration. Serialized as flat `key=value` lines with
// dotted keys; parsing and serialization round-trip losslessly (doubles are
// printed with 17 significant digits).
struct RunConfig {
  std::string model_name = "torus3";
  int model_n = 1;
  int resolution = 64;          // quadrature nodes per axis
  double fd_step = 1e-5;        // gradient stencils, fraction of the period
  double fd_bracket_step = 1e-4;  // Jacobian/bracket stencils
  double dt = 1e-3;             // flow integrator step
  double lin_tol = 1e-8;
  double conf_tol = 1e-5;
  double newton_tol = 1e-10;
  double gram_tol = 1e-10;
  std::uint64_t seed = 1;
  int threads = 0;              // 0: environment / hardware default
  std::string output_path;
  std::string output_format = "csv";  // csv | json

  Tolerances tolerances() const;
  FdSteps fd_steps() const;
  void validate() const;

  // Canonically ordered key=value view of every field.
  std::vector<std::pair<std::string, std::string>> items() const;
};

// Assign one dotted key. ConfigInvalid on unknown keys or unusable values.
void config_set(RunConfig& cfg, const std::string& key, const std::string& value);

// Parse `key=value` lines ('#' comments and blank lines allowed).
RunConfig parse_config(const std::string& text);
RunConfig load_config_file(const std::string& path);

std::string serialize_config(const RunConfig& cfg);

// Shortest-round-trip style formatting used for every double this tool
// prints: 17 significant digits.
std::string format_double(double v);

}  // namespace ct
