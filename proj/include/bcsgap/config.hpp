#pragma once

#include "bcsgap/gap_solver.hpp"
#include "bcsgap/model.hpp"

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace bcs {

struct GridSettings {
  std::size_t energy_nodes = 129;
  double t_min = 0.0;
  double t_max = 0.0;  // 0 means tau_2
  std::size_t t_points = 33;
};

struct OutputSettings {
  std::string dir;  // empty: write to stdout
  std::string format = "csv";
};

struct RunConfig {
  PhysicalParams params;
  PotentialSpec potential = ConstantPotential{0.3};
  DosKind dos = DosKind::SqrtBand;
  GridSettings grid;
  SolverOptions solver;
  double quad_tol = 1e-10;
  OutputSettings output;
  /// Every effective setting, defaults included, in schema order.
  std::vector<std::pair<std::string, std::string>> echo;
};

/// Parses the key = value schema. Unknown keys, malformed values and violated
/// invariants throw ConfigError naming the key. Relative file paths resolve
/// against base_dir.
RunConfig parse_config(const std::string& text, const std::string& base_dir = ".");

/// Reads and parses a config file.
RunConfig load_config(const std::string& path);

/// The documented keys, for help output.
const std::vector<std::string>& config_keys();

/// Rebuilds the echo after programmatic edits.
void refresh_echo(RunConfig& cfg);

}  // namespace bcs
