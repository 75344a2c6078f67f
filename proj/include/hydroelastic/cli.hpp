#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hydroelastic/bifurcation.hpp"
#include "hydroelastic/elasticity.hpp"
#include "hydroelastic/spectral.hpp"

namespace hydroelastic {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitNumerical = 3,
  kExitInvariant = 4,
};

/// Effective run configuration: the JSON file with command-line overrides
/// applied.
struct RunConfig {
  double h = 1.0;
  double g = 1.0;
  int N = 32;
  int M = 0;
  std::string model_name = "quadratic";
  double alpha = 1.0;
  double beta = 1.0;
  std::filesystem::path output = ".";

  int n = 1;
  Sign sign = Sign::plus;
  std::optional<double> gamma;
  std::optional<double> delta;
  std::optional<double> lambda;
  double ds = 0.0;
  int steps = 200;
  int secondary_steps = 20;
  double tol = 0.0;
  int n_y = 129;
  std::string branch;
  int point = -1;

  std::vector<int> dispersion_n;
  std::vector<double> dispersion_lambda;
  std::vector<double> dispersion_gamma;
  int bifpoints_n_max = 8;
  std::vector<double> bifpoints_gamma{0.0};
  int resonance_n_max = 8;

  StripGeometry geometry() const;
  EnergyModel model() const;
  /// Canonical JSON form; parsing it back yields the same configuration.
  nlohmann::json to_json() const;
};

/// Parses and validates a configuration document. Unknown keys and
/// out-of-range values raise ConfigError.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);

int cmd_dispersion(const RunConfig& cfg);
int cmd_bifpoints(const RunConfig& cfg);
int cmd_resonance(const RunConfig& cfg);
int cmd_trace(const RunConfig& cfg);
int cmd_wilton(const RunConfig& cfg);
int cmd_flow(const RunConfig& cfg);
int cmd_check_energy(const RunConfig& cfg);

/// Entry point of the command-line tool; returns the process exit code.
int run_cli(int argc, char** argv);

}  // namespace hydroelastic
