#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mapshrink/estimators.hpp"

namespace mapshrink {

enum class Scenario { single, double_block, historical_single, historical_double };

/// Parameters of one Monte Carlo experiment. Parsed from key=value text;
/// see parse_config for defaults and validation.
struct ExperimentConfig {
  Scenario scenario = Scenario::double_block;
  Eigen::Index p = 500;
  Eigen::Index n = 24;
  std::vector<double> rho_grid;
  Eigen::Index trials = 100;
  std::vector<std::string> estimators;
  double sigma2 = 0.16;
  double delta2 = 0.25;
  double beta_mean = 1.0;
  double beta_sd = 0.5;
  Eigen::Index num_atoms = 0;  // 0 means the default ceil(p^(1/3))
  std::uint64_t master_seed = 1;
  PsiSource psi_source = PsiSource::current;

  /// Resolved atom count: num_atoms, or ceil(p^(1/3)) when left at 0.
  Eigen::Index resolved_num_atoms() const;
};

std::string to_string(Scenario scenario);
Scenario scenario_from_string(const std::string& text);

/// Estimator tags a scenario runs when the config does not list any.
std::vector<std::string> default_estimators(Scenario scenario);

/// Parses key=value lines ('#' starts a comment, blank lines are skipped).
/// Unknown keys, malformed values, unknown estimator tags, rho outside
/// [-1, 1], and num_atoms above p^0.4 (anchor dimension must stay well below
/// sqrt(p)) all raise ConfigError.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_file(const std::string& path);

/// Re-validates a config after programmatic changes (the parser calls this).
void validate_config(const ExperimentConfig& config);

}  // namespace mapshrink
