#include "mapshrink/experiments/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "mapshrink/errors.hpp"

namespace mapshrink {

namespace {

const std::set<std::string> kDoubleTags = {"pca1", "pca2", "gps1",
                                           "gps2", "dyn_maps", "beta_ordered"};
const std::set<std::string> kSingleTags = {"pca", "gps", "sector", "beta_ordered"};

std::string trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r");
  if (begin == std::string::npos) {
    return "";
  }
  const auto end = text.find_last_not_of(" \t\r");
  return text.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) {
      items.push_back(item);
    }
  }
  return items;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double parsed = std::stod(value, &used);
    if (used != value.size()) {
      throw std::invalid_argument(value);
    }
    return parsed;
  } catch (const std::exception&) {
    throw ConfigError("config: value '" + value + "' for key '" + key +
                      "' is not a number");
  }
}

long long parse_integer(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long long parsed = std::stoll(value, &used);
    if (used != value.size()) {
      throw std::invalid_argument(value);
    }
    return parsed;
  } catch (const std::exception&) {
    throw ConfigError("config: value '" + value + "' for key '" + key +
                      "' is not an integer");
  }
}

std::uint64_t parse_seed(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const unsigned long long parsed = std::stoull(value, &used);
    if (used != value.size()) {
      throw std::invalid_argument(value);
    }
    return parsed;
  } catch (const std::exception&) {
    throw ConfigError("config: value '" + value + "' for key '" + key +
                      "' is not a 64-bit seed");
  }
}

}  // namespace

Eigen::Index ExperimentConfig::resolved_num_atoms() const {
  if (num_atoms > 0) {
    return num_atoms;
  }
  return static_cast<Eigen::Index>(
      std::ceil(std::cbrt(static_cast<double>(p))));
}

std::string to_string(Scenario scenario) {
  switch (scenario) {
    case Scenario::single: return "single";
    case Scenario::double_block: return "double";
    case Scenario::historical_single: return "historical_single";
    case Scenario::historical_double: return "historical_double";
  }
  return "unknown";
}

Scenario scenario_from_string(const std::string& text) {
  if (text == "single") return Scenario::single;
  if (text == "double") return Scenario::double_block;
  if (text == "historical_single") return Scenario::historical_single;
  if (text == "historical_double") return Scenario::historical_double;
  throw ConfigError("config: unknown scenario '" + text +
                    "' (expected single, double, historical_single, or "
                    "historical_double)");
}

std::vector<std::string> default_estimators(Scenario scenario) {
  switch (scenario) {
    case Scenario::double_block:
      return {"pca1", "pca2", "gps1", "gps2", "dyn_maps", "beta_ordered"};
    case Scenario::single:
    case Scenario::historical_single:
      return {"pca", "gps", "sector", "beta_ordered"};
    case Scenario::historical_double:
      return {"pca1", "pca2", "gps1", "gps2", "dyn_maps"};
  }
  return {};
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig config;
  bool saw_rho_grid = false;
  bool saw_estimators = false;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string stripped = trim(line.substr(0, line.find('#')));
    if (stripped.empty()) {
      continue;
    }
    const auto equals = stripped.find('=');
    if (equals == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_number) +
                        ": expected key=value, got '" + stripped + "'");
    }
    const std::string key = trim(stripped.substr(0, equals));
    const std::string value = trim(stripped.substr(equals + 1));
    if (key == "scenario") {
      config.scenario = scenario_from_string(value);
    } else if (key == "p") {
      config.p = static_cast<Eigen::Index>(parse_integer(key, value));
    } else if (key == "n") {
      config.n = static_cast<Eigen::Index>(parse_integer(key, value));
    } else if (key == "rho_grid") {
      saw_rho_grid = true;
      config.rho_grid.clear();
      for (const auto& item : split_list(value)) {
        config.rho_grid.push_back(parse_double(key, item));
      }
    } else if (key == "trials") {
      config.trials = static_cast<Eigen::Index>(parse_integer(key, value));
    } else if (key == "estimators") {
      saw_estimators = true;
      config.estimators = split_list(value);
    } else if (key == "sigma2") {
      config.sigma2 = parse_double(key, value);
    } else if (key == "delta2") {
      config.delta2 = parse_double(key, value);
    } else if (key == "beta_mean") {
      config.beta_mean = parse_double(key, value);
    } else if (key == "beta_sd") {
      config.beta_sd = parse_double(key, value);
    } else if (key == "num_atoms") {
      config.num_atoms = static_cast<Eigen::Index>(parse_integer(key, value));
    } else if (key == "master_seed") {
      config.master_seed = parse_seed(key, value);
    } else if (key == "psi_source") {
      if (value == "current") {
        config.psi_source = PsiSource::current;
      } else if (value == "double") {
        config.psi_source = PsiSource::double_block;
      } else {
        throw ConfigError("config: psi_source must be 'current' or 'double', got '" +
                          value + "'");
      }
    } else {
      throw ConfigError("config line " + std::to_string(line_number) +
                        ": unknown key '" + key + "'");
    }
  }
  if (!saw_rho_grid && config.scenario == Scenario::double_block) {
    config.rho_grid = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
  }
  if (!saw_estimators) {
    config.estimators = default_estimators(config.scenario);
  }
  validate_config(config);
  return config;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("config: cannot open '" + path + "'");
  }
  return parse_config(in);
}

void validate_config(const ExperimentConfig& config) {
  if (config.p < 2) {
    throw ConfigError("config: p must be >= 2");
  }
  if (config.n < 2) {
    throw ConfigError("config: n must be >= 2");
  }
  if (config.trials < 1) {
    throw ConfigError("config: trials must be >= 1");
  }
  if (config.sigma2 <= 0.0 || config.delta2 <= 0.0) {
    throw ConfigError("config: sigma2 and delta2 must be positive");
  }
  if (config.beta_mean == 0.0) {
    throw ConfigError("config: beta_mean must be nonzero (the equal-weight "
                      "anchor needs a nonzero mean profile)");
  }
  if (config.beta_sd < 0.0) {
    throw ConfigError("config: beta_sd must be nonnegative");
  }
  for (double rho : config.rho_grid) {
    if (rho < -1.0 || rho > 1.0) {
      throw ConfigError("config: rho_grid values must lie in [-1, 1]");
    }
  }
  if (config.scenario == Scenario::double_block && config.rho_grid.empty()) {
    throw ConfigError("config: the double scenario needs a nonempty rho_grid");
  }
  if (config.estimators.empty()) {
    throw ConfigError("config: estimator list is empty");
  }
  const bool double_scenario = config.scenario == Scenario::double_block ||
                               config.scenario == Scenario::historical_double;
  const auto& allowed = double_scenario ? kDoubleTags : kSingleTags;
  for (const auto& tag : config.estimators) {
    if (allowed.count(tag) == 0) {
      throw ConfigError("config: estimator '" + tag + "' is not valid for scenario " +
                        to_string(config.scenario));
    }
  }
  if (config.scenario == Scenario::historical_double) {
    for (const auto& tag : config.estimators) {
      if (tag == "beta_ordered") {
        throw ConfigError("config: beta_ordered is not run in historical_double");
      }
    }
  }
  const Eigen::Index atoms = config.resolved_num_atoms();
  if (atoms < 1 || atoms > config.p - 1) {
    throw ConfigError("config: num_atoms must lie in [1, p - 1]");
  }
  // Anchor dimension must be dominated by sqrt(p); p^0.4 is the enforced cap.
  if (static_cast<double>(atoms) >
      std::pow(static_cast<double>(config.p), 0.4)) {
    throw ConfigError("config: num_atoms = " + std::to_string(atoms) +
                      " exceeds p^0.4; the anchor dimension must stay well "
                      "below sqrt(p)");
  }
}

}  // namespace mapshrink
