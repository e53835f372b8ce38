#pragma once

#include <optional>
#include <vector>

#include "mapshrink/experiments/config.hpp"
#include "mapshrink/experiments/io.hpp"

namespace mapshrink {

/// Everything one experiment run produces. trials holds the recorded
/// (trial, estimator) cells; summary the box statistics per cell; expected
/// the per-beta trial means of the single and historical scenarios (empty
/// for the double scenario).
struct RunOutput {
  std::vector<TrialRecord> trials;
  std::vector<SummaryRow> summary;
  std::vector<ExpectedRow> expected;
};

/// One trial of the double-block scenario, one entry per configured
/// estimator in config order; a degenerate estimator yields nullopt. The
/// trial's random draws are a pure function of (master_seed, rho_index,
/// trial_index), so trials can run in any order or concurrently.
std::vector<std::optional<TrialRecord>> run_double_trial(
    const ExperimentConfig& config, Eigen::Index rho_index,
    Eigen::Index trial_index);

/// Full double-block scenario: correlated beta pairs on config.rho_grid,
/// fresh independent blocks per trial, estimators evaluated against the
/// second block's realised truth.
RunOutput run_double_block(const ExperimentConfig& config);

/// Single-block scenario over a panel of beta vectors. panel may be null for
/// scenario = single, in which case a synthetic sector-clustered panel is
/// drawn from the master seed; historical_single requires a panel.
/// sector_labels, when given, override the panel's own labels.
RunOutput run_single_block(const ExperimentConfig& config,
                           const BetaPanel* panel,
                           const std::vector<std::string>* sector_labels);

/// Historical two-block scenario: block pairs (beta_t, beta_{t+12}) for
/// t = 1..columns/2, estimators evaluated against the later block's truth.
/// The panel needs at least 24 columns; the first 24 are used.
RunOutput run_historical_double(const ExperimentConfig& config,
                                const BetaPanel& panel);

}  // namespace mapshrink
