#include "mapshrink/experiments/driver.hpp"

#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "mapshrink/anchors.hpp"
#include "mapshrink/errors.hpp"
#include "mapshrink/estimators.hpp"
#include "mapshrink/experiments/fixture.hpp"
#include "mapshrink/portfolio.hpp"
#include "mapshrink/rng.hpp"

namespace mapshrink {

namespace {

constexpr Eigen::Index kPanelColumns = 24;

const char* kMetricNames[] = {"l2_error", "tracking_p", "opt_bias_p",
                              "forecast_ratio"};
const char* kMeanMetricNames[] = {"l2_sq_mean", "tracking_p_mean",
                                  "opt_bias_p_mean", "forecast_ratio_mean"};

/// Derives the per-purpose block seed of one trial; slot separates the beta
/// draw (0) from the blocks (1, 2).
std::uint64_t trial_seed(const ExperimentConfig& config, Eigen::Index cell,
                         Eigen::Index trial, std::uint64_t slot) {
  return stream_key(config.master_seed, Stream::trial,
                    static_cast<std::uint64_t>(cell),
                    static_cast<std::uint64_t>(trial), slot);
}

/// Scores one direction estimate against the realised truth. Throws
/// mapshrink::Error subtypes on degenerate geometry; the caller records the
/// cell as missing.
TrialRecord score_estimate(const Eigen::VectorXd& h_hat,
                           const FactorEstimate& fe_used, Eigen::Index n_used,
                           const CovarianceModel& truth,
                           const PortfolioWeights& truth_weights,
                           std::int64_t trial_index, double rho_column,
                           const std::string& tag) {
  const Eigen::Index p = h_hat.size();
  const ScalarEstimates scalars = scalar_estimates(fe_used, n_used, p);
  const CovarianceModel estimate(h_hat, scalars.spike_scale, scalars.delta2);
  const PortfolioWeights w_hat = min_var_weights(estimate);
  const ForecastRatio forecast = variance_forecast_ratio(h_hat, truth, estimate);

  TrialRecord record;
  record.trial_index = trial_index;
  record.rho = rho_column;
  record.estimator = tag;
  record.l2_error = (h_hat - truth.unit_vector).norm();
  record.tracking_p = static_cast<double>(p) *
                      tracking_error_exact(w_hat, truth_weights, truth);
  record.opt_bias_p = forecast.p_times_bias_sq;
  record.forecast_ratio = forecast.ratio;
  return record;
}

/// Runs one tagged estimator, turning any mapshrink::Error into a missing
/// cell.
std::optional<TrialRecord> guarded_cell(
    const std::function<TrialRecord()>& evaluate) {
  try {
    return evaluate();
  } catch (const Error&) {
    return std::nullopt;
  }
}

/// Shared two-block evaluation: tags pca1/gps1/beta_ordered read the current
/// block, pca2/gps2 the concatenation, dyn_maps both. Records carry
/// rho_column in the rho field.
std::vector<std::optional<TrialRecord>> evaluate_two_block_trial(
    const ExperimentConfig& config, const ReturnsBlock& previous,
    const ReturnsBlock& current, const Eigen::VectorXd& current_beta,
    double rho_column, Eigen::Index trial_index) {
  const Eigen::Index p = current.p();
  const double spike_scale = config.sigma2 * current_beta.squaredNorm();
  const CovarianceModel truth(current_beta / current_beta.norm(), spike_scale,
                              config.delta2);
  const PortfolioWeights truth_weights = min_var_weights(truth);

  const FactorEstimate fe_current = leading_factor(current);
  Eigen::MatrixXd both(p, previous.n() + current.n());
  both << previous.data, current.data;
  const FactorEstimate fe_double = leading_factor(ReturnsBlock{std::move(both)});
  const Eigen::Index n_single = current.n();
  const Eigen::Index n_double = previous.n() + current.n();

  std::vector<std::optional<TrialRecord>> cells;
  cells.reserve(config.estimators.size());
  for (const auto& tag : config.estimators) {
    cells.push_back(guarded_cell([&]() -> TrialRecord {
      Eigen::VectorXd h_hat;
      const FactorEstimate* fe_used = &fe_current;
      Eigen::Index n_used = n_single;
      if (tag == "pca1") {
        h_hat = fe_current.h;
      } else if (tag == "pca2") {
        h_hat = fe_double.h;
        fe_used = &fe_double;
        n_used = n_double;
      } else if (tag == "gps1") {
        h_hat = gps_estimator(fe_current).h_hat;
      } else if (tag == "gps2") {
        h_hat = gps_estimator(fe_double).h_hat;
        fe_used = &fe_double;
        n_used = n_double;
      } else if (tag == "dyn_maps") {
        h_hat = dynamic_maps(previous, current, config.psi_source).h_hat;
        if (config.psi_source == PsiSource::double_block) {
          fe_used = &fe_double;
          n_used = n_double;
        }
      } else if (tag == "beta_ordered") {
        const Partition partition =
            beta_ordered_partition(current_beta, config.resolved_num_atoms());
        h_hat = maps_estimator(fe_current, partition_subspace(partition)).h_hat;
      } else {
        throw Error("evaluate_two_block_trial: unknown estimator tag '" + tag + "'");
      }
      return score_estimate(h_hat, *fe_used, n_used, truth, truth_weights,
                            trial_index, rho_column, tag);
    }));
  }
  return cells;
}

/// Single-block evaluation against one beta vector. The sector span is
/// shared across betas; the beta-ordered span is per beta.
std::vector<std::optional<TrialRecord>> evaluate_single_block_trial(
    const ExperimentConfig& config, const ReturnsBlock& block,
    const Eigen::VectorXd& beta, const AnchorSubspace* sector_span,
    double rho_column, Eigen::Index trial_index) {
  const double spike_scale = config.sigma2 * beta.squaredNorm();
  const CovarianceModel truth(beta / beta.norm(), spike_scale, config.delta2);
  const PortfolioWeights truth_weights = min_var_weights(truth);
  const FactorEstimate fe = leading_factor(block);

  std::vector<std::optional<TrialRecord>> cells;
  cells.reserve(config.estimators.size());
  for (const auto& tag : config.estimators) {
    cells.push_back(guarded_cell([&]() -> TrialRecord {
      Eigen::VectorXd h_hat;
      if (tag == "pca") {
        h_hat = fe.h;
      } else if (tag == "gps") {
        h_hat = gps_estimator(fe).h_hat;
      } else if (tag == "sector") {
        if (sector_span == nullptr) {
          throw DataError("single-block trial: sector estimator requested "
                          "without sector labels");
        }
        h_hat = maps_estimator(fe, *sector_span).h_hat;
      } else if (tag == "beta_ordered") {
        const Partition partition =
            beta_ordered_partition(beta, config.resolved_num_atoms());
        h_hat = maps_estimator(fe, partition_subspace(partition)).h_hat;
      } else {
        throw Error("evaluate_single_block_trial: unknown estimator tag '" + tag + "'");
      }
      return score_estimate(h_hat, fe, block.n(), truth, truth_weights,
                            trial_index, rho_column, tag);
    }));
  }
  return cells;
}

/// Box statistics of the recorded values of every metric in one cell.
void append_cell_summary(std::vector<SummaryRow>& rows, const std::string& tag,
                         double rho_column,
                         const std::vector<TrialRecord>& recorded,
                         std::size_t degenerate) {
  if (recorded.empty()) {
    return;
  }
  std::vector<double> values(recorded.size());
  for (int metric = 0; metric < 4; ++metric) {
    for (std::size_t i = 0; i < recorded.size(); ++i) {
      const TrialRecord& r = recorded[i];
      values[i] = metric == 0   ? r.l2_error
                  : metric == 1 ? r.tracking_p
                  : metric == 2 ? r.opt_bias_p
                                : r.forecast_ratio;
    }
    SummaryRow row;
    row.estimator = tag;
    row.rho = rho_column;
    row.metric = kMetricNames[metric];
    row.stats = summarize(values);
    row.n = recorded.size();
    row.n_degenerate = degenerate;
    rows.push_back(std::move(row));
  }
}

/// Collects trials of panel scenarios into expected.csv rows (per-beta trial
/// means of the squared error and the scaled portfolio metrics) and box
/// summaries of those means over the betas.
struct PanelAccumulator {
  explicit PanelAccumulator(const ExperimentConfig& config) : config_(config) {
    means_.resize(config.estimators.size());
    degenerate_.assign(config.estimators.size(), 0);
  }

  void add_cell(Eigen::Index beta_index,
                const std::vector<std::vector<TrialRecord>>& recorded,
                const std::vector<std::size_t>& degenerate,
                std::vector<ExpectedRow>& expected) {
    for (std::size_t e = 0; e < config_.estimators.size(); ++e) {
      degenerate_[e] += degenerate[e];
      const auto& cells = recorded[e];
      if (cells.empty()) {
        continue;
      }
      ExpectedRow row;
      row.estimator = config_.estimators[e];
      row.beta_index = static_cast<std::int64_t>(beta_index) + 1;
      for (const auto& record : cells) {
        row.l2_sq_mean += record.l2_error * record.l2_error;
        row.tracking_p_mean += record.tracking_p;
        row.opt_bias_p_mean += record.opt_bias_p;
        row.forecast_ratio_mean += record.forecast_ratio;
      }
      const double count = static_cast<double>(cells.size());
      row.l2_sq_mean /= count;
      row.tracking_p_mean /= count;
      row.opt_bias_p_mean /= count;
      row.forecast_ratio_mean /= count;
      row.n = cells.size();
      row.n_degenerate = degenerate[e];
      means_[e].push_back(row);
      expected.push_back(std::move(row));
    }
  }

  void finish(std::vector<SummaryRow>& summary) const {
    for (std::size_t e = 0; e < config_.estimators.size(); ++e) {
      if (means_[e].empty()) {
        continue;
      }
      std::vector<double> values(means_[e].size());
      for (int metric = 0; metric < 4; ++metric) {
        for (std::size_t i = 0; i < means_[e].size(); ++i) {
          const ExpectedRow& row = means_[e][i];
          values[i] = metric == 0   ? row.l2_sq_mean
                      : metric == 1 ? row.tracking_p_mean
                      : metric == 2 ? row.opt_bias_p_mean
                                    : row.forecast_ratio_mean;
        }
        SummaryRow row;
        row.estimator = config_.estimators[e];
        row.rho = 0.0;
        row.metric = kMeanMetricNames[metric];
        row.stats = summarize(values);
        row.n = means_[e].size();
        row.n_degenerate = degenerate_[e];
        summary.push_back(std::move(row));
      }
    }
  }

 private:
  const ExperimentConfig& config_;
  std::vector<std::vector<ExpectedRow>> means_;
  std::vector<std::size_t> degenerate_;
};

}  // namespace

std::vector<std::optional<TrialRecord>> run_double_trial(
    const ExperimentConfig& config, Eigen::Index rho_index,
    Eigen::Index trial_index) {
  const double rho = config.rho_grid[static_cast<std::size_t>(rho_index)];
  auto [beta1, beta2] = generate_correlated_betas(
      config.p, config.beta_mean, config.beta_sd, rho,
      trial_seed(config, rho_index, trial_index, 0));

  GenerationParams params;
  params.p = config.p;
  params.n = config.n;
  params.sigma2 = config.sigma2;
  params.delta2 = config.delta2;

  params.seed = trial_seed(config, rho_index, trial_index, 1);
  const ReturnsBlock block1 = generate_block(params, beta1).first;
  params.seed = trial_seed(config, rho_index, trial_index, 2);
  const ReturnsBlock block2 = generate_block(params, beta2).first;

  return evaluate_two_block_trial(config, block1, block2, beta2, rho,
                                  trial_index);
}

RunOutput run_double_block(const ExperimentConfig& config) {
  validate_config(config);
  if (config.scenario != Scenario::double_block) {
    throw ConfigError("run_double_block: config scenario is " +
                      to_string(config.scenario));
  }
  RunOutput output;
  const std::size_t tags = config.estimators.size();
  for (Eigen::Index r = 0; r < static_cast<Eigen::Index>(config.rho_grid.size()); ++r) {
    std::vector<std::vector<TrialRecord>> recorded(tags);
    std::vector<std::size_t> degenerate(tags, 0);
    for (Eigen::Index trial = 0; trial < config.trials; ++trial) {
      const auto cells = run_double_trial(config, r, trial);
      for (std::size_t e = 0; e < tags; ++e) {
        if (cells[e].has_value()) {
          recorded[e].push_back(*cells[e]);
          output.trials.push_back(*cells[e]);
        } else {
          ++degenerate[e];
        }
      }
    }
    for (std::size_t e = 0; e < tags; ++e) {
      append_cell_summary(output.summary, config.estimators[e],
                          config.rho_grid[static_cast<std::size_t>(r)],
                          recorded[e], degenerate[e]);
    }
  }
  return output;
}

RunOutput run_single_block(const ExperimentConfig& config,
                           const BetaPanel* panel,
                           const std::vector<std::string>* sector_labels) {
  validate_config(config);
  if (config.scenario != Scenario::single &&
      config.scenario != Scenario::historical_single) {
    throw ConfigError("run_single_block: config scenario is " +
                      to_string(config.scenario));
  }
  BetaPanel synthetic;
  if (panel == nullptr) {
    if (config.scenario == Scenario::historical_single) {
      throw DataError("run_single_block: historical_single needs a beta panel");
    }
    FixtureParams fixture;
    fixture.p = config.p;
    fixture.columns = kPanelColumns;
    fixture.mean = config.beta_mean;
    fixture.sd = config.beta_sd;
    fixture.sector_sd = 0.7 * config.beta_sd;
    fixture.seed = stream_key(config.master_seed, Stream::fixture);
    synthetic = make_historical_fixture(fixture);
    panel = &synthetic;
  }
  if (panel->p() != config.p) {
    throw DataError("run_single_block: config p = " + std::to_string(config.p) +
                    " but the beta panel has " + std::to_string(panel->p()) +
                    " assets");
  }

  const std::vector<std::string>& labels =
      sector_labels != nullptr ? *sector_labels : panel->sectors;
  std::optional<AnchorSubspace> sector_span;
  for (const auto& tag : config.estimators) {
    if (tag == "sector") {
      if (labels.size() != static_cast<std::size_t>(panel->p())) {
        throw DataError("run_single_block: sector labels cover " +
                        std::to_string(labels.size()) + " assets, panel has " +
                        std::to_string(panel->p()));
      }
      sector_span = partition_subspace(partition_from_labels(labels));
      break;
    }
  }

  GenerationParams params;
  params.p = config.p;
  params.n = config.n;
  params.sigma2 = config.sigma2;
  params.delta2 = config.delta2;

  RunOutput output;
  PanelAccumulator accumulator(config);
  const std::size_t tags = config.estimators.size();
  for (Eigen::Index t = 0; t < panel->columns(); ++t) {
    const Eigen::VectorXd beta = panel->betas.col(t);
    std::vector<std::vector<TrialRecord>> recorded(tags);
    std::vector<std::size_t> degenerate(tags, 0);
    for (Eigen::Index trial = 0; trial < config.trials; ++trial) {
      params.seed = trial_seed(config, t, trial, 1);
      const ReturnsBlock block = generate_block(params, beta).first;
      const auto cells = evaluate_single_block_trial(
          config, block, beta, sector_span ? &*sector_span : nullptr,
          static_cast<double>(t + 1), trial);
      for (std::size_t e = 0; e < tags; ++e) {
        if (cells[e].has_value()) {
          recorded[e].push_back(*cells[e]);
          output.trials.push_back(*cells[e]);
        } else {
          ++degenerate[e];
        }
      }
    }
    accumulator.add_cell(t, recorded, degenerate, output.expected);
  }
  accumulator.finish(output.summary);
  return output;
}

RunOutput run_historical_double(const ExperimentConfig& config,
                                const BetaPanel& panel) {
  validate_config(config);
  if (config.scenario != Scenario::historical_double) {
    throw ConfigError("run_historical_double: config scenario is " +
                      to_string(config.scenario));
  }
  if (panel.columns() < kPanelColumns) {
    throw DataError("run_historical_double: beta panel has " +
                    std::to_string(panel.columns()) + " columns, needs at least " +
                    std::to_string(kPanelColumns));
  }
  if (panel.p() != config.p) {
    throw DataError("run_historical_double: config p = " + std::to_string(config.p) +
                    " but the beta panel has " + std::to_string(panel.p()) +
                    " assets");
  }

  GenerationParams params;
  params.p = config.p;
  params.n = config.n;
  params.sigma2 = config.sigma2;
  params.delta2 = config.delta2;

  RunOutput output;
  PanelAccumulator accumulator(config);
  const std::size_t tags = config.estimators.size();
  const Eigen::Index pairs = kPanelColumns / 2;
  for (Eigen::Index t = 0; t < pairs; ++t) {
    const Eigen::VectorXd beta_previous = panel.betas.col(t);
    const Eigen::VectorXd beta_current = panel.betas.col(t + pairs);
    std::vector<std::vector<TrialRecord>> recorded(tags);
    std::vector<std::size_t> degenerate(tags, 0);
    for (Eigen::Index trial = 0; trial < config.trials; ++trial) {
      params.seed = trial_seed(config, t, trial, 1);
      const ReturnsBlock block1 = generate_block(params, beta_previous).first;
      params.seed = trial_seed(config, t, trial, 2);
      const ReturnsBlock block2 = generate_block(params, beta_current).first;
      const auto cells = evaluate_two_block_trial(config, block1, block2,
                                                  beta_current,
                                                  static_cast<double>(t + 1), trial);
      for (std::size_t e = 0; e < tags; ++e) {
        if (cells[e].has_value()) {
          recorded[e].push_back(*cells[e]);
          output.trials.push_back(*cells[e]);
        } else {
          ++degenerate[e];
        }
      }
    }
    accumulator.add_cell(t, recorded, degenerate, output.expected);
  }
  accumulator.finish(output.summary);
  return output;
}

}  // namespace mapshrink
