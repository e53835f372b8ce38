#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "mapshrink/errors.hpp"
#include "mapshrink/experiments/config.hpp"
#include "mapshrink/experiments/driver.hpp"
#include "mapshrink/experiments/fixture.hpp"
#include "mapshrink/experiments/io.hpp"

using mapshrink::BetaPanel;
using mapshrink::ExperimentConfig;
using mapshrink::FixtureParams;
using mapshrink::RunOutput;
using mapshrink::Scenario;
using mapshrink::SummaryRow;
using mapshrink::TrialRecord;

namespace {

ExperimentConfig small_double_config() {
  ExperimentConfig config;
  config.scenario = Scenario::double_block;
  config.p = 60;
  config.n = 8;
  config.rho_grid = {0.2, 1.0};
  config.trials = 3;
  config.estimators = {"pca1", "pca2", "gps1", "gps2", "dyn_maps", "beta_ordered"};
  config.master_seed = 7;
  return config;
}

std::string trials_text(const RunOutput& output) {
  std::ostringstream out;
  mapshrink::write_trials_csv(out, output.trials);
  return out.str();
}

double summary_stat(const std::vector<SummaryRow>& rows, const std::string& tag,
                    double rho, const std::string& metric) {
  for (const auto& row : rows) {
    if (row.estimator == tag && row.rho == rho && row.metric == metric) {
      return row.stats.median;
    }
  }
  throw std::runtime_error("summary row not found: " + tag + "/" + metric);
}

}  // namespace

TEST_CASE("double-block runs are deterministic and order independent") {
  const ExperimentConfig config = small_double_config();
  const RunOutput first = mapshrink::run_double_block(config);
  const RunOutput second = mapshrink::run_double_block(config);
  CHECK(trials_text(first) == trials_text(second));

  std::ostringstream summary_first;
  std::ostringstream summary_second;
  mapshrink::write_summary_csv(summary_first, first.summary);
  mapshrink::write_summary_csv(summary_second, second.summary);
  CHECK(summary_first.str() == summary_second.str());
  CHECK(first.expected.empty());

  // Trials are pure functions of (master_seed, cell, trial): sweeping the
  // grid backwards reproduces the forward sweep cell for cell.
  std::vector<std::vector<std::optional<TrialRecord>>> forward;
  for (Eigen::Index r = 0; r < 2; ++r) {
    for (Eigen::Index t = 0; t < config.trials; ++t) {
      forward.push_back(mapshrink::run_double_trial(config, r, t));
    }
  }
  std::size_t cell = forward.size();
  for (Eigen::Index r = 1; r >= 0; --r) {
    for (Eigen::Index t = config.trials - 1; t >= 0; --t) {
      const auto replay = mapshrink::run_double_trial(config, r, t);
      const auto& reference = forward[--cell];
      REQUIRE(replay.size() == reference.size());
      for (std::size_t e = 0; e < replay.size(); ++e) {
        REQUIRE(replay[e].has_value() == reference[e].has_value());
        if (replay[e].has_value()) {
          CHECK(replay[e]->l2_error == reference[e]->l2_error);
          CHECK(replay[e]->tracking_p == reference[e]->tracking_p);
          CHECK(replay[e]->opt_bias_p == reference[e]->opt_bias_p);
          CHECK(replay[e]->forecast_ratio == reference[e]->forecast_ratio);
        }
      }
    }
  }

  // A different master seed changes the draws.
  ExperimentConfig reseeded = config;
  reseeded.master_seed = 8;
  CHECK(trials_text(mapshrink::run_double_block(reseeded)) != trials_text(first));
}

TEST_CASE("double-block records are finite with full cell accounting") {
  const ExperimentConfig config = small_double_config();
  const RunOutput output = mapshrink::run_double_block(config);

  // 2 rho cells x 3 trials x 6 estimators, nothing degenerate at this size.
  CHECK(output.trials.size() == 36);
  for (const TrialRecord& record : output.trials) {
    CHECK(std::isfinite(record.l2_error));
    CHECK(record.l2_error >= 0.0);
    CHECK(record.l2_error <= 2.0);
    CHECK(std::isfinite(record.tracking_p));
    CHECK(record.tracking_p >= 0.0);
    CHECK(std::isfinite(record.opt_bias_p));
    CHECK(record.opt_bias_p >= 0.0);
    CHECK(std::isfinite(record.forecast_ratio));
    CHECK(record.forecast_ratio > 0.0);
  }

  // 2 cells x 6 estimators x 4 metrics.
  CHECK(output.summary.size() == 48);
  for (const SummaryRow& row : output.summary) {
    CHECK(row.n + row.n_degenerate == static_cast<std::size_t>(config.trials));
    CHECK(row.stats.min <= row.stats.q1);
    CHECK(row.stats.q1 <= row.stats.median);
    CHECK(row.stats.median <= row.stats.q3);
    CHECK(row.stats.q3 <= row.stats.max);
  }

  ExperimentConfig wrong_scenario = config;
  wrong_scenario.scenario = Scenario::single;
  wrong_scenario.estimators = {"pca", "gps"};
  CHECK_THROWS_AS(mapshrink::run_double_block(wrong_scenario),
                  mapshrink::ConfigError);
}

TEST_CASE("degenerate estimator cells are recorded as missing, not retried") {
  // Near-noiseless rank-one blocks put psi within 1e-12 of 1, so every
  // shrinkage estimator throws DegenerateShrinkageError, while the bulk
  // level stays strictly positive (the true residual mass, about
  // delta2 * p / n, dwarfs eigensolve rounding) so the raw eigenvector is
  // still scored. rho = 1 keeps the concatenated block rank one as well.
  ExperimentConfig config = small_double_config();
  config.p = 20;
  config.n = 4;
  config.delta2 = 1e-13;
  config.trials = 2;
  config.rho_grid = {1.0};

  const auto cells = mapshrink::run_double_trial(config, 0, 0);
  REQUIRE(cells.size() == 6);
  CHECK(cells[0].has_value());       // pca1
  CHECK(cells[1].has_value());       // pca2
  CHECK_FALSE(cells[2].has_value()); // gps1
  CHECK_FALSE(cells[3].has_value()); // gps2
  CHECK_FALSE(cells[4].has_value()); // dyn_maps
  CHECK_FALSE(cells[5].has_value()); // beta_ordered

  const RunOutput output = mapshrink::run_double_block(config);
  for (const TrialRecord& record : output.trials) {
    CHECK((record.estimator == "pca1" || record.estimator == "pca2"));
  }
  CHECK(output.trials.size() == 4);

  // All-degenerate cells produce no box statistics, so only the pca rows
  // appear, fully recorded.
  CHECK(output.summary.size() == 8);
  for (const SummaryRow& row : output.summary) {
    CHECK((row.estimator == "pca1" || row.estimator == "pca2"));
    CHECK(row.n == 2);
    CHECK(row.n_degenerate == 0);
  }
}

TEST_CASE("perfect beta correlation favours the concatenated block") {
  ExperimentConfig config;
  config.scenario = Scenario::double_block;
  config.p = 250;
  config.n = 12;
  config.rho_grid = {1.0};
  config.trials = 60;
  config.estimators = {"gps1", "gps2", "dyn_maps"};
  config.master_seed = 5;

  const RunOutput output = mapshrink::run_double_block(config);
  const double gps1 = summary_stat(output.summary, "gps1", 1.0, "l2_error");
  const double gps2 = summary_stat(output.summary, "gps2", 1.0, "l2_error");
  CHECK(gps2 <= gps1);

  // With identical betas the dynamic anchor adds nothing over the pooled GPS:
  // their mean errors are statistically indistinguishable.
  std::map<std::string, std::vector<double>> errors;
  for (const TrialRecord& record : output.trials) {
    errors[record.estimator].push_back(record.l2_error);
  }
  const auto mean_and_se = [](const std::vector<double>& values) {
    double mean = 0.0;
    for (const double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double variance = 0.0;
    for (const double v : values) variance += (v - mean) * (v - mean);
    variance /= static_cast<double>(values.size() - 1);
    return std::pair<double, double>(
        mean, std::sqrt(variance / static_cast<double>(values.size())));
  };
  const auto [dyn_mean, dyn_se] = mean_and_se(errors["dyn_maps"]);
  const auto [gps2_mean, gps2_se] = mean_and_se(errors["gps2"]);
  CHECK(dyn_mean - 2.0 * dyn_se <= gps2_mean + 2.0 * gps2_se);
  CHECK(gps2_mean - 2.0 * gps2_se <= dyn_mean + 2.0 * dyn_se);
}

TEST_CASE("single-block panels rank the anchored estimators") {
  ExperimentConfig config;
  config.scenario = Scenario::single;
  config.p = 120;
  config.n = 12;
  config.trials = 30;
  config.estimators = {"pca", "gps", "sector", "beta_ordered"};
  config.master_seed = 11;

  const RunOutput output = mapshrink::run_single_block(config, nullptr, nullptr);

  // 24 synthetic beta columns, every (beta, estimator) pair reported.
  CHECK(output.expected.size() == 24 * 4);
  for (const auto& row : output.expected) {
    CHECK(row.n == 30);
    CHECK(row.n_degenerate == 0);
    CHECK(row.beta_index >= 1);
    CHECK(row.beta_index <= 24);
  }
  CHECK(output.trials.size() == 24 * 4 * 30);
  for (const TrialRecord& record : output.trials) {
    CHECK(record.rho >= 1.0);
    CHECK(record.rho <= 24.0);
  }

  // Summary holds per-estimator box stats of the 24 per-beta means.
  CHECK(output.summary.size() == 4 * 4);
  for (const SummaryRow& row : output.summary) {
    CHECK(row.rho == 0.0);
    CHECK(row.n == 24);
  }

  const double pca = summary_stat(output.summary, "pca", 0.0, "l2_sq_mean");
  const double gps = summary_stat(output.summary, "gps", 0.0, "l2_sq_mean");
  const double sector = summary_stat(output.summary, "sector", 0.0, "l2_sq_mean");
  const double ordered =
      summary_stat(output.summary, "beta_ordered", 0.0, "l2_sq_mean");
  CHECK(gps < pca);
  CHECK(sector < gps);
  CHECK(ordered < sector);

  // The beta-ordered anchor also wins on the portfolio metrics.
  CHECK(summary_stat(output.summary, "beta_ordered", 0.0, "tracking_p_mean") <
        summary_stat(output.summary, "gps", 0.0, "tracking_p_mean"));
  CHECK(summary_stat(output.summary, "beta_ordered", 0.0, "tracking_p_mean") <
        summary_stat(output.summary, "sector", 0.0, "tracking_p_mean"));
  CHECK(summary_stat(output.summary, "beta_ordered", 0.0, "opt_bias_p_mean") <
        summary_stat(output.summary, "pca", 0.0, "opt_bias_p_mean"));

  // Determinism end to end.
  const RunOutput again = mapshrink::run_single_block(config, nullptr, nullptr);
  CHECK(trials_text(output) == trials_text(again));

  ExperimentConfig historical = config;
  historical.scenario = Scenario::historical_single;
  CHECK_THROWS_AS(mapshrink::run_single_block(historical, nullptr, nullptr),
                  mapshrink::DataError);
}

TEST_CASE("historical double runs pair the panel columns") {
  FixtureParams params;
  params.p = 80;
  params.columns = 24;
  params.sectors = 7;
  params.seed = 21;
  const BetaPanel panel = mapshrink::make_historical_fixture(params);

  ExperimentConfig config;
  config.scenario = Scenario::historical_double;
  config.p = 80;
  config.n = 8;
  config.trials = 4;
  config.estimators = {"pca1", "pca2", "gps1", "gps2", "dyn_maps"};
  config.master_seed = 13;

  const RunOutput output = mapshrink::run_historical_double(config, panel);
  CHECK(output.expected.size() == 12 * 5);
  std::map<std::string, int> rows_per_tag;
  for (const auto& row : output.expected) {
    rows_per_tag[row.estimator] += 1;
    CHECK(row.beta_index >= 1);
    CHECK(row.beta_index <= 12);
    CHECK(row.n == 4);
  }
  for (const auto& [tag, count] : rows_per_tag) {
    CHECK(count == 12);
  }

  const RunOutput again = mapshrink::run_historical_double(config, panel);
  CHECK(trials_text(output) == trials_text(again));

  ExperimentConfig mismatched = config;
  mismatched.p = 81;
  CHECK_THROWS_AS(mapshrink::run_historical_double(mismatched, panel),
                  mapshrink::DataError);

  FixtureParams short_params = params;
  short_params.columns = 10;
  const BetaPanel short_panel = mapshrink::make_historical_fixture(short_params);
  CHECK_THROWS_AS(mapshrink::run_historical_double(config, short_panel),
                  mapshrink::DataError);
}
