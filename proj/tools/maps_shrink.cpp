// maps-shrink: Monte Carlo experiments and one-shot estimation for anchored
// shrinkage of the leading covariance eigenvector.
//
// Subcommands:
//   simulate-double    correlated two-block simulation over a rho grid
//   simulate-single    one-block simulation over a panel of beta vectors
//   historical-double  two-block simulation over historical beta pairs
//   estimate           run one estimator on a returns CSV
//
// stdout carries data, stderr carries diagnostics. Exit codes: 0 success,
// 2 configuration or usage problem, 3 data problem.

#include <CLI11.hpp>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "mapshrink/errors.hpp"
#include "mapshrink/estimate.hpp"
#include "mapshrink/experiments/driver.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

struct SimulateOptions {
  std::string config_path;
  std::string betas_path;
  std::string sectors_path;
  std::string out_dir = ".";
  std::string psi_source;
  std::optional<std::uint64_t> seed;
};

mapshrink::ExperimentConfig load_config(const SimulateOptions& options,
                                        mapshrink::Scenario expected) {
  mapshrink::ExperimentConfig config =
      mapshrink::parse_config_file(options.config_path);
  if (config.scenario != expected) {
    throw mapshrink::ConfigError(
        "config scenario is " + mapshrink::to_string(config.scenario) +
        " but this subcommand runs " + mapshrink::to_string(expected));
  }
  if (options.seed.has_value()) {
    config.master_seed = *options.seed;
  }
  if (!options.psi_source.empty()) {
    if (options.psi_source == "current") {
      config.psi_source = mapshrink::PsiSource::current;
    } else if (options.psi_source == "double") {
      config.psi_source = mapshrink::PsiSource::double_block;
    } else {
      throw mapshrink::ConfigError("--psi-source must be 'current' or 'double'");
    }
  }
  mapshrink::validate_config(config);
  return config;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw mapshrink::DataError("cannot write '" + path.string() + "'");
  }
  out << contents;
}

void write_run_output(const mapshrink::RunOutput& output,
                      const std::string& out_dir) {
  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  {
    std::ostringstream trials;
    mapshrink::write_trials_csv(trials, output.trials);
    write_file(dir / "trials.csv", trials.str());
  }
  {
    std::ostringstream summary;
    mapshrink::write_summary_csv(summary, output.summary);
    write_file(dir / "summary.csv", summary.str());
  }
  if (!output.expected.empty()) {
    std::ostringstream expected;
    mapshrink::write_expected_csv(expected, output.expected);
    write_file(dir / "expected.csv", expected.str());
  }
  write_file(dir / "plot.gnuplot", mapshrink::render_plot_script(output.summary));
  std::cout << "wrote " << (dir / "trials.csv").string() << " ("
            << output.trials.size() << " rows)\n";
  std::cout << "wrote " << (dir / "summary.csv").string() << " ("
            << output.summary.size() << " rows)\n";
  if (!output.expected.empty()) {
    std::cout << "wrote " << (dir / "expected.csv").string() << " ("
              << output.expected.size() << " rows)\n";
  }
  std::cout << "wrote " << (dir / "plot.gnuplot").string() << "\n";
}

int run_simulate_double(const SimulateOptions& options) {
  const auto config = load_config(options, mapshrink::Scenario::double_block);
  write_run_output(mapshrink::run_double_block(config), options.out_dir);
  return kExitOk;
}

int run_simulate_single(const SimulateOptions& options) {
  mapshrink::ExperimentConfig config = mapshrink::parse_config_file(options.config_path);
  if (config.scenario != mapshrink::Scenario::single &&
      config.scenario != mapshrink::Scenario::historical_single) {
    throw mapshrink::ConfigError(
        "config scenario is " + mapshrink::to_string(config.scenario) +
        " but this subcommand runs single or historical_single");
  }
  if (options.seed.has_value()) {
    config.master_seed = *options.seed;
  }
  mapshrink::validate_config(config);

  std::optional<mapshrink::BetaPanel> panel;
  if (!options.betas_path.empty()) {
    panel = mapshrink::read_beta_panel(options.betas_path);
  }
  std::optional<std::vector<std::string>> sectors;
  if (!options.sectors_path.empty()) {
    if (!panel.has_value()) {
      throw mapshrink::ConfigError("--sectors needs --betas");
    }
    sectors = mapshrink::read_sector_file(options.sectors_path, panel->asset_ids);
  }
  write_run_output(
      mapshrink::run_single_block(config, panel ? &*panel : nullptr,
                                  sectors ? &*sectors : nullptr),
      options.out_dir);
  return kExitOk;
}

int run_historical_double(const SimulateOptions& options) {
  const auto config = load_config(options, mapshrink::Scenario::historical_double);
  const mapshrink::BetaPanel panel = mapshrink::read_beta_panel(options.betas_path);
  write_run_output(mapshrink::run_historical_double(config, panel),
                   options.out_dir);
  return kExitOk;
}

int run_estimate_command(const mapshrink::EstimateRequest& request) {
  const Eigen::MatrixXd returns =
      mapshrink::read_returns_csv(request.returns_path, request.has_header);
  const mapshrink::FactorEstimate factor =
      mapshrink::leading_factor(mapshrink::ReturnsBlock{returns});
  const mapshrink::ScalarEstimates scalars =
      mapshrink::scalar_estimates(factor, returns.cols(), returns.rows());
  std::cout << mapshrink::render_spectrum(returns.rows(), returns.cols(),
                                          factor, scalars);

  const mapshrink::EstimatorResult result =
      mapshrink::dispatch_estimator(request, factor, returns.rows());
  std::cout << mapshrink::render_shrinkage(result);

  const mapshrink::CovarianceModel estimated(result.h_hat, scalars.spike_scale,
                                             scalars.delta2);
  const mapshrink::PortfolioWeights weights = mapshrink::min_var_weights(estimated);

  const std::filesystem::path dir(request.out_dir);
  std::filesystem::create_directories(dir);
  {
    std::ostringstream h_out;
    mapshrink::write_vector(h_out, result.h_hat);
    write_file(dir / "h_hat.csv", h_out.str());
  }
  {
    std::ostringstream w_out;
    mapshrink::write_vector(w_out, weights.w);
    write_file(dir / "weights.csv", w_out.str());
  }
  std::cout << "wrote " << (dir / "h_hat.csv").string() << "\n"
            << "wrote " << (dir / "weights.csv").string() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anchored shrinkage estimators of the leading covariance "
               "eigenvector, with minimum-variance portfolio diagnostics"};
  app.require_subcommand(1);

  SimulateOptions double_options;
  auto* simulate_double = app.add_subcommand(
      "simulate-double", "Correlated two-block Monte Carlo over a rho grid");
  simulate_double->add_option("--config", double_options.config_path, "experiment config file")
      ->required();
  simulate_double->add_option("--out", double_options.out_dir, "output directory");
  simulate_double->add_option("--psi-source", double_options.psi_source,
                              "psi for dyn_maps: current or double");
  simulate_double->add_option("--seed", double_options.seed, "master seed override");

  SimulateOptions single_options;
  auto* simulate_single = app.add_subcommand(
      "simulate-single", "One-block Monte Carlo over a panel of beta vectors");
  simulate_single->add_option("--config", single_options.config_path, "experiment config file")
      ->required();
  simulate_single->add_option("--betas", single_options.betas_path,
                              "beta panel CSV (asset_id,sector,b1,...)");
  simulate_single->add_option("--sectors", single_options.sectors_path,
                              "sector override CSV (asset_id,sector)");
  simulate_single->add_option("--out", single_options.out_dir, "output directory");
  simulate_single->add_option("--seed", single_options.seed, "master seed override");

  SimulateOptions historical_options;
  auto* historical_double = app.add_subcommand(
      "historical-double", "Two-block Monte Carlo over historical beta pairs");
  historical_double->add_option("--config", historical_options.config_path,
                                "experiment config file")
      ->required();
  historical_double->add_option("--betas", historical_options.betas_path,
                                "beta panel CSV with at least 24 columns")
      ->required();
  historical_double->add_option("--out", historical_options.out_dir, "output directory");
  historical_double->add_option("--seed", historical_options.seed, "master seed override");

  mapshrink::EstimateRequest estimate_request;
  auto* estimate = app.add_subcommand(
      "estimate", "Run one estimator on a returns CSV (assets in rows)");
  estimate->add_option("--returns", estimate_request.returns_path, "returns CSV, p rows x n columns")
      ->required();
  estimate->add_option("--estimator", estimate_request.estimator, "pca, gps, or maps");
  estimate->add_option("--anchors", estimate_request.anchors,
                       "anchor spec: q, partition:FILE, haar:K:SEED, prev:FILE, joined by '+'");
  estimate->add_flag("--header", estimate_request.has_header, "returns CSV has a header row");
  estimate->add_option("--out", estimate_request.out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (simulate_double->parsed()) {
      return run_simulate_double(double_options);
    }
    if (simulate_single->parsed()) {
      return run_simulate_single(single_options);
    }
    if (historical_double->parsed()) {
      return run_historical_double(historical_options);
    }
    if (estimate->parsed()) {
      return run_estimate_command(estimate_request);
    }
  } catch (const mapshrink::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const mapshrink::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitConfig;
}
