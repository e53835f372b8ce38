#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mapshrink/experiments/summary.hpp"

namespace mapshrink {

/// One evaluated (trial, estimator) cell. For the double scenario rho is the
/// target beta correlation of the cell; single and historical scenarios reuse
/// the column for the 1-based beta (or block-pair) index so every scenario
/// emits the same trials.csv schema.
struct TrialRecord {
  std::int64_t trial_index = 0;
  double rho = 0.0;
  std::string estimator;
  double l2_error = 0.0;
  double tracking_p = 0.0;
  double opt_bias_p = 0.0;
  double forecast_ratio = 0.0;
};

/// Per-beta trial means of the single and historical scenarios (expected.csv).
struct ExpectedRow {
  std::string estimator;
  std::int64_t beta_index = 0;
  double l2_sq_mean = 0.0;
  double tracking_p_mean = 0.0;
  double opt_bias_p_mean = 0.0;
  double forecast_ratio_mean = 0.0;
  std::size_t n = 0;
  std::size_t n_degenerate = 0;
};

/// A panel of historical-style beta vectors: one row per asset with a sector
/// label, one column per period.
struct BetaPanel {
  std::vector<std::string> asset_ids;
  std::vector<std::string> sectors;
  Eigen::MatrixXd betas;  // p x T

  Eigen::Index p() const { return betas.rows(); }
  Eigen::Index columns() const { return betas.cols(); }
};

/// Shortest round-trip decimal rendering of a double (std::to_chars), so
/// emitted CSVs are byte-stable and parse back to the identical value.
std::string format_double(double value);

/// trials.csv, fixed column order:
/// trial_index,rho,estimator,l2_error,tracking_p,opt_bias_p,forecast_ratio
void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& records);
std::vector<TrialRecord> read_trials_csv(std::istream& in);

/// summary.csv, fixed column order:
/// estimator,rho,metric,min,q1,median,q3,max,mean,n,n_degenerate
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);
std::vector<SummaryRow> read_summary_csv(std::istream& in);

/// expected.csv, fixed column order: estimator,beta_index,l2_sq_mean,
/// tracking_p_mean,opt_bias_p_mean,forecast_ratio_mean,n,n_degenerate
void write_expected_csv(std::ostream& out, const std::vector<ExpectedRow>& rows);

/// Self-contained gnuplot script of the summary rows: per metric one chart of
/// the medians with interquartile bars, one series per estimator, plotted
/// against rho (or against the estimator itself when every row sits at a
/// single rho, as in the panel scenarios). The data is inlined so the script
/// renders without summary.csv next to it.
std::string render_plot_script(const std::vector<SummaryRow>& summary);

/// Beta panel CSV with header asset_id,sector,b1,...,bT. Parse failures
/// throw DataError naming the file, row, and column.
BetaPanel read_beta_panel(const std::string& path);
void write_beta_panel(std::ostream& out, const BetaPanel& panel);

/// Sector file with header asset_id,sector; returns labels aligned with the
/// panel's asset order. Missing or unknown asset ids throw DataError.
std::vector<std::string> read_sector_file(const std::string& path,
                                          const std::vector<std::string>& asset_ids);

/// Plain numeric returns matrix, one CSV row per asset. has_header skips the
/// first line. Ragged rows or non-numeric fields throw DataError with the
/// row and column.
Eigen::MatrixXd read_returns_csv(const std::string& path, bool has_header);

/// One value per line, used for emitted direction and weight vectors.
void write_vector(std::ostream& out, const Eigen::VectorXd& values);

}  // namespace mapshrink
