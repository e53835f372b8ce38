#include "mapshrink/experiments/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>
#include <unordered_map>

#include "mapshrink/errors.hpp"

namespace mapshrink {

namespace {

std::string trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r");
  if (begin == std::string::npos) {
    return "";
  }
  const auto end = text.find_last_not_of(" \t\r");
  return text.substr(begin, end - begin + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) {
    fields.push_back(trim(field));
  }
  if (!line.empty() && line.back() == ',') {
    fields.emplace_back();
  }
  return fields;
}

double parse_field_double(const std::string& field, const std::string& where) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto result = std::from_chars(begin, end, value);
  if (result.ec != std::errc() || result.ptr != end) {
    throw DataError(where + ": '" + field + "' is not a number");
  }
  return value;
}

std::int64_t parse_field_integer(const std::string& field, const std::string& where) {
  std::int64_t value = 0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto result = std::from_chars(begin, end, value);
  if (result.ec != std::errc() || result.ptr != end) {
    throw DataError(where + ": '" + field + "' is not an integer");
  }
  return value;
}

std::size_t parse_field_size(const std::string& field, const std::string& where) {
  const std::int64_t value = parse_field_integer(field, where);
  if (value < 0) {
    throw DataError(where + ": expected a nonnegative count, got " + field);
  }
  return static_cast<std::size_t>(value);
}

void expect_fields(const std::vector<std::string>& fields, std::size_t expected,
                   const std::string& where) {
  if (fields.size() != expected) {
    throw DataError(where + ": expected " + std::to_string(expected) +
                    " fields, got " + std::to_string(fields.size()));
  }
}

constexpr const char* kTrialsHeader =
    "trial_index,rho,estimator,l2_error,tracking_p,opt_bias_p,forecast_ratio";
constexpr const char* kSummaryHeader =
    "estimator,rho,metric,min,q1,median,q3,max,mean,n,n_degenerate";
constexpr const char* kExpectedHeader =
    "estimator,beta_index,l2_sq_mean,tracking_p_mean,opt_bias_p_mean,"
    "forecast_ratio_mean,n,n_degenerate";

}  // namespace

std::string format_double(double value) {
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
  out << kTrialsHeader << '\n';
  for (const auto& record : records) {
    out << record.trial_index << ',' << format_double(record.rho) << ','
        << record.estimator << ',' << format_double(record.l2_error) << ','
        << format_double(record.tracking_p) << ','
        << format_double(record.opt_bias_p) << ','
        << format_double(record.forecast_ratio) << '\n';
  }
}

std::vector<TrialRecord> read_trials_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != kTrialsHeader) {
    throw DataError("trials.csv: missing or wrong header (expected '" +
                    std::string(kTrialsHeader) + "')");
  }
  std::vector<TrialRecord> records;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) {
      continue;
    }
    const auto fields = split_csv_line(line);
    const std::string where = "trials.csv row " + std::to_string(row);
    expect_fields(fields, 7, where);
    TrialRecord record;
    record.trial_index = parse_field_integer(fields[0], where + " col 1");
    record.rho = parse_field_double(fields[1], where + " col 2");
    record.estimator = fields[2];
    record.l2_error = parse_field_double(fields[3], where + " col 4");
    record.tracking_p = parse_field_double(fields[4], where + " col 5");
    record.opt_bias_p = parse_field_double(fields[5], where + " col 6");
    record.forecast_ratio = parse_field_double(fields[6], where + " col 7");
    records.push_back(std::move(record));
  }
  return records;
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << kSummaryHeader << '\n';
  for (const auto& row : rows) {
    out << row.estimator << ',' << format_double(row.rho) << ',' << row.metric
        << ',' << format_double(row.stats.min) << ','
        << format_double(row.stats.q1) << ',' << format_double(row.stats.median)
        << ',' << format_double(row.stats.q3) << ','
        << format_double(row.stats.max) << ',' << format_double(row.stats.mean)
        << ',' << row.n << ',' << row.n_degenerate << '\n';
  }
}

std::vector<SummaryRow> read_summary_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != kSummaryHeader) {
    throw DataError("summary.csv: missing or wrong header (expected '" +
                    std::string(kSummaryHeader) + "')");
  }
  std::vector<SummaryRow> rows;
  std::size_t row_number = 1;
  while (std::getline(in, line)) {
    ++row_number;
    if (trim(line).empty()) {
      continue;
    }
    const auto fields = split_csv_line(line);
    const std::string where = "summary.csv row " + std::to_string(row_number);
    expect_fields(fields, 11, where);
    SummaryRow row;
    row.estimator = fields[0];
    row.rho = parse_field_double(fields[1], where + " col 2");
    row.metric = fields[2];
    row.stats.min = parse_field_double(fields[3], where + " col 4");
    row.stats.q1 = parse_field_double(fields[4], where + " col 5");
    row.stats.median = parse_field_double(fields[5], where + " col 6");
    row.stats.q3 = parse_field_double(fields[6], where + " col 7");
    row.stats.max = parse_field_double(fields[7], where + " col 8");
    row.stats.mean = parse_field_double(fields[8], where + " col 9");
    row.n = parse_field_size(fields[9], where + " col 10");
    row.n_degenerate = parse_field_size(fields[10], where + " col 11");
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_expected_csv(std::ostream& out, const std::vector<ExpectedRow>& rows) {
  out << kExpectedHeader << '\n';
  for (const auto& row : rows) {
    out << row.estimator << ',' << row.beta_index << ','
        << format_double(row.l2_sq_mean) << ','
        << format_double(row.tracking_p_mean) << ','
        << format_double(row.opt_bias_p_mean) << ','
        << format_double(row.forecast_ratio_mean) << ',' << row.n << ','
        << row.n_degenerate << '\n';
  }
}

std::string render_plot_script(const std::vector<SummaryRow>& summary) {
  // Preserve first-appearance order of metrics and estimators so the script
  // is as deterministic as the CSVs.
  std::vector<std::string> metrics;
  std::vector<std::string> estimators;
  std::vector<double> rho_values;
  for (const auto& row : summary) {
    if (std::find(metrics.begin(), metrics.end(), row.metric) == metrics.end()) {
      metrics.push_back(row.metric);
    }
    if (std::find(estimators.begin(), estimators.end(), row.estimator) ==
        estimators.end()) {
      estimators.push_back(row.estimator);
    }
    if (std::find(rho_values.begin(), rho_values.end(), row.rho) ==
        rho_values.end()) {
      rho_values.push_back(row.rho);
    }
  }
  const bool against_rho = rho_values.size() > 1;

  std::ostringstream out;
  out << "# Median metrics with interquartile bars, one series per estimator.\n"
      << "# Generated alongside summary.csv; render with: gnuplot plot.gnuplot\n"
      << "set terminal svg size 840,600\n"
      << "set key outside right\n"
      << "set style data yerrorlines\n";
  if (against_rho) {
    out << "set xlabel 'target beta correlation'\n";
  } else {
    out << "set xlabel 'estimator'\n"
        << "set xtics rotate by -30\n"
        << "set offsets 0.5, 0.5, 0, 0\n";
  }
  for (const auto& metric : metrics) {
    out << "\nset output '" << metric << ".svg'\n"
        << "set ylabel '" << metric << " (median, q1..q3)'\n";
    if (against_rho) {
      for (const auto& tag : estimators) {
        out << "$" << metric << "_" << tag << " << EOD\n";
        for (const auto& row : summary) {
          if (row.metric == metric && row.estimator == tag) {
            out << format_double(row.rho) << ' ' << format_double(row.stats.median)
                << ' ' << format_double(row.stats.q1) << ' '
                << format_double(row.stats.q3) << '\n';
          }
        }
        out << "EOD\n";
      }
      out << "plot";
      for (std::size_t e = 0; e < estimators.size(); ++e) {
        out << (e == 0 ? " " : ", \\\n     ") << "$" << metric << "_"
            << estimators[e] << " using 1:2:3:4 title '" << estimators[e] << "'";
      }
      out << "\n";
    } else {
      out << "$" << metric << " << EOD\n";
      std::size_t position = 0;
      for (const auto& tag : estimators) {
        for (const auto& row : summary) {
          if (row.metric == metric && row.estimator == tag) {
            out << position << ' ' << format_double(row.stats.median) << ' '
                << format_double(row.stats.q1) << ' '
                << format_double(row.stats.q3) << ' ' << tag << '\n';
            ++position;
          }
        }
      }
      out << "EOD\n"
          << "plot $" << metric << " using 1:2:3:4:xticlabels(5) notitle\n";
    }
  }
  return out.str();
}

BetaPanel read_beta_panel(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("beta panel: cannot open '" + path + "'");
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw DataError("beta panel '" + path +
                    "' is empty; expected header asset_id,sector,b1,...,bT "
                    "followed by one row per asset");
  }
  const auto header = split_csv_line(line);
  if (header.size() < 3 || header[0] != "asset_id" || header[1] != "sector") {
    throw DataError("beta panel '" + path +
                    "': header must start with asset_id,sector followed by "
                    "at least one beta column");
  }
  for (std::size_t j = 2; j < header.size(); ++j) {
    const std::string expected = "b" + std::to_string(j - 1);
    if (header[j] != expected) {
      throw DataError("beta panel '" + path + "': header col " +
                      std::to_string(j + 1) + " is '" + header[j] +
                      "', expected '" + expected + "'");
    }
  }
  const std::size_t columns = header.size() - 2;

  BetaPanel panel;
  std::vector<std::vector<double>> rows;
  std::size_t row_number = 1;
  while (std::getline(in, line)) {
    ++row_number;
    if (trim(line).empty()) {
      continue;
    }
    const auto fields = split_csv_line(line);
    const std::string where = "beta panel '" + path + "' row " + std::to_string(row_number);
    expect_fields(fields, columns + 2, where);
    panel.asset_ids.push_back(fields[0]);
    panel.sectors.push_back(fields[1]);
    std::vector<double> values(columns);
    for (std::size_t j = 0; j < columns; ++j) {
      values[j] = parse_field_double(fields[j + 2],
                                     where + " col " + std::to_string(j + 3));
    }
    rows.push_back(std::move(values));
  }
  if (rows.size() < 2) {
    throw DataError("beta panel '" + path + "': need at least 2 asset rows, got " +
                    std::to_string(rows.size()));
  }
  panel.betas.resize(static_cast<Eigen::Index>(rows.size()),
                     static_cast<Eigen::Index>(columns));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < columns; ++j) {
      panel.betas(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i][j];
    }
  }
  return panel;
}

void write_beta_panel(std::ostream& out, const BetaPanel& panel) {
  out << "asset_id,sector";
  for (Eigen::Index j = 0; j < panel.columns(); ++j) {
    out << ",b" << (j + 1);
  }
  out << '\n';
  for (Eigen::Index i = 0; i < panel.p(); ++i) {
    out << panel.asset_ids[static_cast<std::size_t>(i)] << ','
        << panel.sectors[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < panel.columns(); ++j) {
      out << ',' << format_double(panel.betas(i, j));
    }
    out << '\n';
  }
}

std::vector<std::string> read_sector_file(const std::string& path,
                                          const std::vector<std::string>& asset_ids) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("sector file: cannot open '" + path + "'");
  }
  std::string line;
  if (!std::getline(in, line) || split_csv_line(line) != std::vector<std::string>{"asset_id", "sector"}) {
    throw DataError("sector file '" + path + "': header must be asset_id,sector");
  }
  std::unordered_map<std::string, std::string> label_of;
  std::size_t row_number = 1;
  while (std::getline(in, line)) {
    ++row_number;
    if (trim(line).empty()) {
      continue;
    }
    const auto fields = split_csv_line(line);
    expect_fields(fields, 2, "sector file '" + path + "' row " + std::to_string(row_number));
    label_of[fields[0]] = fields[1];
  }
  std::vector<std::string> labels;
  labels.reserve(asset_ids.size());
  for (const auto& asset : asset_ids) {
    const auto it = label_of.find(asset);
    if (it == label_of.end()) {
      throw DataError("sector file '" + path + "': no sector label for asset '" +
                      asset + "'");
    }
    labels.push_back(it->second);
  }
  return labels;
}

Eigen::MatrixXd read_returns_csv(const std::string& path, bool has_header) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("returns: cannot open '" + path + "'");
  }
  std::string line;
  std::size_t row_number = 0;
  if (has_header) {
    if (!std::getline(in, line)) {
      throw DataError("returns '" + path + "': file is empty");
    }
    ++row_number;
  }
  std::vector<std::vector<double>> rows;
  std::size_t columns = 0;
  while (std::getline(in, line)) {
    ++row_number;
    if (trim(line).empty()) {
      continue;
    }
    const auto fields = split_csv_line(line);
    if (columns == 0) {
      columns = fields.size();
    } else if (fields.size() != columns) {
      throw DataError("returns '" + path + "' row " + std::to_string(row_number) +
                      ": expected " + std::to_string(columns) + " columns, got " +
                      std::to_string(fields.size()));
    }
    std::vector<double> values(columns);
    for (std::size_t j = 0; j < columns; ++j) {
      values[j] = parse_field_double(fields[j], "returns '" + path + "' row " +
                                                    std::to_string(row_number) +
                                                    " col " + std::to_string(j + 1));
    }
    rows.push_back(std::move(values));
  }
  if (rows.size() < 2 || columns < 2) {
    throw DataError("returns '" + path + "': need at least 2 rows and 2 columns, got " +
                    std::to_string(rows.size()) + " x " + std::to_string(columns));
  }
  Eigen::MatrixXd returns(static_cast<Eigen::Index>(rows.size()),
                          static_cast<Eigen::Index>(columns));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < columns; ++j) {
      returns(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return returns;
}

void write_vector(std::ostream& out, const Eigen::VectorXd& values) {
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    out << format_double(values(i)) << '\n';
  }
}

}  // namespace mapshrink
