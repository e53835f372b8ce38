#pragma once

#include <cstddef>
#include <span>
#include <string>

namespace mapshrink {

/// Five-number summary plus mean of a sample.
struct BoxStats {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  double mean = 0.0;
};

/// One row of summary.csv: the box stats of one metric over one cell
/// (estimator x rho for the double scenario, estimator over betas for the
/// single ones), with the recorded/degenerate trial accounting.
struct SummaryRow {
  std::string estimator;
  double rho = 0.0;
  std::string metric;
  BoxStats stats;
  std::size_t n = 0;
  std::size_t n_degenerate = 0;
};

/// Median and quartiles by the midpoint-inclusive rule: the median of an
/// odd-length sample belongs to both halves, the quartiles are the medians of
/// the halves. A sample of one yields that value for all five numbers.
/// Throws EmptySampleError on an empty sample. The input is copied, not
/// reordered.
BoxStats summarize(std::span<const double> values);

}  // namespace mapshrink
