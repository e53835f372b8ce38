#include "mapshrink/experiments/summary.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "mapshrink/errors.hpp"

namespace mapshrink {

namespace {

/// Median of sorted[first, last).
double median_of_range(const std::vector<double>& sorted, std::size_t first,
                       std::size_t last) {
  const std::size_t count = last - first;
  const std::size_t mid = first + count / 2;
  if (count % 2 == 1) {
    return sorted[mid];
  }
  return 0.5 * (sorted[mid - 1] + sorted[mid]);
}

}  // namespace

BoxStats summarize(std::span<const double> values) {
  if (values.empty()) {
    throw EmptySampleError("summarize: empty sample");
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t count = sorted.size();

  BoxStats stats;
  stats.min = sorted.front();
  stats.max = sorted.back();
  stats.median = median_of_range(sorted, 0, count);
  stats.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) /
               static_cast<double>(count);
  if (count == 1) {
    stats.q1 = sorted.front();
    stats.q3 = sorted.front();
    return stats;
  }
  // Inclusive halves: an odd-length sample keeps its median in both.
  const std::size_t lower_end = (count + 1) / 2;
  const std::size_t upper_begin = count / 2;
  stats.q1 = median_of_range(sorted, 0, lower_end);
  stats.q3 = median_of_range(sorted, upper_begin, count);
  return stats;
}

}  // namespace mapshrink
