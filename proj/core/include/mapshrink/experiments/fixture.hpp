#pragma once

#include <Eigen/Core>
#include <cstdint>

#include "mapshrink/experiments/io.hpp"

namespace mapshrink {

/// Shape of the synthetic historical-style beta panel. Defaults reproduce
/// the committed data/historical_betas.csv: 488 assets in 11 sectors with 24
/// monthly beta columns, cross-sectional mean 1.0 and standard deviation 0.5,
/// and per-asset AR(1) persistence 0.9 across columns.
struct FixtureParams {
  Eigen::Index p = 488;
  Eigen::Index columns = 24;
  Eigen::Index sectors = 11;
  double mean = 1.0;
  double sd = 0.5;
  double ar_coefficient = 0.9;
  double sector_sd = 0.35;  // dispersion of the once-drawn sector offsets
  std::uint64_t seed = 0;
};

/// Draws a beta panel with sector-clustered levels and slowly mixing
/// per-asset dynamics: beta_t(i) = mean + offset_{sector(i)} + u_t(i), where
/// the offsets are N(0, sector_sd^2) drawn once and u is a stationary AR(1)
/// sized so the total cross-sectional variance is sd^2. Deterministic in the
/// seed.
BetaPanel make_historical_fixture(const FixtureParams& params);

}  // namespace mapshrink
