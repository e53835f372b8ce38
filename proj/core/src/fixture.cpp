#include "mapshrink/experiments/fixture.hpp"

#include <cmath>
#include <cstdio>
#include <iterator>
#include <random>
#include <string>

#include "mapshrink/errors.hpp"
#include "mapshrink/rng.hpp"

namespace mapshrink {

namespace {

const char* kSectorNames[] = {
    "information_technology", "health_care",      "financials",
    "consumer_discretionary", "communication_services", "industrials",
    "consumer_staples",       "energy",           "utilities",
    "real_estate",            "materials"};

std::string sector_name(Eigen::Index index) {
  constexpr Eigen::Index known = static_cast<Eigen::Index>(std::size(kSectorNames));
  if (index < known) {
    return kSectorNames[index];
  }
  return "sector_" + std::to_string(index + 1);
}

}  // namespace

BetaPanel make_historical_fixture(const FixtureParams& params) {
  if (params.p < 2 || params.columns < 1 || params.sectors < 1 ||
      params.sectors > params.p) {
    throw Error("make_historical_fixture: invalid shape (p=" +
                std::to_string(params.p) + ", columns=" + std::to_string(params.columns) +
                ", sectors=" + std::to_string(params.sectors) + ")");
  }
  if (std::abs(params.ar_coefficient) >= 1.0) {
    throw Error("make_historical_fixture: AR coefficient must lie in (-1, 1)");
  }
  const double idio_var = params.sd * params.sd - params.sector_sd * params.sector_sd;
  if (idio_var <= 0.0) {
    throw Error("make_historical_fixture: sector_sd must stay below sd");
  }

  auto engine = make_engine(stream_key(params.seed, Stream::fixture));
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<Eigen::Index> sector_draw(0, params.sectors - 1);

  // Sector levels persist across all columns; each asset keeps its sector.
  Eigen::VectorXd offsets(params.sectors);
  for (Eigen::Index s = 0; s < params.sectors; ++s) {
    offsets(s) = params.sector_sd * normal(engine);
  }

  BetaPanel panel;
  panel.asset_ids.reserve(static_cast<std::size_t>(params.p));
  panel.sectors.reserve(static_cast<std::size_t>(params.p));
  panel.betas.resize(params.p, params.columns);

  const double idio_sd = std::sqrt(idio_var);
  const double innovation_sd =
      idio_sd * std::sqrt(1.0 - params.ar_coefficient * params.ar_coefficient);
  char asset_id[24];
  for (Eigen::Index i = 0; i < params.p; ++i) {
    std::snprintf(asset_id, sizeof(asset_id), "A%04lld",
                  static_cast<long long>(i + 1));
    panel.asset_ids.emplace_back(asset_id);
    const Eigen::Index sector = sector_draw(engine);
    panel.sectors.push_back(sector_name(sector));

    // Stationary AR(1): start at the marginal law, then mix slowly.
    double u = idio_sd * normal(engine);
    for (Eigen::Index t = 0; t < params.columns; ++t) {
      panel.betas(i, t) = params.mean + offsets(sector) + u;
      u = params.ar_coefficient * u + innovation_sd * normal(engine);
    }
  }
  return panel;
}

}  // namespace mapshrink
