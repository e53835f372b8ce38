#include "mapshrink/model.hpp"

#include <cmath>
#include <string>

#include "mapshrink/errors.hpp"
#include "mapshrink/rng.hpp"

namespace mapshrink {

namespace {

constexpr double kZeroMeanTol = 1e-12;

void check_beta_length(const Eigen::VectorXd& beta, const char* where) {
  if (beta.size() < 2) {
    throw Error(std::string(where) + ": beta vector needs at least 2 entries, got " +
                std::to_string(beta.size()));
  }
}

/// Mean with the zero-mean guard shared by beta_stats and codispersion.
double checked_mean(const Eigen::VectorXd& beta, const char* where) {
  const double mu = beta.mean();
  const double scale = beta.cwiseAbs().maxCoeff();
  if (std::abs(mu) < kZeroMeanTol * scale || scale == 0.0) {
    throw ZeroMeanError(std::string(where) +
                        ": cross-sectional mean is zero relative to the "
                        "largest entry; beta/mean is undefined");
  }
  return mu;
}

}  // namespace

Eigen::VectorXd equal_weight_direction(Eigen::Index p) {
  if (p < 1) {
    throw Error("equal_weight_direction: p must be positive, got " + std::to_string(p));
  }
  return Eigen::VectorXd::Constant(p, 1.0 / std::sqrt(static_cast<double>(p)));
}

BetaStats beta_stats(const Eigen::VectorXd& beta) {
  check_beta_length(beta, "beta_stats");
  const double mu = checked_mean(beta, "beta_stats");
  const Eigen::ArrayXd centered = beta.array() / mu - 1.0;
  return BetaStats{mu, centered.square().mean()};
}

CoDispersion codispersion(const Eigen::VectorXd& beta1,
                          const Eigen::VectorXd& beta2) {
  check_beta_length(beta1, "codispersion");
  if (beta1.size() != beta2.size()) {
    throw Error("codispersion: beta vectors differ in length (" +
                std::to_string(beta1.size()) + " vs " + std::to_string(beta2.size()) + ")");
  }
  const BetaStats s1 = beta_stats(beta1);
  const BetaStats s2 = beta_stats(beta2);
  const Eigen::ArrayXd c1 = beta1.array() / s1.mean - 1.0;
  const Eigen::ArrayXd c2 = beta2.array() / s2.mean - 1.0;
  const double d12 = (c1 * c2).mean();
  if (s1.dispersion_sq <= 0.0 || s2.dispersion_sq <= 0.0) {
    throw ZeroDispersionError(
        "codispersion: pointwise correlation is undefined when either beta "
        "vector has zero dispersion");
  }
  const double rho = d12 / std::sqrt(s1.dispersion_sq * s2.dispersion_sq);
  return CoDispersion{d12, rho};
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> generate_correlated_betas(
    Eigen::Index p, double mean, double sd, double rho_target,
    std::uint64_t seed) {
  if (p < 2) {
    throw Error("generate_correlated_betas: p must be >= 2, got " + std::to_string(p));
  }
  if (sd < 0.0) {
    throw Error("generate_correlated_betas: sd must be nonnegative");
  }
  if (rho_target < -1.0 || rho_target > 1.0) {
    throw Error("generate_correlated_betas: rho_target must lie in [-1, 1], got " +
                std::to_string(rho_target));
  }
  auto engine = make_engine(stream_key(seed, Stream::beta));
  std::normal_distribution<double> normal(0.0, 1.0);
  const double cross = std::sqrt(1.0 - rho_target * rho_target);
  Eigen::VectorXd beta1(p);
  Eigen::VectorXd beta2(p);
  for (Eigen::Index i = 0; i < p; ++i) {
    const double g1 = normal(engine);
    const double g2 = rho_target * g1 + cross * normal(engine);
    beta1(i) = mean + sd * g1;
    beta2(i) = mean + sd * g2;
  }
  return {std::move(beta1), std::move(beta2)};
}

std::pair<ReturnsBlock, GroundTruth> generate_block(
    const GenerationParams& params, const Eigen::VectorXd& beta) {
  if (params.p < 2 || params.n < 2) {
    throw Error("generate_block: need p >= 2 and n >= 2, got p=" +
                std::to_string(params.p) + " n=" + std::to_string(params.n));
  }
  if (beta.size() != params.p) {
    throw Error("generate_block: beta has length " + std::to_string(beta.size()) +
                " but params.p is " + std::to_string(params.p));
  }
  if (params.sigma2 <= 0.0 || params.delta2 <= 0.0) {
    throw Error("generate_block: sigma2 and delta2 must be positive");
  }

  auto factor_engine = make_engine(stream_key(params.seed, Stream::factor));
  auto residual_engine = make_engine(stream_key(params.seed, Stream::residual));
  std::normal_distribution<double> factor_draw(0.0, std::sqrt(params.sigma2));
  std::normal_distribution<double> residual_draw(0.0, std::sqrt(params.delta2));

  Eigen::VectorXd x(params.n);
  for (Eigen::Index t = 0; t < params.n; ++t) {
    x(t) = factor_draw(factor_engine);
  }
  Eigen::MatrixXd z(params.p, params.n);
  for (Eigen::Index i = 0; i < params.p; ++i) {
    for (Eigen::Index t = 0; t < params.n; ++t) {
      z(i, t) = residual_draw(residual_engine);
    }
  }

  GroundTruth truth;
  truth.beta = beta;
  truth.b = beta / beta.norm();
  truth.factor_returns = x;
  truth.residuals = z;
  truth.eta = params.sigma2 * beta.squaredNorm() / static_cast<double>(params.p);
  truth.delta2 = params.delta2;

  ReturnsBlock block{beta * x.transpose() + z};
  return {std::move(block), std::move(truth)};
}

}  // namespace mapshrink
