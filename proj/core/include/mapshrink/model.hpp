#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <utility>

namespace mapshrink {

/// Cross-sectional mean and squared dispersion of a beta vector:
///   mean          mu = (1/p) sum_i beta(i)
///   dispersion_sq d2 = (1/p) sum_i (beta(i)/mu - 1)^2
struct BetaStats {
  double mean = 0.0;
  double dispersion_sq = 0.0;
};

/// Co-dispersion of two beta vectors and their pointwise correlation
///   d12 = (1/p) sum_i (b1(i)/mu1 - 1)(b2(i)/mu2 - 1),  rho = d12/(d1*d2).
struct CoDispersion {
  double d12 = 0.0;
  double rho = 0.0;
};

/// One observation block of asset returns, assets in rows: p x n with
/// p >= 2 assets and n >= 2 periods.
struct ReturnsBlock {
  Eigen::MatrixXd data;

  Eigen::Index p() const { return data.rows(); }
  Eigen::Index n() const { return data.cols(); }
};

/// Inputs of the one-factor generator R = beta * X' + Z with X ~ N(0, sigma2)
/// iid over periods and Z ~ N(0, delta2) iid over entries.
struct GenerationParams {
  Eigen::Index p = 0;
  Eigen::Index n = 0;
  double sigma2 = 0.16;
  double delta2 = 0.25;
  std::uint64_t seed = 0;
};

/// Everything the generator knows about a block it produced. b is beta
/// normalised to unit length and eta is the per-asset spike scale
/// sigma2 * |beta|^2 / p, so the population covariance is
/// p * eta * b b' + delta2 * I.
struct GroundTruth {
  Eigen::VectorXd beta;
  Eigen::VectorXd b;
  Eigen::VectorXd factor_returns;
  Eigen::MatrixXd residuals;
  double eta = 0.0;
  double delta2 = 0.0;
};

/// Equal-weight unit vector q = (1,...,1)/sqrt(p).
Eigen::VectorXd equal_weight_direction(Eigen::Index p);

/// Computes mean and squared dispersion. Throws ZeroMeanError when the mean
/// is zero relative to the largest entry (|mu| < 1e-12 * max_i |beta(i)|).
BetaStats beta_stats(const Eigen::VectorXd& beta);

/// Co-dispersion and pointwise correlation of two equally long beta vectors.
/// Throws ZeroMeanError as above and ZeroDispersionError when either vector
/// has zero dispersion (the correlation is undefined there).
CoDispersion codispersion(const Eigen::VectorXd& beta1,
                          const Eigen::VectorXd& beta2);

/// Draws a coupled pair of beta vectors: per component,
/// beta_t(i) = mean + sd * g_t(i) with (g_1(i), g_2(i)) standard normal of
/// correlation rho_target. rho_target = 1 reproduces beta1 exactly.
std::pair<Eigen::VectorXd, Eigen::VectorXd> generate_correlated_betas(
    Eigen::Index p, double mean, double sd, double rho_target,
    std::uint64_t seed);

/// Simulates one block R = beta * X' + Z and reports the realised truth.
/// Factor and residual draws come from separate streams derived from
/// params.seed, so the same seed reproduces the block bit for bit.
std::pair<ReturnsBlock, GroundTruth> generate_block(
    const GenerationParams& params, const Eigen::VectorXd& beta);

}  // namespace mapshrink
