#pragma once

#include <Eigen/Core>

#include "mapshrink/factor.hpp"

namespace mapshrink {

/// Spiked covariance Sigma = spike_scale * v v' + delta2 * I with unit v and
/// positive scalars, in either its population or estimated form.
struct CovarianceModel {
  CovarianceModel(Eigen::VectorXd v, double spike, double noise);

  /// Noise-to-spike ratio delta2 / spike_scale.
  double k2() const { return delta2 / spike_scale; }

  Eigen::VectorXd unit_vector;
  double spike_scale = 0.0;
  double delta2 = 0.0;
};

struct PortfolioWeights {
  Eigen::VectorXd w;
};

/// Scalar plug-ins recovered from the spectrum: spike_scale = s2 - l2 and
/// delta2 = (n_obs / p) * l2.
struct ScalarEstimates {
  double spike_scale = 0.0;
  double delta2 = 0.0;
};

/// Variance ratio diagnostics of the plug-in minimum-variance portfolio.
struct ForecastRatio {
  double ratio = 0.0;        // realised variance / forecast variance
  double p_times_bias_sq = 0.0;  // p * optimization_bias^2, its large-p proxy
};

/// Recovers the spike scale and noise level from a factor estimate. n_obs is
/// the number of return periods behind the estimate. Throws NoGapError when
/// s2 <= l2 (no spike to size).
ScalarEstimates scalar_estimates(const FactorEstimate& fe, Eigen::Index n_obs,
                                 Eigen::Index p);

/// Fully-invested minimum-variance weights of a spiked model in closed form:
///   rho = (1 + k2) / (v, q),  w = (rho q - v) / (sqrt(p) (rho - (v, q))).
/// Equals Sigma^{-1} e / (e' Sigma^{-1} e) without forming Sigma. Throws
/// OrthogonalToQError when |(v, q)| < 1e-10.
PortfolioWeights min_var_weights(const CovarianceModel& model);

/// Relative optimization bias of a direction estimate h against the true
/// unit beta b:  ((b,q) - (b,h)(h,q)) / (1 - (h,q)^2). Zero iff h recovers b
/// in the plane that matters for the weights; depends on directions only.
double optimization_bias(const Eigen::VectorXd& h, const Eigen::VectorXd& b);

/// Eigenvector bias ratio
///   (h,q)^2 (1 - (h,b)^2) / ((1 - (h,q)^2)(1 - (b,q)^2)).
double eigenvector_bias(const Eigen::VectorXd& h, const Eigen::VectorXd& b);

/// Exact squared tracking error (w_hat - w)' Sigma (w_hat - w), expanded
/// through the rank-one structure so no p x p matrix is formed.
double tracking_error_exact(const PortfolioWeights& w_hat,
                            const PortfolioWeights& w,
                            const CovarianceModel& truth);

/// Large-p approximation of the squared tracking error:
///   eta E^2 + (delta2 / p) D + (C / p) E
/// with E the optimization bias, D the eigenvector bias, eta the per-asset
/// spike scale, and C = 2 (b,q)^2 / xi * (delta2 + (eta/eta_hat) delta2_hat),
/// xi = min(1 - (h,q)^2, 1 - (b,q)^2) at the evaluated directions.
double tracking_error_asymptotic(const Eigen::VectorXd& h,
                                 const Eigen::VectorXd& b,
                                 const CovarianceModel& truth,
                                 const CovarianceModel& estimate);

/// Variance of a weight vector under a spiked model, again through the
/// rank-one structure.
double model_variance(const PortfolioWeights& weights,
                      const CovarianceModel& model);

/// Realised variance of the plug-in minimum-variance portfolio under the
/// true model. Alias of model_variance with the roles spelled out.
double true_variance(const PortfolioWeights& w_hat,
                     const CovarianceModel& truth);

/// Ratio of realised to forecast variance of the estimated minimum-variance
/// portfolio, alongside p * optimization_bias^2 which approximates it for
/// large p.
ForecastRatio variance_forecast_ratio(const Eigen::VectorXd& h,
                                      const CovarianceModel& truth,
                                      const CovarianceModel& estimate);

}  // namespace mapshrink
