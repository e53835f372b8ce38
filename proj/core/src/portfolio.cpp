#include "mapshrink/portfolio.hpp"

#include <cmath>
#include <string>

#include "mapshrink/errors.hpp"
#include "mapshrink/model.hpp"

namespace mapshrink {

namespace {

constexpr double kOrthogonalTol = 1e-10;
constexpr double kCollinearTol = 1e-12;

double mean_inner_product(const Eigen::VectorXd& v) {
  // (v, q) with q the equal-weight unit vector.
  return v.sum() / std::sqrt(static_cast<double>(v.size()));
}

void check_unit(const Eigen::VectorXd& v, const char* where) {
  if (std::abs(v.norm() - 1.0) > 1e-8) {
    throw Error(std::string(where) + ": direction is not unit length (|v| = " +
                std::to_string(v.norm()) + ")");
  }
}

}  // namespace

CovarianceModel::CovarianceModel(Eigen::VectorXd v, double spike, double noise)
    : unit_vector(std::move(v)), spike_scale(spike), delta2(noise) {
  if (unit_vector.size() < 2) {
    throw Error("CovarianceModel: need at least 2 assets");
  }
  check_unit(unit_vector, "CovarianceModel");
  if (spike_scale <= 0.0 || delta2 <= 0.0) {
    throw Error("CovarianceModel: spike_scale and delta2 must be positive (got " +
                std::to_string(spike_scale) + ", " + std::to_string(delta2) + ")");
  }
}

ScalarEstimates scalar_estimates(const FactorEstimate& fe, Eigen::Index n_obs,
                                 Eigen::Index p) {
  if (n_obs < 2 || p < 2) {
    throw Error("scalar_estimates: need n_obs >= 2 and p >= 2");
  }
  if (fe.s2 <= fe.l2) {
    throw NoGapError(
        "scalar_estimates: leading eigenvalue does not exceed the bulk level; "
        "the spike scale estimate would not be positive");
  }
  return ScalarEstimates{fe.s2 - fe.l2,
                         static_cast<double>(n_obs) / static_cast<double>(p) * fe.l2};
}

PortfolioWeights min_var_weights(const CovarianceModel& model) {
  const Eigen::Index p = model.unit_vector.size();
  const double vq = mean_inner_product(model.unit_vector);
  if (std::abs(vq) < kOrthogonalTol) {
    throw OrthogonalToQError(
        "min_var_weights: model direction is orthogonal to the equal-weight "
        "direction; the weights are undefined");
  }
  const double rho = (1.0 + model.k2()) / vq;
  const Eigen::VectorXd q = equal_weight_direction(p);
  const double sqrt_p = std::sqrt(static_cast<double>(p));
  PortfolioWeights weights{(rho * q - model.unit_vector) / (sqrt_p * (rho - vq))};
  return weights;
}

double optimization_bias(const Eigen::VectorXd& h, const Eigen::VectorXd& b) {
  if (h.size() != b.size()) {
    throw Error("optimization_bias: h and b differ in length");
  }
  check_unit(h, "optimization_bias");
  check_unit(b, "optimization_bias");
  const double hq = mean_inner_product(h);
  const double denominator = 1.0 - hq * hq;
  if (denominator < kCollinearTol) {
    throw CollinearAnchorError(
        "optimization_bias: estimate coincides with the equal-weight "
        "direction");
  }
  return (mean_inner_product(b) - b.dot(h) * hq) / denominator;
}

double eigenvector_bias(const Eigen::VectorXd& h, const Eigen::VectorXd& b) {
  if (h.size() != b.size()) {
    throw Error("eigenvector_bias: h and b differ in length");
  }
  check_unit(h, "eigenvector_bias");
  check_unit(b, "eigenvector_bias");
  const double hq = mean_inner_product(h);
  const double bq = mean_inner_product(b);
  const double h_gap = 1.0 - hq * hq;
  const double b_gap = 1.0 - bq * bq;
  if (h_gap < kCollinearTol) {
    throw CollinearAnchorError(
        "eigenvector_bias: estimate coincides with the equal-weight direction");
  }
  if (b_gap < kCollinearTol) {
    throw CollinearAnchorError(
        "eigenvector_bias: true direction coincides with the equal-weight "
        "direction");
  }
  const double hb = h.dot(b);
  return hq * hq * (1.0 - hb * hb) / (h_gap * b_gap);
}

double tracking_error_exact(const PortfolioWeights& w_hat,
                            const PortfolioWeights& w,
                            const CovarianceModel& truth) {
  if (w_hat.w.size() != w.w.size() || w.w.size() != truth.unit_vector.size()) {
    throw Error("tracking_error_exact: dimension mismatch");
  }
  const Eigen::VectorXd difference = w_hat.w - w.w;
  const double along_spike = difference.dot(truth.unit_vector);
  return truth.spike_scale * along_spike * along_spike +
         truth.delta2 * difference.squaredNorm();
}

double tracking_error_asymptotic(const Eigen::VectorXd& h,
                                 const Eigen::VectorXd& b,
                                 const CovarianceModel& truth,
                                 const CovarianceModel& estimate) {
  const double p = static_cast<double>(h.size());
  const double bias = optimization_bias(h, b);
  const double direction_bias = eigenvector_bias(h, b);
  const double hq = mean_inner_product(h);
  const double bq = mean_inner_product(b);
  const double xi = std::min(1.0 - hq * hq, 1.0 - bq * bq);
  if (xi < kCollinearTol) {
    throw CollinearAnchorError(
        "tracking_error_asymptotic: a direction coincides with the "
        "equal-weight direction");
  }
  const double eta = truth.spike_scale / p;
  const double eta_hat = estimate.spike_scale / p;
  // (b,q)^2 = 1 / (1 + d^2) for a beta profile with dispersion d.
  const double correction =
      2.0 * bq * bq / xi * (truth.delta2 + eta / eta_hat * estimate.delta2);
  return eta * bias * bias + truth.delta2 / p * direction_bias +
         correction / p * bias;
}

double model_variance(const PortfolioWeights& weights,
                      const CovarianceModel& model) {
  if (weights.w.size() != model.unit_vector.size()) {
    throw Error("model_variance: dimension mismatch");
  }
  const double along_spike = weights.w.dot(model.unit_vector);
  return model.spike_scale * along_spike * along_spike +
         model.delta2 * weights.w.squaredNorm();
}

double true_variance(const PortfolioWeights& w_hat,
                     const CovarianceModel& truth) {
  return model_variance(w_hat, truth);
}

ForecastRatio variance_forecast_ratio(const Eigen::VectorXd& h,
                                      const CovarianceModel& truth,
                                      const CovarianceModel& estimate) {
  if (h.size() != truth.unit_vector.size() ||
      h.size() != estimate.unit_vector.size()) {
    throw Error("variance_forecast_ratio: dimension mismatch");
  }
  const PortfolioWeights w_hat = min_var_weights(estimate);
  const double realised = model_variance(w_hat, truth);
  const double forecast = model_variance(w_hat, estimate);
  const double bias = optimization_bias(h, truth.unit_vector);
  return ForecastRatio{realised / forecast,
                       static_cast<double>(h.size()) * bias * bias};
}

}  // namespace mapshrink
