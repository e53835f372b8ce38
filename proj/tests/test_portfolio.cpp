#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "mapshrink/errors.hpp"
#include "mapshrink/estimators.hpp"
#include "mapshrink/factor.hpp"
#include "mapshrink/model.hpp"
#include "mapshrink/portfolio.hpp"
#include "test_helpers.hpp"

using mapshrink::CovarianceModel;
using mapshrink::FactorEstimate;
using mapshrink::ForecastRatio;
using mapshrink::GenerationParams;
using mapshrink::PortfolioWeights;
using mapshrink::ReturnsBlock;
using mapshrink::ScalarEstimates;
using mapshrink::equal_weight_direction;
using mapshrink::eigenvector_bias;
using mapshrink::min_var_weights;
using mapshrink::model_variance;
using mapshrink::optimization_bias;
using mapshrink::scalar_estimates;
using mapshrink::tracking_error_asymptotic;
using mapshrink::tracking_error_exact;
using mapshrink::true_variance;
using mapshrink::variance_forecast_ratio;

namespace {

CovarianceModel random_model(Eigen::Index p, std::uint64_t seed) {
  const Eigen::VectorXd v = test_helpers::random_beta(p, seed).normalized();
  return CovarianceModel(v, 0.5 + 0.01 * static_cast<double>(seed % 7), 0.25);
}

}  // namespace

TEST_CASE("scalar estimates recover spike and noise levels") {
  FactorEstimate fe;
  fe.s2 = 2.0;
  fe.l2 = 0.5;
  const ScalarEstimates scalars = scalar_estimates(fe, 12, 100);
  CHECK(scalars.spike_scale == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(scalars.delta2 == doctest::Approx(0.06).epsilon(1e-14));

  FactorEstimate flat;
  flat.s2 = 1.0;
  flat.l2 = 1.0;
  CHECK_THROWS_AS(scalar_estimates(flat, 12, 100), mapshrink::NoGapError);

  // Noiseless rank-one data: all variance is spike.
  const Eigen::VectorXd beta = test_helpers::random_beta(20, 4);
  Eigen::VectorXd x(5);
  x << 1.0, 0.5, -0.75, 1.25, -0.5;
  const FactorEstimate rank_one =
      mapshrink::leading_factor(ReturnsBlock{beta * x.transpose()});
  const ScalarEstimates clean = scalar_estimates(rank_one, 5, 20);
  CHECK(clean.delta2 <= 1e-12 * clean.spike_scale);
  CHECK(clean.spike_scale == doctest::Approx(rank_one.s2).epsilon(1e-12));
}

TEST_CASE("minimum-variance weights match dense and rank-one-update oracles") {
  for (const Eigen::Index p : {10, 50, 200}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const CovarianceModel model = random_model(p, 10 * static_cast<std::uint64_t>(p) + seed);
      const PortfolioWeights weights = min_var_weights(model);

      CHECK(weights.w.sum() == doctest::Approx(1.0).epsilon(1e-10));

      const Eigen::VectorXd dense =
          test_helpers::dense_min_var(test_helpers::dense_covariance(model));
      CHECK((weights.w - dense).cwiseAbs().maxCoeff() < 1e-10);

      const Eigen::VectorXd rank_one = test_helpers::sherman_morrison_min_var(model);
      CHECK((weights.w - rank_one).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("minimum-variance weights handle the aligned and noise-dominated limits") {
  const Eigen::Index p = 50;
  const Eigen::VectorXd q = equal_weight_direction(p);

  const PortfolioWeights aligned = min_var_weights(CovarianceModel(q, 1.0, 0.25));
  CHECK((aligned.w - Eigen::VectorXd::Constant(p, 1.0 / p)).cwiseAbs().maxCoeff() <
        1e-12);

  // k2 = 1e6: the diagonal dominates and weights approach equal weighting.
  const Eigen::VectorXd v = test_helpers::random_beta(p, 21).normalized();
  const PortfolioWeights flat = min_var_weights(CovarianceModel(v, 1e-6, 1.0));
  CHECK((flat.w - Eigen::VectorXd::Constant(p, 1.0 / p)).cwiseAbs().maxCoeff() < 1e-4);

  Eigen::VectorXd balanced = Eigen::VectorXd::Zero(p);
  balanced(0) = 1.0 / std::sqrt(2.0);
  balanced(1) = -1.0 / std::sqrt(2.0);
  CHECK_THROWS_AS(min_var_weights(CovarianceModel(balanced, 1.0, 0.25)),
                  mapshrink::OrthogonalToQError);
}

TEST_CASE("optimization bias has the documented zero and plateau values") {
  const Eigen::Index p = 40;
  const Eigen::VectorXd b = test_helpers::random_beta(p, 31).normalized();
  CHECK(std::abs(optimization_bias(b, b)) < 1e-12);

  // h orthogonal to both q and b: the bias equals (b, q).
  Eigen::VectorXd h = Eigen::VectorXd::Zero(4);
  h(0) = 1.0 / std::sqrt(2.0);
  h(1) = -1.0 / std::sqrt(2.0);
  Eigen::VectorXd e3 = Eigen::VectorXd::Zero(4);
  e3(2) = 1.0;
  CHECK(optimization_bias(h, e3) == doctest::Approx(0.5).epsilon(1e-14));

  CHECK_THROWS_AS(optimization_bias(equal_weight_direction(p), b),
                  mapshrink::CollinearAnchorError);
}

TEST_CASE("eigenvector bias matches its defining ratio") {
  const Eigen::Index p = 20;
  const Eigen::VectorXd b = test_helpers::random_beta(p, 41).normalized();
  const Eigen::VectorXd h =
      (0.8 * b + 0.2 * test_helpers::random_beta(p, 42, 0.0, 1.0)).normalized();
  const Eigen::VectorXd q = equal_weight_direction(p);

  const double hq = h.dot(q);
  const double bq = b.dot(q);
  const double hb = h.dot(b);
  const double expected =
      hq * hq * (1.0 - hb * hb) / ((1.0 - hq * hq) * (1.0 - bq * bq));
  CHECK(eigenvector_bias(h, b) == doctest::Approx(expected).epsilon(1e-12));

  CHECK(std::abs(eigenvector_bias(b, b)) < 1e-12);

  Eigen::VectorXd balanced = Eigen::VectorXd::Zero(p);
  balanced(0) = 1.0 / std::sqrt(2.0);
  balanced(1) = -1.0 / std::sqrt(2.0);
  CHECK(eigenvector_bias(balanced, b) == 0.0);

  CHECK_THROWS_AS(eigenvector_bias(q, b), mapshrink::CollinearAnchorError);
  CHECK_THROWS_AS(eigenvector_bias(h, q), mapshrink::CollinearAnchorError);

  // The chordal-distance variant of the ratio differs from the defining form
  // by exactly 2 (1 + (h,b)) / ((1 + (h,q)) (1 + (b,q))); pin that algebra so
  // the two cannot be silently conflated.
  const double chordal = hq * hq * (h - b).squaredNorm() /
                         ((h - q).squaredNorm() * (b - q).squaredNorm());
  const double conversion = 2.0 * (1.0 + hb) / ((1.0 + hq) * (1.0 + bq));
  CHECK(eigenvector_bias(h, b) ==
        doctest::Approx(chordal * conversion).epsilon(1e-12));
}

TEST_CASE("exact tracking error equals the dense quadratic form") {
  const Eigen::Index p = 50;
  const CovarianceModel truth = random_model(p, 51);
  const PortfolioWeights w = min_var_weights(truth);

  CHECK(tracking_error_exact(w, w, truth) == 0.0);

  const CovarianceModel estimate = random_model(p, 52);
  const PortfolioWeights w_hat = min_var_weights(estimate);
  const double exact = tracking_error_exact(w_hat, w, truth);

  const Eigen::VectorXd difference = w_hat.w - w.w;
  const double dense =
      difference.dot(test_helpers::dense_covariance(truth) * difference);
  CHECK(exact == doctest::Approx(dense).epsilon(1e-10));

  // With the difference orthogonal to the spike the error is linear in delta2.
  Eigen::VectorXd v = Eigen::VectorXd::Zero(4);
  v(0) = 1.0;
  Eigen::VectorXd shift = Eigen::VectorXd::Zero(4);
  shift(1) = 0.3;
  const PortfolioWeights base{Eigen::VectorXd::Constant(4, 0.25)};
  const PortfolioWeights moved{base.w + shift};
  const double at_one = tracking_error_exact(moved, base, CovarianceModel(v, 1.0, 1.0));
  const double at_two = tracking_error_exact(moved, base, CovarianceModel(v, 1.0, 2.0));
  CHECK(at_two == doctest::Approx(2.0 * at_one).epsilon(1e-14));
}

TEST_CASE("asymptotic tracking error vanishes at the truth and tracks the exact value") {
  const Eigen::Index p = 500;
  GenerationParams params;
  params.p = p;
  params.n = 24;

  const Eigen::VectorXd beta = test_helpers::random_beta(p, 61);
  params.seed = 610;
  const auto [block, truth_info] = mapshrink::generate_block(params, beta);
  const CovarianceModel truth(truth_info.b,
                              static_cast<double>(p) * truth_info.eta,
                              truth_info.delta2);

  CHECK(std::abs(tracking_error_asymptotic(truth_info.b, truth_info.b, truth, truth)) <
        1e-10);

  // Median over repeated draws: the approximation stays within a factor of 2
  // of the exact tracking error for the shrinkage estimator.
  std::vector<double> ratios;
  for (std::uint64_t trial = 0; trial < 30; ++trial) {
    params.seed = 700 + trial;
    const ReturnsBlock draw = mapshrink::generate_block(params, beta).first;
    const FactorEstimate fe = mapshrink::leading_factor(draw);
    const auto estimate = mapshrink::gps_estimator(fe);
    const ScalarEstimates scalars = scalar_estimates(fe, params.n, p);
    const CovarianceModel fitted(estimate.h_hat, scalars.spike_scale, scalars.delta2);

    const PortfolioWeights w = min_var_weights(truth);
    const PortfolioWeights w_hat = min_var_weights(fitted);
    const double exact = tracking_error_exact(w_hat, w, truth);
    const double approx =
        tracking_error_asymptotic(estimate.h_hat, truth_info.b, truth, fitted);
    ratios.push_back(approx / exact);
  }
  std::nth_element(ratios.begin(), ratios.begin() + ratios.size() / 2, ratios.end());
  const double median = ratios[ratios.size() / 2];
  CHECK(median > 0.5);
  CHECK(median < 2.0);
}

TEST_CASE("variance forecast ratio matches the dense evaluation") {
  const Eigen::Index p = 50;
  const CovarianceModel truth = random_model(p, 71);
  const CovarianceModel estimate = random_model(p, 72);

  const ForecastRatio at_truth =
      variance_forecast_ratio(truth.unit_vector, truth, truth);
  CHECK(at_truth.ratio == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(at_truth.p_times_bias_sq < 1e-20);

  const ForecastRatio mismatched =
      variance_forecast_ratio(estimate.unit_vector, truth, estimate);
  const Eigen::VectorXd w_hat =
      test_helpers::dense_min_var(test_helpers::dense_covariance(estimate));
  const double realised = w_hat.dot(test_helpers::dense_covariance(truth) * w_hat);
  const double forecast = w_hat.dot(test_helpers::dense_covariance(estimate) * w_hat);
  CHECK(mismatched.ratio == doctest::Approx(realised / forecast).epsilon(1e-10));

  const double bias = optimization_bias(estimate.unit_vector, truth.unit_vector);
  CHECK(mismatched.p_times_bias_sq ==
        doctest::Approx(static_cast<double>(p) * bias * bias).epsilon(1e-12));
}

TEST_CASE("true variance uses the rank-one expansion") {
  // p=4 equal weights against the dense quadratic form.
  const Eigen::VectorXd q4 = equal_weight_direction(4);
  const CovarianceModel model(q4, 0.8, 0.3);
  const PortfolioWeights equal{Eigen::VectorXd::Constant(4, 0.25)};
  const double dense =
      equal.w.dot(test_helpers::dense_covariance(model) * equal.w);
  CHECK(true_variance(equal, model) == doctest::Approx(dense).epsilon(1e-14));

  // Additivity in the spike scale at fixed weights.
  const CovarianceModel doubled(q4, 1.6, 0.3);
  const double spike_exposure = equal.w.dot(q4);
  CHECK(true_variance(equal, doubled) - true_variance(equal, model) ==
        doctest::Approx(0.8 * spike_exposure * spike_exposure).epsilon(1e-12));

  // A perfectly estimated direction at large p leaves only the noise floor.
  const Eigen::Index p = 2000;
  const Eigen::VectorXd beta = test_helpers::random_beta(p, 81);
  const mapshrink::BetaStats stats = mapshrink::beta_stats(beta);
  const double eta = stats.mean * stats.mean * (1.0 + stats.dispersion_sq) * 0.16;
  const CovarianceModel truth(beta.normalized(), static_cast<double>(p) * eta, 0.25);
  const PortfolioWeights w_hat = min_var_weights(truth);
  CHECK(true_variance(w_hat, truth) < 10.0 * 0.25 / static_cast<double>(p));
}
