#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "mapshrink/errors.hpp"
#include "mapshrink/model.hpp"
#include "test_helpers.hpp"

using mapshrink::beta_stats;
using mapshrink::codispersion;
using mapshrink::equal_weight_direction;
using mapshrink::generate_block;
using mapshrink::generate_correlated_betas;
using mapshrink::GenerationParams;

TEST_CASE("beta_stats on hand-computed vectors") {
  Eigen::VectorXd constant = Eigen::VectorXd::Constant(4, 1.0);
  auto stats = beta_stats(constant);
  CHECK(stats.mean == doctest::Approx(1.0));
  CHECK(stats.dispersion_sq == doctest::Approx(0.0));

  Eigen::VectorXd two(2);
  two << 1.0, 3.0;
  stats = beta_stats(two);
  CHECK(stats.mean == doctest::Approx(2.0));
  CHECK(stats.dispersion_sq == doctest::Approx(0.25));

  Eigen::VectorXd negative_constant = Eigen::VectorXd::Constant(5, -3.0);
  stats = beta_stats(negative_constant);
  CHECK(stats.mean == doctest::Approx(-3.0));
  CHECK(stats.dispersion_sq == doctest::Approx(0.0));
}

TEST_CASE("dispersion is scale invariant") {
  const Eigen::VectorXd beta = test_helpers::random_beta(200, 42);
  const double base = beta_stats(beta).dispersion_sq;
  for (double scale : {2.0, -0.5, 17.0}) {
    CHECK(beta_stats(scale * beta).dispersion_sq == doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("zero-mean beta vectors are rejected") {
  Eigen::VectorXd balanced(2);
  balanced << 1.0, -1.0;
  CHECK_THROWS_AS(beta_stats(balanced), mapshrink::ZeroMeanError);
  CHECK_THROWS_AS(beta_stats(Eigen::VectorXd::Zero(3)), mapshrink::ZeroMeanError);
}

TEST_CASE("mean inner product identity (b, q)^2 = 1 / (1 + d^2)") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL}) {
    const Eigen::VectorXd beta = test_helpers::random_beta(400, seed);
    const auto stats = beta_stats(beta);
    const Eigen::VectorXd b = beta / beta.norm();
    const double bq = b.dot(equal_weight_direction(beta.size()));
    CHECK(bq * bq == doctest::Approx(1.0 / (1.0 + stats.dispersion_sq)).epsilon(1e-10));
  }
}

TEST_CASE("codispersion on hand-computed vectors and its identity") {
  Eigen::VectorXd beta1(2);
  Eigen::VectorXd beta2(2);
  beta1 << 1.0, 3.0;
  beta2 << 3.0, 1.0;
  const auto cross = codispersion(beta1, beta2);
  CHECK(cross.d12 == doctest::Approx(-0.25));
  CHECK(cross.rho == doctest::Approx(-1.0));

  CHECK(codispersion(beta1, beta1).rho == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(codispersion(beta1, 2.0 * beta1).rho == doctest::Approx(1.0).epsilon(1e-12));

  // (b1, b2) - (b1, q)(b2, q) = d12 / (sqrt(1 + d1^2) sqrt(1 + d2^2))
  const Eigen::VectorXd r1 = test_helpers::random_beta(300, 7);
  const Eigen::VectorXd r2 = test_helpers::random_beta(300, 8);
  const auto c = codispersion(r1, r2);
  const auto s1 = beta_stats(r1);
  const auto s2 = beta_stats(r2);
  const Eigen::VectorXd q = equal_weight_direction(300);
  const Eigen::VectorXd b1 = r1 / r1.norm();
  const Eigen::VectorXd b2 = r2 / r2.norm();
  const double lhs = b1.dot(b2) - b1.dot(q) * b2.dot(q);
  const double rhs = c.d12 / (std::sqrt(1.0 + s1.dispersion_sq) *
                              std::sqrt(1.0 + s2.dispersion_sq));
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));

  CHECK_THROWS_AS(codispersion(Eigen::VectorXd::Constant(5, 2.0), r1.head(5)),
                  mapshrink::ZeroDispersionError);
}

TEST_CASE("correlated beta pairs hit the target pointwise correlation") {
  const Eigen::Index p = 100000;

  auto [same1, same2] = generate_correlated_betas(p, 1.0, 0.5, 1.0, 99);
  CHECK(same1 == same2);

  auto [anti1, anti2] = generate_correlated_betas(p, 1.0, 0.5, -1.0, 99);
  CHECK(codispersion(anti1, anti2).rho == doctest::Approx(-1.0).epsilon(1e-2));

  auto [ind1, ind2] = generate_correlated_betas(p, 1.0, 0.5, 0.0, 123);
  CHECK(std::abs(codispersion(ind1, ind2).rho) < 0.02);

  auto [mid1, mid2] = generate_correlated_betas(p, 1.0, 0.5, 0.6, 321);
  CHECK(codispersion(mid1, mid2).rho == doctest::Approx(0.6).epsilon(0.035));
}

TEST_CASE("generate_block is deterministic and shaped correctly") {
  GenerationParams params;
  params.p = 50;
  params.n = 10;
  params.seed = 2024;
  const Eigen::VectorXd beta = test_helpers::random_beta(params.p, 5);

  const auto [block_a, truth_a] = generate_block(params, beta);
  const auto [block_b, truth_b] = generate_block(params, beta);
  CHECK(block_a.data == block_b.data);
  CHECK(block_a.p() == 50);
  CHECK(block_a.n() == 10);

  // The block decomposes exactly as beta X' + Z with the reported pieces.
  const Eigen::MatrixXd reconstructed =
      beta * truth_a.factor_returns.transpose() + truth_a.residuals;
  CHECK((block_a.data - reconstructed).cwiseAbs().maxCoeff() == doctest::Approx(0.0));

  params.seed = 2025;
  const auto [block_c, truth_c] = generate_block(params, beta);
  CHECK(block_a.data != block_c.data);
}

TEST_CASE("ground truth satisfies its exact identities") {
  GenerationParams params;
  params.p = 400;
  params.n = 24;
  params.seed = 77;
  const Eigen::VectorXd beta = test_helpers::random_beta(params.p, 6);
  const auto [block, truth] = generate_block(params, beta);

  CHECK(truth.b.norm() == doctest::Approx(1.0).epsilon(1e-12));
  const auto stats = beta_stats(beta);
  const double expected_eta =
      stats.mean * stats.mean * (1.0 + stats.dispersion_sq) * params.sigma2;
  CHECK(truth.eta == doctest::Approx(expected_eta).epsilon(1e-10));
  CHECK(truth.delta2 == doctest::Approx(params.delta2));
}

TEST_CASE("residual variance matches delta2 across many blocks") {
  GenerationParams params;
  params.p = 50;
  params.n = 10;
  params.delta2 = 0.25;

  double sum = 0.0;
  double sum_sq = 0.0;
  const int blocks = 200;
  for (int trial = 0; trial < blocks; ++trial) {
    params.seed = 10'000 + static_cast<std::uint64_t>(trial);
    const Eigen::VectorXd beta = test_helpers::random_beta(params.p, 6);
    const auto [block, truth] = generate_block(params, beta);
    sum += truth.residuals.sum();
    sum_sq += truth.residuals.squaredNorm();
  }
  const double count = static_cast<double>(blocks) * 50.0 * 10.0;
  const double mean = sum / count;
  const double variance = sum_sq / count - mean * mean;
  // Sample variance of N iid normals has standard error delta2 sqrt(2/N).
  const double standard_error = params.delta2 * std::sqrt(2.0 / count);
  CHECK(std::abs(variance - params.delta2) < 3.0 * standard_error);
}

TEST_CASE("rank-one block without noise spans beta") {
  const Eigen::Index p = 30;
  const Eigen::VectorXd beta = test_helpers::random_beta(p, 11);
  const Eigen::VectorXd x = test_helpers::random_beta(6, 12, 0.0, 0.4);
  const Eigen::MatrixXd r = beta * x.transpose();
  // Every column is a multiple of beta.
  for (Eigen::Index t = 0; t < r.cols(); ++t) {
    const Eigen::VectorXd column = r.col(t);
    CHECK((column - x(t) * beta).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
  }
}
