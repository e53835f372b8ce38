// Microbenchmarks of the hot paths: spectral decomposition of a block,
// anchored shrinkage, closed-form weights, and one full simulation trial.
#include <benchmark/benchmark.h>

#include <Eigen/Core>
#include <cstdint>

#include "mapshrink/anchors.hpp"
#include "mapshrink/estimators.hpp"
#include "mapshrink/experiments/config.hpp"
#include "mapshrink/experiments/driver.hpp"
#include "mapshrink/factor.hpp"
#include "mapshrink/model.hpp"
#include "mapshrink/portfolio.hpp"

namespace {

using mapshrink::AnchorSubspace;
using mapshrink::FactorEstimate;
using mapshrink::GenerationParams;
using mapshrink::ReturnsBlock;

ReturnsBlock make_block(Eigen::Index p, Eigen::Index n, std::uint64_t seed) {
  const Eigen::VectorXd beta =
      mapshrink::generate_correlated_betas(p, 1.0, 0.5, 0.0, seed).first;
  GenerationParams params;
  params.p = p;
  params.n = n;
  params.sigma2 = 0.16;
  params.delta2 = 0.25;
  params.seed = seed + 1;
  return mapshrink::generate_block(params, beta).first;
}

void bm_leading_factor(benchmark::State& state) {
  const Eigen::Index p = state.range(0);
  const ReturnsBlock block = make_block(p, 24, 42);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mapshrink::leading_factor(block));
  }
}
BENCHMARK(bm_leading_factor)->Arg(250)->Arg(500)->Arg(1000)->Arg(2000);

void bm_maps_estimator(benchmark::State& state) {
  const Eigen::Index p = state.range(0);
  const ReturnsBlock block = make_block(p, 24, 43);
  const FactorEstimate fe = mapshrink::leading_factor(block);
  const Eigen::Index atoms = state.range(1);
  const Eigen::VectorXd beta =
      mapshrink::generate_correlated_betas(p, 1.0, 0.5, 0.0, 44).first;
  const AnchorSubspace span = mapshrink::partition_subspace(
      mapshrink::beta_ordered_partition(beta, atoms));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mapshrink::maps_estimator(fe, span));
  }
}
BENCHMARK(bm_maps_estimator)->Args({500, 8})->Args({2000, 13});

void bm_min_var_weights(benchmark::State& state) {
  const Eigen::Index p = state.range(0);
  const Eigen::VectorXd beta =
      mapshrink::generate_correlated_betas(p, 1.0, 0.5, 0.0, 45).first;
  const mapshrink::CovarianceModel model(beta.normalized(),
                                         0.16 * beta.squaredNorm(), 0.25);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mapshrink::min_var_weights(model));
  }
}
BENCHMARK(bm_min_var_weights)->Arg(500)->Arg(2000);

void bm_double_trial(benchmark::State& state) {
  mapshrink::ExperimentConfig config;
  config.scenario = mapshrink::Scenario::double_block;
  config.p = state.range(0);
  config.n = 24;
  config.rho_grid = {0.4};
  config.trials = 1;
  config.estimators = {"pca1", "pca2", "gps1", "gps2", "dyn_maps", "beta_ordered"};
  config.master_seed = 46;
  Eigen::Index trial = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mapshrink::run_double_trial(config, 0, trial));
    trial = (trial + 1) % 64;
  }
}
BENCHMARK(bm_double_trial)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
