#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>

#include "mapshrink/anchors.hpp"
#include "mapshrink/estimators.hpp"
#include "mapshrink/portfolio.hpp"

namespace mapshrink {

/// One-shot estimation request on a returns file.
struct EstimateRequest {
  std::string returns_path;
  std::string estimator = "gps";  // pca | gps | maps
  std::string anchors = "q";      // anchor spec, see parse_anchor_spec
  bool has_header = false;
  std::string out_dir = ".";
};

/// What a one-shot estimate produces: the direction, the spectral scalars of
/// the block, the shrinkage diagnostics, and the plug-in minimum-variance
/// weights of the estimated model.
struct EstimateOutput {
  Eigen::Index p = 0;
  Eigen::Index n = 0;
  FactorEstimate factor;
  EstimatorResult result;
  ScalarEstimates scalars;
  PortfolioWeights weights;
};

/// Builds an anchor subspace from a '+'-separated spec. Parts:
///   q              the equal-weight direction
///   partition:FILE normalised indicator vectors of a partition file
///                  (one line per atom, comma-separated zero-based indices)
///   haar:K:SEED    a uniformly random K-dimensional subspace
///   prev:FILE      the leading eigenvector of a previous returns file
///                  (same shape conventions as the main returns file)
/// The union is orthonormalised in spec order. Unknown parts raise
/// ConfigError; file problems raise DataError.
AnchorSubspace parse_anchor_spec(const std::string& spec, Eigen::Index p,
                                 bool prev_has_header = false);

/// Runs the estimator the request names (pca | gps | maps) on an already
/// computed factor estimate of a p-asset block; maps reads request.anchors.
/// Unknown tags raise ConfigError.
EstimatorResult dispatch_estimator(const EstimateRequest& request,
                                   const FactorEstimate& factor,
                                   Eigen::Index p);

/// Loads the returns file, runs the requested estimator, and sizes the
/// plug-in weights. Degenerate shrinkage propagates as
/// DegenerateShrinkageError after the spectral scalars were computed; the CLI
/// reports psi first and then the failure.
EstimateOutput run_estimate(const EstimateRequest& request);

/// The stdout rendering of an estimate comes in two stages so a degenerate
/// shrinkage can still report the spectrum it failed on: first the spectral
/// block (p, n, s2, l2, psi, spike_scale_hat, delta2_hat), then the
/// shrinkage diagnostics (tau when present, reverted for shrinking
/// estimators).
std::string render_spectrum(Eigen::Index p, Eigen::Index n,
                            const FactorEstimate& factor,
                            const ScalarEstimates& scalars);
std::string render_shrinkage(const EstimatorResult& result);
std::string render_estimate(const EstimateOutput& output);

}  // namespace mapshrink
