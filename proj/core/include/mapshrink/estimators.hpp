#pragma once

#include <Eigen/Core>
#include <optional>

#include "mapshrink/anchors.hpp"
#include "mapshrink/factor.hpp"
#include "mapshrink/model.hpp"

namespace mapshrink {

enum class EstimatorMethod { pca, gps, maps, oracle, dynamic };

/// Which block's spectrum supplies psi when an estimator spans two blocks.
enum class PsiSource { current, double_block };

/// A unit direction estimate of the normalised beta vector. tau is the
/// shrinkage weight when one was computed; reverted marks the fallback to the
/// raw eigenvector when the anchor span carried no component of h.
struct EstimatorResult {
  Eigen::VectorXd h_hat;
  EstimatorMethod method = EstimatorMethod::pca;
  std::optional<double> tau;
  bool reverted = false;
};

/// Raw principal-component estimate: the leading sample eigenvector.
EstimatorResult pca_estimator(const ReturnsBlock& block);

/// Anchored shrinkage of the leading eigenvector toward a target subspace L:
///   m = proj_L(h), tau = (psi^2 - |m|^2) / (1 - psi^2),
///   h_hat = (tau h + m) / |tau h + m|.
/// Negative tau is legitimate (|m| can exceed psi). Falls back to h
/// (reverted = true) when |m| < 1e-10; throws DegenerateShrinkageError when
/// psi >= 1 - 1e-12 or when tau h + m is numerically zero (h inside L).
EstimatorResult maps_estimator(const FactorEstimate& fe,
                               const AnchorSubspace& target);

/// Shrinkage toward the equal-weight direction: maps_estimator with
/// L = span{q}.
EstimatorResult gps_estimator(const FactorEstimate& fe);

/// Population-side reference direction: the normalised projection of the true
/// unit beta b onto span(L + {h}). Throws DegenerateProjectionError when that
/// projection is numerically zero.
EstimatorResult oracle_maps(const Eigen::VectorXd& h, const Eigen::VectorXd& b,
                            const AnchorSubspace& target);

/// Two-block estimator: shrinks the current block's leading eigenvector
/// toward span{h_prev, q} where h_prev is the previous block's leading
/// eigenvector. psi comes from the current block by default, or from the
/// concatenated double block when psi_source is double_block. Feeding the
/// same block twice puts h inside the span and raises
/// DegenerateShrinkageError.
EstimatorResult dynamic_maps(const ReturnsBlock& previous,
                             const ReturnsBlock& current,
                             PsiSource psi_source = PsiSource::current);

}  // namespace mapshrink
