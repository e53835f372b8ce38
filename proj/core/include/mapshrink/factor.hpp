#pragma once

#include <Eigen/Core>

#include "mapshrink/model.hpp"

namespace mapshrink {

/// Leading eigenpair of the sample covariance S = R R'/n together with the
/// spectral scalars the shrinkage estimators consume:
///   h    unit leading eigenvector of S, signed so (h, q) >= 0
///   s2   leading eigenvalue of S
///   l2   bulk level (trace(S) - s2) / (n - 1)
///   psi  sqrt((s2 - l2) / s2), clamped to 0 when the gap is nonpositive
///   phi  unit leading eigenvector of the period-space Gram matrix R'R/n,
///        signed consistently with h (h = R phi / (s sqrt(n)) holds exactly)
///   no_gap  set when s2 <= l2, in which case psi is 0
struct FactorEstimate {
  Eigen::VectorXd h;
  double s2 = 0.0;
  double l2 = 0.0;
  double psi = 0.0;
  Eigen::VectorXd phi;
  bool no_gap = false;
};

/// Computes the leading factor estimate without forming the p x p covariance:
/// the eigensolve runs on the n x n Gram matrix R'R/n and h is lifted as
/// R phi / (s sqrt(n)). Throws DegenerateSpectrumError when the leading
/// eigenvalue is not positive (all-zero returns).
FactorEstimate leading_factor(const ReturnsBlock& block);

}  // namespace mapshrink
