#include "mapshrink/estimators.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "mapshrink/errors.hpp"

namespace mapshrink {

namespace {

constexpr double kOrthTol = 1e-10;
constexpr double kPsiTol = 1e-12;
constexpr double kCombinationTol = 1e-12;

EstimatorResult shrink_toward(const FactorEstimate& fe,
                              const AnchorSubspace& target,
                              EstimatorMethod method) {
  if (target.ambient_dimension() != fe.h.size()) {
    throw Error("maps_estimator: anchor subspace lives in R^" +
                std::to_string(target.ambient_dimension()) + " but h lives in R^" +
                std::to_string(fe.h.size()));
  }
  const Eigen::VectorXd m = target.project(fe.h);
  const double m_norm = m.norm();
  if (m_norm < kOrthTol) {
    return EstimatorResult{fe.h, method, std::nullopt, true};
  }
  if (fe.psi >= 1.0 - kPsiTol) {
    throw DegenerateShrinkageError(
        "maps_estimator: psi has reached 1 (no bulk level below the spike); "
        "the shrinkage weight is undefined");
  }
  const double psi2 = fe.psi * fe.psi;
  const double tau = (psi2 - m_norm * m_norm) / (1.0 - psi2);
  const Eigen::VectorXd combination = tau * fe.h + m;
  const double combination_norm = combination.norm();
  if (combination_norm < kCombinationTol) {
    throw DegenerateShrinkageError(
        "maps_estimator: tau h + proj(h) is numerically zero (h lies inside "
        "the anchor span)");
  }
  return EstimatorResult{combination / combination_norm, method, tau, false};
}

}  // namespace

EstimatorResult pca_estimator(const ReturnsBlock& block) {
  FactorEstimate fe = leading_factor(block);
  return EstimatorResult{std::move(fe.h), EstimatorMethod::pca, std::nullopt, false};
}

EstimatorResult maps_estimator(const FactorEstimate& fe,
                               const AnchorSubspace& target) {
  return shrink_toward(fe, target, EstimatorMethod::maps);
}

EstimatorResult gps_estimator(const FactorEstimate& fe) {
  const Eigen::Index p = fe.h.size();
  Eigen::MatrixXd basis(p, 1);
  basis.col(0) = equal_weight_direction(p);
  return shrink_toward(fe, AnchorSubspace(std::move(basis)), EstimatorMethod::gps);
}

EstimatorResult oracle_maps(const Eigen::VectorXd& h, const Eigen::VectorXd& b,
                            const AnchorSubspace& target) {
  if (target.ambient_dimension() != h.size() || b.size() != h.size()) {
    throw Error("oracle_maps: dimension mismatch between h, b, and the anchor span");
  }
  std::vector<Eigen::VectorXd> vectors;
  vectors.reserve(static_cast<std::size_t>(target.dimension()) + 1);
  for (Eigen::Index j = 0; j < target.dimension(); ++j) {
    vectors.push_back(target.basis().col(j));
  }
  vectors.push_back(h);
  const AnchorSubspace augmented = orthonormalize(vectors);
  const Eigen::VectorXd projection = augmented.project(b);
  const double norm = projection.norm();
  if (norm < kCombinationTol) {
    throw DegenerateProjectionError(
        "oracle_maps: b is numerically orthogonal to span(L + {h})");
  }
  return EstimatorResult{projection / norm, EstimatorMethod::oracle, std::nullopt, false};
}

EstimatorResult dynamic_maps(const ReturnsBlock& previous,
                             const ReturnsBlock& current,
                             PsiSource psi_source) {
  if (previous.p() != current.p()) {
    throw Error("dynamic_maps: blocks disagree on p (" + std::to_string(previous.p()) +
                " vs " + std::to_string(current.p()) + ")");
  }
  const FactorEstimate previous_fe = leading_factor(previous);
  FactorEstimate current_fe = leading_factor(current);

  std::vector<Eigen::VectorXd> vectors;
  vectors.push_back(previous_fe.h);
  vectors.push_back(equal_weight_direction(current.p()));
  const AnchorSubspace target = orthonormalize(vectors);

  if (psi_source == PsiSource::double_block) {
    Eigen::MatrixXd both(current.p(), previous.n() + current.n());
    both << previous.data, current.data;
    current_fe.psi = leading_factor(ReturnsBlock{std::move(both)}).psi;
  }
  return shrink_toward(current_fe, target, EstimatorMethod::dynamic);
}

}  // namespace mapshrink
