#include "mapshrink/factor.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "mapshrink/errors.hpp"

namespace mapshrink {

FactorEstimate leading_factor(const ReturnsBlock& block) {
  const Eigen::Index p = block.p();
  const Eigen::Index n = block.n();
  if (p < 2 || n < 2) {
    throw Error("leading_factor: need p >= 2 and n >= 2, got p=" +
                std::to_string(p) + " n=" + std::to_string(n));
  }
  const Eigen::MatrixXd& r = block.data;
  const double nd = static_cast<double>(n);

  // Period-space Gram matrix; its nonzero spectrum equals that of R R'/n.
  const Eigen::MatrixXd gram = r.transpose() * r / nd;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
  if (solver.info() != Eigen::Success) {
    throw Error("leading_factor: eigensolve on the Gram matrix failed");
  }

  FactorEstimate fe;
  fe.s2 = solver.eigenvalues()(n - 1);
  if (fe.s2 <= 0.0) {
    throw DegenerateSpectrumError(
        "leading_factor: sample covariance has no positive eigenvalue "
        "(returns are identically zero)");
  }
  fe.phi = solver.eigenvectors().col(n - 1);

  const double trace_s = r.squaredNorm() / nd;
  fe.l2 = std::max(0.0, (trace_s - fe.s2) / (nd - 1.0));
  if (fe.s2 - fe.l2 <= 0.0) {
    fe.no_gap = true;
    fe.psi = 0.0;
  } else {
    fe.psi = std::sqrt((fe.s2 - fe.l2) / fe.s2);
  }

  // Lift to asset space: |R phi|^2 = n s2, so h below has unit norm and
  // satisfies S h = s2 h exactly.
  fe.h = r * fe.phi / (std::sqrt(fe.s2) * std::sqrt(nd));

  const double mean_h = fe.h.mean();
  if (mean_h < 0.0) {
    fe.h = -fe.h;
    fe.phi = -fe.phi;
  } else if (mean_h == 0.0) {
    for (Eigen::Index i = 0; i < p; ++i) {
      if (fe.h(i) != 0.0) {
        if (fe.h(i) < 0.0) {
          fe.h = -fe.h;
          fe.phi = -fe.phi;
        }
        break;
      }
    }
  }
  return fe;
}

}  // namespace mapshrink
