#include "mapshrink/estimate.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include "mapshrink/errors.hpp"
#include "mapshrink/experiments/io.hpp"
#include "mapshrink/factor.hpp"

namespace mapshrink {

namespace {

std::vector<std::string> split(const std::string& text, char separator) {
  std::vector<std::string> parts;
  std::istringstream in(text);
  std::string part;
  while (std::getline(in, part, separator)) {
    parts.push_back(part);
  }
  return parts;
}

AnchorSubspace parse_anchor_part(const std::string& part, Eigen::Index p,
                                 bool prev_has_header) {
  if (part == "q") {
    Eigen::MatrixXd basis(p, 1);
    basis.col(0) = equal_weight_direction(p);
    return AnchorSubspace(std::move(basis));
  }
  const auto pieces = split(part, ':');
  if (pieces.size() == 2 && pieces[0] == "partition") {
    std::ifstream in(pieces[1]);
    if (!in) {
      throw DataError("anchor spec: cannot open partition file '" + pieces[1] + "'");
    }
    return partition_subspace(read_partition(in, p));
  }
  if (pieces.size() == 3 && pieces[0] == "haar") {
    Eigen::Index k = 0;
    std::uint64_t seed = 0;
    try {
      k = static_cast<Eigen::Index>(std::stoll(pieces[1]));
      seed = std::stoull(pieces[2]);
    } catch (const std::exception&) {
      throw ConfigError("anchor spec: '" + part + "' is not haar:K:SEED with "
                        "integer K and SEED");
    }
    return haar_subspace(p, k, seed);
  }
  if (pieces.size() == 2 && pieces[0] == "prev") {
    const Eigen::MatrixXd returns = read_returns_csv(pieces[1], prev_has_header);
    if (returns.rows() != p) {
      throw DataError("anchor spec: previous returns '" + pieces[1] + "' cover " +
                      std::to_string(returns.rows()) + " assets, expected " +
                      std::to_string(p));
    }
    Eigen::MatrixXd basis(p, 1);
    basis.col(0) = leading_factor(ReturnsBlock{returns}).h;
    return AnchorSubspace(std::move(basis));
  }
  throw ConfigError("anchor spec: unknown part '" + part + "' (expected q, "
                    "partition:FILE, haar:K:SEED, or prev:FILE)");
}

}  // namespace

AnchorSubspace parse_anchor_spec(const std::string& spec, Eigen::Index p,
                                 bool prev_has_header) {
  if (spec.empty()) {
    throw ConfigError("anchor spec is empty; expected q, partition:FILE, "
                      "haar:K:SEED, or prev:FILE joined by '+'");
  }
  std::vector<AnchorSubspace> spans;
  for (const auto& part : split(spec, '+')) {
    spans.push_back(parse_anchor_part(part, p, prev_has_header));
  }
  // Each part is orthonormal on its own; Gram-Schmidt is only needed to merge
  // several parts, and skipping it for one part keeps that span bit-exact.
  if (spans.size() == 1) {
    return std::move(spans.front());
  }
  std::vector<Eigen::VectorXd> vectors;
  for (const auto& span : spans) {
    for (Eigen::Index j = 0; j < span.dimension(); ++j) {
      vectors.push_back(span.basis().col(j));
    }
  }
  return orthonormalize(vectors);
}

EstimatorResult dispatch_estimator(const EstimateRequest& request,
                                   const FactorEstimate& factor,
                                   Eigen::Index p) {
  if (request.estimator == "pca") {
    return EstimatorResult{factor.h, EstimatorMethod::pca, std::nullopt, false};
  }
  if (request.estimator == "gps") {
    return gps_estimator(factor);
  }
  if (request.estimator == "maps") {
    const AnchorSubspace target =
        parse_anchor_spec(request.anchors, p, request.has_header);
    return maps_estimator(factor, target);
  }
  throw ConfigError("estimate: unknown estimator '" + request.estimator +
                    "' (expected pca, gps, or maps)");
}

EstimateOutput run_estimate(const EstimateRequest& request) {
  EstimateOutput output;
  const Eigen::MatrixXd returns =
      read_returns_csv(request.returns_path, request.has_header);
  output.p = returns.rows();
  output.n = returns.cols();
  output.factor = leading_factor(ReturnsBlock{returns});
  output.scalars = scalar_estimates(output.factor, output.n, output.p);
  output.result = dispatch_estimator(request, output.factor, output.p);

  const CovarianceModel estimated(output.result.h_hat, output.scalars.spike_scale,
                                  output.scalars.delta2);
  output.weights = min_var_weights(estimated);
  return output;
}

std::string render_spectrum(Eigen::Index p, Eigen::Index n,
                            const FactorEstimate& factor,
                            const ScalarEstimates& scalars) {
  std::ostringstream out;
  out << "p=" << p << '\n'
      << "n=" << n << '\n'
      << "s2=" << format_double(factor.s2) << '\n'
      << "l2=" << format_double(factor.l2) << '\n'
      << "psi=" << format_double(factor.psi) << '\n'
      << "spike_scale_hat=" << format_double(scalars.spike_scale) << '\n'
      << "delta2_hat=" << format_double(scalars.delta2) << '\n';
  return out.str();
}

std::string render_shrinkage(const EstimatorResult& result) {
  std::ostringstream out;
  if (result.tau.has_value()) {
    out << "tau=" << format_double(*result.tau) << '\n';
  }
  if (result.method != EstimatorMethod::pca) {
    out << "reverted=" << (result.reverted ? "true" : "false") << '\n';
  }
  return out.str();
}

std::string render_estimate(const EstimateOutput& output) {
  return render_spectrum(output.p, output.n, output.factor, output.scalars) +
         render_shrinkage(output.result);
}

}  // namespace mapshrink
