#include "mapshrink/anchors.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <unordered_map>

#include "mapshrink/errors.hpp"
#include "mapshrink/model.hpp"
#include "mapshrink/rng.hpp"

namespace mapshrink {

namespace {

constexpr double kOrthTol = 1e-10;
constexpr double kNormTol = 1e-12;

}  // namespace

AnchorSubspace::AnchorSubspace(Eigen::MatrixXd basis) : basis_(std::move(basis)) {
  const Eigen::Index p = basis_.rows();
  const Eigen::Index k = basis_.cols();
  if (p < 2) {
    throw Error("AnchorSubspace: ambient dimension must be >= 2, got " +
                std::to_string(p));
  }
  if (k > p - 1) {
    throw Error("AnchorSubspace: dimension " + std::to_string(k) +
                " exceeds the cap p - 1 = " + std::to_string(p - 1));
  }
  for (Eigen::Index j = 0; j < k; ++j) {
    if (std::abs(basis_.col(j).norm() - 1.0) > kNormTol) {
      throw Error("AnchorSubspace: column " + std::to_string(j) + " is not unit length");
    }
    for (Eigen::Index i = 0; i < j; ++i) {
      if (std::abs(basis_.col(i).dot(basis_.col(j))) > kOrthTol) {
        throw Error("AnchorSubspace: columns " + std::to_string(i) + " and " +
                    std::to_string(j) + " are not orthogonal");
      }
    }
  }
}

AnchorSubspace AnchorSubspace::trivial(Eigen::Index p) {
  return AnchorSubspace(Eigen::MatrixXd(p, 0));
}

Eigen::VectorXd AnchorSubspace::project(const Eigen::VectorXd& v) const {
  if (v.size() != basis_.rows()) {
    throw Error("AnchorSubspace::project: vector length " + std::to_string(v.size()) +
                " does not match ambient dimension " + std::to_string(basis_.rows()));
  }
  if (basis_.cols() == 0) {
    return Eigen::VectorXd::Zero(v.size());
  }
  return basis_ * (basis_.transpose() * v);
}

void Partition::validate() const {
  if (p < 2) {
    throw Error("Partition: p must be >= 2, got " + std::to_string(p));
  }
  std::vector<char> seen(static_cast<std::size_t>(p), 0);
  Eigen::Index covered = 0;
  for (const auto& atom : atoms) {
    if (atom.empty()) {
      throw Error("Partition: empty atom");
    }
    for (Eigen::Index idx : atom) {
      if (idx < 0 || idx >= p) {
        throw Error("Partition: index " + std::to_string(idx) + " outside [0, " +
                    std::to_string(p) + ")");
      }
      if (seen[static_cast<std::size_t>(idx)]) {
        throw Error("Partition: index " + std::to_string(idx) + " appears twice");
      }
      seen[static_cast<std::size_t>(idx)] = 1;
      ++covered;
    }
  }
  if (covered != p) {
    throw Error("Partition: atoms cover " + std::to_string(covered) + " of " +
                std::to_string(p) + " indices");
  }
}

bool Partition::is_semi_uniform(double m) const {
  if (atoms.empty()) {
    return false;
  }
  std::size_t largest = 0;
  for (const auto& atom : atoms) {
    largest = std::max(largest, atom.size());
  }
  return static_cast<double>(largest) <=
         m * static_cast<double>(p) / static_cast<double>(atoms.size());
}

AnchorSubspace orthonormalize(const std::vector<Eigen::VectorXd>& vectors,
                              double tol) {
  if (vectors.empty()) {
    throw EmptySpanError("orthonormalize: no input vectors");
  }
  const Eigen::Index p = vectors.front().size();
  std::vector<Eigen::VectorXd> basis;
  basis.reserve(vectors.size());
  for (const auto& v : vectors) {
    if (v.size() != p) {
      throw Error("orthonormalize: input vectors differ in length");
    }
    const double input_norm = v.norm();
    if (input_norm == 0.0) {
      continue;
    }
    Eigen::VectorXd r = v;
    // Two projection sweeps; classical single-sweep Gram-Schmidt loses
    // orthogonality near the rank tolerance.
    for (int sweep = 0; sweep < 2; ++sweep) {
      for (const auto& u : basis) {
        r -= u.dot(r) * u;
      }
    }
    const double residual_norm = r.norm();
    if (residual_norm >= tol * input_norm) {
      basis.push_back(r / residual_norm);
      if (static_cast<Eigen::Index>(basis.size()) > p - 1) {
        throw Error("orthonormalize: span reached the dimension cap p - 1");
      }
    }
  }
  if (basis.empty()) {
    throw EmptySpanError(
        "orthonormalize: every input fell below the rank tolerance");
  }
  Eigen::MatrixXd out(p, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t j = 0; j < basis.size(); ++j) {
    out.col(static_cast<Eigen::Index>(j)) = basis[j];
  }
  return AnchorSubspace(std::move(out));
}

AnchorSubspace partition_subspace(const Partition& partition) {
  partition.validate();
  const Eigen::Index k = static_cast<Eigen::Index>(partition.atoms.size());
  if (k > partition.p - 1) {
    throw Error("partition_subspace: " + std::to_string(k) +
                " atoms span too much of R^" + std::to_string(partition.p) +
                " (at most p - 1 allowed)");
  }
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(partition.p, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const auto& atom = partition.atoms[static_cast<std::size_t>(j)];
    const double value = 1.0 / std::sqrt(static_cast<double>(atom.size()));
    for (Eigen::Index idx : atom) {
      basis(idx, j) = value;
    }
  }
  return AnchorSubspace(std::move(basis));
}

Partition beta_ordered_partition(const Eigen::VectorXd& beta,
                                 Eigen::Index num_atoms) {
  const Eigen::Index p = beta.size();
  if (num_atoms < 1 || num_atoms > p - 1) {
    throw Error("beta_ordered_partition: num_atoms must lie in [1, p - 1], got " +
                std::to_string(num_atoms) + " for p = " + std::to_string(p));
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(p));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&beta](Eigen::Index a, Eigen::Index b) { return beta(a) > beta(b); });

  const Eigen::Index base = p / num_atoms;
  Partition partition;
  partition.p = p;
  partition.atoms.resize(static_cast<std::size_t>(num_atoms));
  Eigen::Index next = 0;
  for (Eigen::Index j = 0; j < num_atoms; ++j) {
    const Eigen::Index take = (j + 1 == num_atoms) ? p - next : base;
    auto& atom = partition.atoms[static_cast<std::size_t>(j)];
    atom.assign(order.begin() + next, order.begin() + next + take);
    next += take;
  }
  partition.validate();
  return partition;
}

Partition partition_from_labels(const std::vector<std::string>& labels) {
  if (labels.size() < 2) {
    throw Error("partition_from_labels: need at least 2 labels");
  }
  Partition partition;
  partition.p = static_cast<Eigen::Index>(labels.size());
  std::unordered_map<std::string, std::size_t> atom_of;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, inserted] = atom_of.try_emplace(labels[i], partition.atoms.size());
    if (inserted) {
      partition.atoms.emplace_back();
    }
    partition.atoms[it->second].push_back(static_cast<Eigen::Index>(i));
  }
  partition.validate();
  return partition;
}

AnchorSubspace haar_subspace(Eigen::Index p, Eigen::Index k,
                             std::uint64_t seed) {
  if (k < 1 || k > p - 1) {
    throw Error("haar_subspace: k must lie in [1, p - 1], got " + std::to_string(k) +
                " for p = " + std::to_string(p));
  }
  for (int attempt = 0; attempt < 2; ++attempt) {
    auto engine = make_engine(stream_key(seed, Stream::haar,
                                         static_cast<std::uint64_t>(attempt)));
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<Eigen::VectorXd> columns;
    columns.reserve(static_cast<std::size_t>(k));
    for (Eigen::Index j = 0; j < k; ++j) {
      Eigen::VectorXd column(p);
      for (Eigen::Index i = 0; i < p; ++i) {
        column(i) = normal(engine);
      }
      columns.push_back(std::move(column));
    }
    AnchorSubspace subspace = orthonormalize(columns);
    if (subspace.dimension() == k) {
      return subspace;
    }
  }
  throw RankDeficientError(
      "haar_subspace: Gaussian draw was rank deficient twice (k = " +
      std::to_string(k) + ", p = " + std::to_string(p) + ")");
}

AnchorSubspace augment_with_q(const AnchorSubspace& subspace) {
  const Eigen::Index p = subspace.ambient_dimension();
  if (subspace.dimension() > p - 2) {
    throw Error("augment_with_q: dimension must be <= p - 2 so the result stays proper");
  }
  std::vector<Eigen::VectorXd> vectors;
  vectors.reserve(static_cast<std::size_t>(subspace.dimension()) + 1);
  for (Eigen::Index j = 0; j < subspace.dimension(); ++j) {
    vectors.push_back(subspace.basis().col(j));
  }
  vectors.push_back(equal_weight_direction(p));
  return orthonormalize(vectors);
}

std::string write_partition(const Partition& partition) {
  partition.validate();
  std::ostringstream out;
  for (const auto& atom : partition.atoms) {
    for (std::size_t i = 0; i < atom.size(); ++i) {
      if (i > 0) {
        out << ',';
      }
      out << atom[i];
    }
    out << '\n';
  }
  return out.str();
}

Partition read_partition(std::istream& in, Eigen::Index p) {
  Partition partition;
  partition.p = p;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) {
      continue;
    }
    std::vector<Eigen::Index> atom;
    std::istringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) {
      try {
        std::size_t used = 0;
        const long long value = std::stoll(field, &used);
        if (used != field.size()) {
          throw std::invalid_argument(field);
        }
        atom.push_back(static_cast<Eigen::Index>(value));
      } catch (const std::exception&) {
        throw DataError("partition line " + std::to_string(line_number) +
                        ": '" + field + "' is not an index");
      }
    }
    partition.atoms.push_back(std::move(atom));
  }
  try {
    partition.validate();
  } catch (const Error& e) {
    throw DataError(std::string("partition file invalid: ") + e.what());
  }
  return partition;
}

}  // namespace mapshrink
