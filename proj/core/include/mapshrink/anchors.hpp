#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace mapshrink {

/// A k-dimensional target subspace of R^p held as a p x k matrix with
/// orthonormal columns. k = 0 (the trivial subspace) is allowed; k is capped
/// at p - 1 so the span never absorbs every direction.
class AnchorSubspace {
 public:
  /// Wraps a basis after validating orthonormality (pairwise inner products
  /// below 1e-10, column norms within 1e-12 of 1) and 0 <= k <= p - 1.
  explicit AnchorSubspace(Eigen::MatrixXd basis);

  /// The trivial subspace {0} of R^p.
  static AnchorSubspace trivial(Eigen::Index p);

  Eigen::Index ambient_dimension() const { return basis_.rows(); }
  Eigen::Index dimension() const { return basis_.cols(); }
  const Eigen::MatrixXd& basis() const { return basis_; }

  /// Orthogonal projection of v onto the span.
  Eigen::VectorXd project(const Eigen::VectorXd& v) const;

 private:
  Eigen::MatrixXd basis_;
};

/// A partition of {0, ..., p-1} into disjoint nonempty atoms covering every
/// index.
struct Partition {
  std::vector<std::vector<Eigen::Index>> atoms;
  Eigen::Index p = 0;

  /// Atoms are disjoint, nonempty, and cover {0, ..., p-1}; throws otherwise.
  void validate() const;

  /// Checks max atom size <= m * p / #atoms.
  bool is_semi_uniform(double m) const;
};

/// Builds an orthonormal basis of span(vectors) by modified Gram-Schmidt with
/// one re-orthogonalisation pass. Directions whose residual norm falls below
/// tol * |input| are dropped; retained directions keep input order. Throws
/// EmptySpanError when nothing survives and caps the result at p - 1
/// dimensions.
AnchorSubspace orthonormalize(const std::vector<Eigen::VectorXd>& vectors,
                              double tol = 1e-10);

/// Subspace spanned by the normalised indicator vectors of the partition
/// atoms: v_A(i) = 1_A(i)/sqrt(|A|). The basis is orthonormal by
/// construction; a partition into p singletons is rejected because its span
/// is all of R^p.
AnchorSubspace partition_subspace(const Partition& partition);

/// Partition of {0,...,p-1} into num_atoms contiguous groups of the indices
/// sorted by beta value descending; group size is floor(p/num_atoms) with the
/// remainder appended to the last (lowest-beta) atom. Ties break by index so
/// the result is deterministic.
Partition beta_ordered_partition(const Eigen::VectorXd& beta,
                                 Eigen::Index num_atoms);

/// Groups indices that share a label; atoms are ordered by first appearance
/// of their label.
Partition partition_from_labels(const std::vector<std::string>& labels);

/// Draws a uniformly random k-dimensional subspace: p x k iid standard
/// normals, orthonormalised. A rank-deficient draw (probability zero) is
/// redrawn once; a second failure throws RankDeficientError.
AnchorSubspace haar_subspace(Eigen::Index p, Eigen::Index k,
                             std::uint64_t seed);

/// Extends the span by the equal-weight direction q. Returns the input span
/// unchanged when q already lies in it; requires dimension <= p - 2 so the
/// result stays a proper subspace.
AnchorSubspace augment_with_q(const AnchorSubspace& subspace);

/// Partition serialisation: one line per atom, comma-separated zero-based
/// indices.
std::string write_partition(const Partition& partition);
Partition read_partition(std::istream& in, Eigen::Index p);

}  // namespace mapshrink
