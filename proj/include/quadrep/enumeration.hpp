#pragma once

#include "quadrep/lattice.hpp"

#include <functional>

namespace quadrep {

/// Exact enumeration of vectors of a positive definite coset L + u0 by
/// bounded norm, in integer arithmetic on a pair-reduced basis.
class Enumerator {
 public:
  explicit Enumerator(const LatticeCoset& C);

  /// Visits every x in L + u0 with 0 < q(x) <= bound. Returns false if the
  /// visitor stopped the walk or the node budget ran out.
  bool visit(const Rational& bound, const std::function<bool(const Vec&, const Rational&)>& f) const;
  /// Visits every x in L + u0 with q(x) == alpha.
  bool visit_value(const Rational& alpha, const std::function<bool(const Vec&)>& f) const;
  /// First x with q(x) == alpha accepted by the predicate.
  std::optional<Vec> find(const Rational& alpha,
                          const std::function<bool(const Vec&)>& accept = {}) const;

  /// Columns: reduced basis of L in ambient coordinates.
  const Mat& reduced_basis() const { return basis_; }
  /// Abort walks after this many tree nodes (0 = unlimited).
  void set_node_budget(long nodes) { budget_ = nodes; }
  bool budget_exhausted() const { return exhausted_; }

 private:
  bool walk(const Integer& bound, bool exact,
            const std::function<bool(const IVec&, const Integer&)>& f) const;
  Vec to_ambient(const IVec& z) const;

  size_t n_ = 0;
  Mat basis_;
  Integer scale_;  // q(x) = value / scale_ for x = basis_ * z / d_
  Integer d_;
  IVec residue_;
  std::vector<IMat> forms_;  // projected integer forms, forms_[k] on variables k..n-1
  long budget_ = 0;
  mutable bool exhausted_ = false;
};

/// All x in L with 0 < q(x) <= bound.
std::vector<Vec> shortest_vectors(const Lattice& L, const Rational& bound);

/// Pair reduction of an integral Gram matrix: returns the unimodular transform
/// U (columns are the new basis in old coordinates).
IMat pair_reduce(IMat& gram);

}  // namespace quadrep
