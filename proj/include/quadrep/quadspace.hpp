#pragma once

#include "quadrep/matrix.hpp"

#include <map>

namespace quadrep {

/// Nondegenerate quadratic space (Q^n, q) with q(x) = x^T G x.
class QuadSpace {
 public:
  QuadSpace() = default;
  explicit QuadSpace(Mat gram);

  size_t dim() const { return gram_.size(); }
  const Mat& gram() const { return gram_; }
  Rational q(const Vec& x) const { return quad(gram_, x); }
  Rational b(const Vec& x, const Vec& y) const { return bilinear(gram_, x, y); }
  Rational det() const { return det_; }
  /// Diagonal entries of a fixed rational diagonalisation.
  const Vec& diag() const { return diag_; }
  const Mat& diag_basis() const { return diag_basis_; }
  bool is_positive_definite() const;
  bool is_definite() const;

  /// V orthogonal sum <a>.
  QuadSpace with_extra(const Rational& a) const;

 private:
  Mat gram_;
  Rational det_;
  Vec diag_;
  Mat diag_basis_;
};

struct SpaceInvariants {
  size_t dim = 0;
  Rational det;
  int positive = 0;
  int negative = 0;
  /// Hasse invariants at primes where they may be -1; +1 elsewhere.
  std::map<Integer, int> hasse_bad;

  SquareClass det_class(const Place& v) const { return square_class(det, v); }
  int hasse(const Place& v) const;
  bool operator==(const SpaceInvariants& o) const;
};

/// prod_{i<j} (a_i, a_j)_v for a diagonal form.
int hasse_of_diagonal(const Vec& d, const Place& v);

SpaceInvariants invariants(const QuadSpace& V);
bool is_isotropic(const QuadSpace& V, const Place& v);
bool represents_over_completion(const QuadSpace& V, const Rational& alpha, const Place& v);

}  // namespace quadrep
