#pragma once

#include "quadrep/quadspace.hpp"

#include <array>
#include <optional>
#include <set>

namespace quadrep {

/// Full-rank Z-lattice in a quadratic space, stored with its lower-triangular
/// Hermite basis so that equal lattices have equal representations.
class Lattice {
 public:
  Lattice() = default;
  Lattice(QuadSpace space, const Mat& basis);
  /// Z^n in the given space.
  static Lattice standard(const QuadSpace& space);

  const QuadSpace& space() const { return space_; }
  size_t dim() const { return space_.dim(); }
  /// Columns generate L.
  const Mat& basis() const { return basis_; }
  Vec basis_vector(size_t j) const { return column(basis_, j); }
  /// B^T G B.
  const Mat& gram() const { return gram_; }
  Rational det() const { return det_; }

  Vec coords(const Vec& x) const { return basis_inv_ * x; }
  Vec from_coords(const Vec& c) const { return basis_ * c; }
  bool contains(const Vec& x) const { return quadrep::is_integral(coords(x)); }
  bool contains(const Lattice& m) const;

  /// L + sum Z v_i.
  Lattice sum(const std::vector<Vec>& extra) const;
  Lattice scaled(const Rational& lambda) const;
  Lattice dual() const;
  Lattice intersect(const Lattice& m) const;
  Lattice transformed(const Mat& sigma) const;
  bool is_integral() const;  // gram entries integral

  bool operator==(const Lattice& o) const { return basis_ == o.basis_ && space_.gram() == o.space_.gram(); }

 private:
  QuadSpace space_;
  Mat basis_, basis_inv_, gram_;
  Rational det_;
};

/// Lattice coset L + u0 with u0 reduced to fractional coordinates in [0,1).
class LatticeCoset {
 public:
  LatticeCoset() = default;
  LatticeCoset(Lattice lattice, const Vec& u0);
  explicit LatticeCoset(Lattice lattice);

  const Lattice& lattice() const { return lattice_; }
  const Vec& u0() const { return u0_; }
  size_t dim() const { return lattice_.dim(); }
  const QuadSpace& space() const { return lattice_.space(); }
  Rational q(const Vec& x) const { return lattice_.space().q(x); }
  bool contains(const Vec& x) const { return lattice_.contains(x - u0_); }
  bool is_lattice() const { return is_zero(u0_); }
  /// L + Z u0.
  Lattice span_lattice() const;
  bool operator==(const LatticeCoset& o) const { return lattice_ == o.lattice_ && u0_ == o.u0_; }

 private:
  Lattice lattice_;
  Vec u0_;
};

struct JordanComponent {
  long scale = 0;  // component is p^scale-modular
  size_t rank = 0;
  Mat unit_gram;   // gram / p^scale, p-adic unit determinant
  Mat basis;       // columns in ambient coordinates (Z_(p)-combinations of L)
};

struct JordanData {
  Integer p;
  std::vector<JordanComponent> components;

  bool is_unimodular() const { return components.size() == 1 && components[0].scale == 0; }
  long min_scale() const { return components.front().scale; }
  long max_scale() const { return components.back().scale; }
};

/// Local genus invariants of L_p: odd p (scale, rank, Legendre of unit det);
/// p = 2 the canonical 2-adic symbol (scale, rank, sign, type, oddity).
struct LocalSymbol {
  Integer p;
  std::vector<std::array<long, 5>> entries;
  bool operator==(const LocalSymbol& o) const = default;
  std::string to_string() const;
};

struct GenusSymbol {
  SpaceInvariants space;
  Rational det;
  std::vector<LocalSymbol> local;  // lattice symbols at bad primes
  std::set<Integer> conductor;
  std::vector<LocalSymbol> span_local;  // symbols of L + Z u0 at conductor primes
  std::vector<long> conductor_orders;   // ord_p of [L + Z u0 : L]
  bool operator==(const GenusSymbol& o) const;
};

struct IsometryMatrix {
  Mat sigma;
  bool proper = true;
};

enum class Tri { False = 0, True = 1, Unknown = 2 };

JordanData jordan_decomposition(const Lattice& L, const Integer& p, long precision = 0);
LocalSymbol local_symbol(const Lattice& L, const Integer& p);
/// Minimal e with p^e x in L_p; x is primitive in L_p iff the result is 0.
long coefficient_exponent(const Vec& x, const Lattice& L, const Integer& p);
std::set<Integer> conductor_set(const LatticeCoset& C);
/// Primes where L_p is not unimodular or u0 is not in L_p, plus 2.
std::set<Integer> bad_primes(const LatticeCoset& C);
GenusSymbol genus_symbol(const LatticeCoset& C);
Tri same_genus(const LatticeCoset& A, const LatticeCoset& B);
bool same_lattice_genus(const Lattice& A, const Lattice& B);

/// Reflection tau_z(x) = x - 2<x,z>/q(z) z as a matrix.
Mat reflection(const Mat& gram, const Vec& z);
/// sigma L_p == L_p when sigma has p-integral entries in L-coordinates and unit det.
bool stabilizes_locally(const Lattice& L, const Mat& sigma, const Integer& p);

/// An isometry of L_p (entries correct mod p^precision) carrying x to a
/// multiple of y, or nullopt if the closeness precondition fails.
std::optional<IsometryMatrix> line_transporter(const Lattice& L, const Integer& p, const Vec& x,
                                               const Vec& y, long precision);

}  // namespace quadrep
