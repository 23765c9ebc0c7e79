#pragma once

#include <gmpxx.h>

#include <climits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace quadrep {

using Integer = mpz_class;
using Rational = mpq_class;

/// Valuation of zero.
inline constexpr long kInfinity = LONG_MAX;

class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

bool is_prime(const Integer& n);
Integer next_prime(const Integer& n);

/// Prime factorisation of |n| (n != 0), ascending, with multiplicity.
std::vector<std::pair<Integer, unsigned>> factorize(const Integer& n);
/// Distinct prime divisors of |n|.
std::vector<Integer> prime_divisors(const Integer& n);

long valuation(const Integer& x, const Integer& p);
long valuation(const Rational& x, const Integer& p);

Integer ipow(const Integer& b, unsigned long e);
Rational rpow(const Rational& b, long e);

/// x mod m in [0, m) for rational x with denominator prime to m.
Integer mod_rational(const Rational& x, const Integer& m);

/// Place of Q: p == 0 is the real place.
struct Place {
  Integer p;

  static Place real() { return Place{0}; }
  static Place finite(const Integer& q);
  bool is_real() const { return p == 0; }
  bool operator==(const Place& o) const { return p == o.p; }
  std::string to_string() const;
};

/// Element of Q_v^x / (Q_v^x)^2.
///
/// Finite odd p: parity in {0,1}, unit in {1,-1} (Legendre symbol).
/// p = 2: parity in {0,1}, unit in {1,3,5,7}.
/// Real: parity 0, unit = sign.
struct SquareClass {
  Place place;
  int parity = 0;
  int unit = 1;

  SquareClass operator*(const SquareClass& o) const;
  bool operator==(const SquareClass& o) const = default;
  bool is_trivial() const { return parity == 0 && unit == 1; }
  /// Coordinates over F_2 (length 2 at odd p, 3 at p = 2, 1 at the real place).
  std::vector<int> bits() const;
  static SquareClass from_bits(const Place& v, const std::vector<int>& b);
  /// A rational representative.
  Rational representative() const;
};

int square_class_rank(const Place& v);
SquareClass square_class(const Rational& x, const Place& v);
bool is_local_square(const Rational& x, const Place& v);
int hilbert_symbol(const Rational& a, const Rational& b, const Place& v);

/// Univariate polynomial with rational coefficients, c[i] the coefficient of t^i.
struct Polynomial {
  std::vector<Rational> c;

  Polynomial() = default;
  explicit Polynomial(std::vector<Rational> coeffs);
  int degree() const { return static_cast<int>(c.size()) - 1; }
  bool is_zero() const { return c.empty(); }
  const Rational& lead() const { return c.back(); }
  Rational operator()(const Rational& t) const;
  Polynomial derivative() const;
  void normalize();
  std::string to_string() const;
};

Polynomial poly_mul(const Polynomial& a, const Polynomial& b);
/// Quotient and remainder over Q.
std::pair<Polynomial, Polynomial> poly_divmod(const Polynomial& a, const Polynomial& b);
Polynomial poly_gcd(Polynomial a, Polynomial b);
/// Primitive integral polynomial with the same roots (positive leading coefficient).
std::vector<Integer> primitive_part(const Polynomial& f);

/// p-adic number p^valuation * unit with unit known mod p^precision.
struct PadicApprox {
  Integer p;
  long valuation = 0;
  Integer unit;
  long precision = 0;

  bool is_zero() const { return valuation == kInfinity; }
  /// A rational with the stated p-adic expansion.
  Rational value() const;
};

/// A root of f in Q_p known to the given absolute precision (integral roots)
/// or nullopt when f certifiably has no root in Q_p.
/// Throws PrecisionError when the residue tree exceeds its depth cap.
std::optional<PadicApprox> hensel_root(const Polynomial& f, const Integer& p, long precision);

/// Square root of a mod p (p odd prime, a a nonzero residue), by Tonelli-Shanks.
std::optional<Integer> sqrt_mod_prime(const Integer& a, const Integer& p);
/// Square root in Z_p of a p-adic unit given as a rational, correct mod p^k (p odd).
std::optional<Integer> sqrt_unit_padic(const Rational& a, const Integer& p, long k);

std::string rational_to_string(const Rational& x);
Rational parse_rational(const std::string& s);

}  // namespace quadrep
