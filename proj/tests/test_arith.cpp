#include "doctest.h"
#include "oracles.hpp"

#include "quadrep/arith.hpp"

#include <random>

using namespace quadrep;

TEST_CASE("valuation") {
  CHECK(valuation(Integer(18), 3) == 2);
  CHECK(valuation(Integer(0), 5) == kInfinity);
  CHECK(valuation(Rational(3, 4), 2) == -2);
  CHECK(valuation(Rational(-250, 7), 5) == 3);
}

TEST_CASE("primality and factorisation") {
  for (long n = 2; n < 2000; ++n) {
    bool p = true;
    for (long d = 2; d * d <= n; ++d) p = p && n % d != 0;
    CHECK(is_prime(n) == p);
  }
  CHECK(is_prime(Integer("170141183460469231731687303715884105727")));
  CHECK_FALSE(is_prime(Integer("3215031751")));  // strong pseudoprime to bases 2,3,5,7
  auto f = factorize(Integer(-360));
  REQUIRE(f.size() == 3);
  CHECK(f[0] == std::pair<Integer, unsigned>{2, 3});
  CHECK(f[1] == std::pair<Integer, unsigned>{3, 2});
  CHECK(f[2] == std::pair<Integer, unsigned>{5, 1});
  Integer n = Integer(1000003) * Integer(999983) * 12;
  Integer back = 1;
  for (auto& [p, e] : factorize(n)) {
    CHECK(is_prime(p));
    back *= ipow(p, e);
  }
  CHECK(back == n);
  CHECK(next_prime(Integer(24)) == 29);
}

TEST_CASE("square classes") {
  auto c8 = square_class(8, Place::finite(2));
  CHECK(c8.parity == 1);
  CHECK(c8.unit == 1);
  auto c18 = square_class(18, Place::finite(3));
  CHECK(c18.parity == 0);
  CHECK(c18.unit == -1);  // 2 is not a square mod 3
  CHECK(square_class(-5, Place::real()).unit == -1);
  CHECK(is_local_square(Rational(17), Place::finite(2)));
  CHECK_FALSE(is_local_square(Rational(5), Place::finite(2)));
  CHECK(is_local_square(Rational(9, 4), Place::finite(7)));
}

TEST_CASE("square_class is multiplicative") {
  std::mt19937 rng(1);
  std::uniform_int_distribution<long> num(-2000, 2000), den(1, 50);
  for (long p : {0L, 2L, 3L, 5L, 7L, 11L}) {
    Place v = p == 0 ? Place::real() : Place::finite(p);
    for (int i = 0; i < 1000; ++i) {
      Rational x(num(rng), den(rng)), y(num(rng), den(rng));
      if (x == 0 || y == 0) continue;
      x.canonicalize();
      y.canonicalize();
      CHECK(square_class(x, v) * square_class(y, v) == square_class(x * y, v));
    }
  }
}

TEST_CASE("Hilbert symbols: examples") {
  CHECK(hilbert_symbol(1, 7, Place::finite(3)) == 1);
  CHECK(hilbert_symbol(-1, -1, Place::real()) == -1);
  CHECK(hilbert_symbol(-1, -1, Place::finite(2)) == -1);
  CHECK(hilbert_symbol(2, 5, Place::finite(5)) == -1);
  CHECK(oracle::hilbert_by_congruence(2, 5, 5) == -1);
}

TEST_CASE("Hilbert symbols agree with the congruence oracle and reciprocity holds") {
  std::mt19937 rng(7);
  const long ps[] = {2, 3, 5, 7, 11, 13};
  auto draw = [&] {
    Integer n = (rng() % 2) ? 1 : -1, d = 1;
    for (int i = 0; i < 3; ++i) {
      n *= ps[rng() % 6];
      if (rng() % 3 == 0) d *= ps[rng() % 6];
    }
    return Rational(n, d);
  };
  for (int i = 0; i < 200; ++i) {
    Rational a = draw(), b = draw();
    a.canonicalize();
    b.canonicalize();
    int prod = hilbert_symbol(a, b, Place::real());
    CHECK(prod == oracle::hilbert_real(a, b));
    for (long p : ps) {
      int h = hilbert_symbol(a, b, Place::finite(p));
      CHECK(h == oracle::hilbert_by_congruence(a, b, p));
      prod *= h;
    }
    CHECK(prod == 1);
  }
}

TEST_CASE("hensel roots") {
  Polynomial f(Vec{-2, 0, 1});
  auto r = hensel_root(f, 7, 3);
  REQUIRE(r);
  CHECK(valuation(f(r->value()), 7) >= 3);
  CHECK_FALSE(hensel_root(f, 5, 4));
  auto lin = hensel_root(Polynomial(Vec{-4, 1}), 3, 2);
  REQUIRE(lin);
  CHECK(lin->value() == 4);
  // Output precision against residue roots by exhaustion.
  std::mt19937 rng(3);
  for (int i = 0; i < 100; ++i) {
    Vec c{Rational(long(rng() % 19) - 9), Rational(long(rng() % 19) - 9), Rational(1)};
    Polynomial g(c);
    for (long p : {3L, 5L, 7L}) {
      auto root = hensel_root(g, p, 4);
      if (root) CHECK(valuation(g(root->value()), p) >= 4);
      if (oracle::roots_mod(g, p, 5).empty()) CHECK_FALSE(root);
    }
  }
}

TEST_CASE("rational strings round trip") {
  for (auto s : {"0", "-7", "3/4", "-22/7"}) CHECK(rational_to_string(parse_rational(s)) == s);
  CHECK(parse_rational("6/8") == Rational(3, 4));
  CHECK_THROWS(parse_rational("1/0"));
  CHECK_THROWS(parse_rational("x"));
}
