#include "doctest.h"
#include "oracles.hpp"

#include "quadrep/lattice.hpp"

#include <random>

using namespace quadrep;

namespace {

Lattice std_lattice(std::initializer_list<long> d) {
  Vec v;
  for (long x : d) v.push_back(x);
  return Lattice::standard(QuadSpace(diagonal(v)));
}

}  // namespace

TEST_CASE("Jordan decompositions") {
  auto J = jordan_decomposition(std_lattice({1, 1, 1}), 3);
  CHECK(J.is_unimodular());
  CHECK(J.components[0].rank == 3);
  auto K = jordan_decomposition(std_lattice({1, 1, 9}), 3);
  REQUIRE(K.components.size() == 2);
  CHECK(K.components[0].scale == 0);
  CHECK(K.components[0].rank == 2);
  CHECK(K.components[1].scale == 2);
  CHECK(K.components[1].rank == 1);
  auto H = jordan_decomposition(Lattice::standard(QuadSpace(Mat{{2, 1}, {1, 2}})), 2);
  CHECK(H.is_unimodular());
  CHECK(H.components[0].rank == 2);
}

TEST_CASE("Jordan data is basis independent") {
  std::mt19937 rng(4);
  QuadSpace V(diagonal(Vec{1, 3, 12}));
  for (int i = 0; i < 30; ++i) {
    Mat U = identity(3);
    for (int k = 0; k < 5; ++k) {
      size_t a = rng() % 3, b = rng() % 3;
      long c = long(rng() % 5) - 2;
      if (a != b)
        for (size_t r = 0; r < 3; ++r) U[r][b] += c * U[r][a];
    }
    Lattice L(V, U);
    for (long p : {2L, 3L}) {
      auto A = jordan_decomposition(Lattice::standard(V), p), B = jordan_decomposition(L, p);
      REQUIRE(A.components.size() == B.components.size());
      for (size_t c = 0; c < A.components.size(); ++c) {
        CHECK(A.components[c].scale == B.components[c].scale);
        CHECK(A.components[c].rank == B.components[c].rank);
      }
      CHECK(local_symbol(Lattice::standard(V), p) == local_symbol(L, p));
    }
  }
}

TEST_CASE("coefficient exponents") {
  Lattice L = std_lattice({1, 1, 1});
  CHECK(coefficient_exponent(Vec{1, 0, 0}, L, 5) == 0);
  CHECK(coefficient_exponent(Vec{3, 3, 3}, L, 3) == -1);
  CHECK(coefficient_exponent(Vec{Rational(1, 3), 0, 0}, L, 3) == 1);
  std::mt19937 rng(9);
  for (int i = 0; i < 200; ++i) {
    Vec x{long(rng() % 50) - 25, long(rng() % 50) - 25, long(rng() % 50) + 1};
    Rational lambda(long(rng() % 40) + 1, long(rng() % 12) + 1);
    lambda.canonicalize();
    for (long p : {2L, 3L, 5L})
      CHECK(coefficient_exponent(lambda * x, L, p) == coefficient_exponent(x, L, p) - valuation(lambda, p));
  }
}

TEST_CASE("conductor sets") {
  Lattice L = std_lattice({1, 1, 1});
  CHECK(conductor_set(LatticeCoset(L)).empty());
  CHECK(conductor_set(LatticeCoset(L, Vec{Rational(1, 2), Rational(1, 2), Rational(1, 2)})) == std::set<Integer>{2});
  CHECK(conductor_set(LatticeCoset(L, Vec{Rational(1, 6), 0, 0})) == std::set<Integer>{2, 3});
}

TEST_CASE("same genus") {
  LatticeCoset A(std_lattice({1, 1, 1}));
  CHECK(same_genus(A, A) == Tri::True);
  CHECK(same_genus(A, LatticeCoset(std_lattice({1, 1, 9}))) == Tri::False);
  CHECK(same_genus(LatticeCoset(std_lattice({1, 1})), LatticeCoset(Lattice::standard(QuadSpace(Mat{{2, 1}, {1, 1}})))) ==
        Tri::True);
  // x^2+y^2+16z^2 and x^2+4y^2+4z^2 share determinant but not the genus.
  CHECK(same_genus(LatticeCoset(std_lattice({1, 1, 16})), LatticeCoset(std_lattice({1, 4, 4}))) == Tri::False);
}

TEST_CASE("same genus is an equivalence relation") {
  std::mt19937 rng(12);
  std::vector<LatticeCoset> pool;
  for (int i = 0; i < 12; ++i) {
    Mat g = diagonal(Vec{long(rng() % 3) + 1, long(rng() % 3) + 1, long(rng() % 4) + 1});
    g[0][1] = g[1][0] = long(rng() % 2);
    if (det(g) <= 0) continue;
    pool.emplace_back(Lattice::standard(QuadSpace(g)));
  }
  for (auto& a : pool)
    for (auto& b : pool) {
      Tri ab = same_genus(a, b), ba = same_genus(b, a);
      CHECK(ab == ba);
      for (auto& c : pool)
        if (ab == Tri::True && same_genus(b, c) == Tri::True) CHECK(same_genus(a, c) != Tri::False);
    }
}

TEST_CASE("genus agrees with the value-profile oracle on small determinants") {
  for (long d : {4L, 5L, 8L, 9L, 12L}) {
    auto tc = oracle::ternary_classes(d);
    for (size_t i = 0; i < tc.forms.size(); ++i)
      for (size_t j = 0; j < tc.forms.size(); ++j) {
        bool same_profile = false;
        for (auto& g : tc.genera)
          same_profile = same_profile || (std::count(g.begin(), g.end(), i) && std::count(g.begin(), g.end(), j));
        Lattice A = Lattice::standard(QuadSpace(oracle::to_mat(tc.forms[i])));
        Lattice B = Lattice::standard(QuadSpace(oracle::to_mat(tc.forms[j])));
        CHECK(same_lattice_genus(A, B) == same_profile);
      }
  }
}

TEST_CASE("line transporter") {
  Lattice L = std_lattice({1, 1, 1});
  Vec x{1, 0, 0};
  auto id = line_transporter(L, 5, x, x, 4);
  REQUIRE(id);
  CHECK(id->sigma * x == x);
  // y == x mod 5 L_5 with q(y)/q(x) = 26 a unit square class times... checked a posteriori.
  Vec y{1, 5, 0};
  auto s = line_transporter(L, 5, x, y, 4);
  if (s) {
    CHECK(stabilizes_locally(L, s->sigma, 5));
    Vec img = s->sigma * x;
    // img is a multiple of y modulo 5^4.
    Rational ratio = img[0] / y[0];
    Vec diff = img - ratio * y;
    for (auto& c : diff) CHECK(valuation(c, 5) >= 4);
  }
  // q(0,1,1) = 2 is not a square times q(x) = 1 at 5, so no isometry carries the lines.
  CHECK_FALSE(line_transporter(L, 5, x, Vec{0, 1, 1}, 4));
}
