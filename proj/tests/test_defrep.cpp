#include "doctest.h"
#include "oracles.hpp"

#include "quadrep/defrep.hpp"

#include <random>

using namespace quadrep;

namespace {

Lattice std_lattice(std::initializer_list<long> d) {
  Vec v;
  for (long x : d) v.push_back(x);
  return Lattice::standard(QuadSpace(diagonal(v)));
}

// Values of q on the coset modulo p^k, from coordinates mod p^k (q must be p-integral).
std::set<Integer> values_mod(const LatticeCoset& C, long p, long k) {
  std::set<Integer> out;
  long m = 1;
  for (long i = 0; i < k; ++i) m *= p;
  size_t n = C.dim();
  std::vector<long> c(n, 0);
  for (;;) {
    Vec x = C.u0();
    for (size_t i = 0; i < n; ++i) x = x + Rational(c[i]) * C.lattice().basis_vector(i);
    out.insert(mod_rational(C.q(x), m));
    size_t i = 0;
    for (; i < n; ++i) {
      if (++c[i] < m) break;
      c[i] = 0;
    }
    if (i == n) break;
  }
  return out;
}

}  // namespace

TEST_CASE("congruence conditions to a coset") {
  CCInstance cc{std_lattice({1, 1, 1}), {{3, Vec{1, 0, 0}, 1, false}}};
  auto lt = cc_to_lt(cc);
  CHECK(lt.T == std::set<Integer>{3});
  CHECK(lt.C.lattice().contains(Vec{3, 0, 0}));
  CHECK_FALSE(lt.C.lattice().contains(Vec{1, 0, 0}));
  CHECK(lt.C.contains(Vec{1, 0, 0}));
  CHECK(lt.C.contains(Vec{4, 3, -3}));
  CHECK_FALSE(lt.C.contains(Vec{2, 0, 0}));
  CCInstance plain{std_lattice({1, 1, 1}), {{5, Vec{0, 0, 0}, 2, false}}};
  CHECK(conductor_set(cc_to_lt(plain).C).empty());
}

TEST_CASE("coset to congruence conditions and back") {
  LatticeCoset C(std_lattice({1, 1, 3}), Vec{Rational(1, 2), 0, 0});
  LTInstance lt{C, {2, 3}};
  auto ccs = lt_to_cc(lt);
  REQUIRE(!ccs.empty());
  for (long p : {2L, 3L}) {
    long s = std::max(1L, conductor_exponent(C, p));
    // Scale by 4 so that every value is 2-integral.
    auto scaled = [](const LatticeCoset& D) {
      return LatticeCoset(Lattice(QuadSpace(Rational(4) * D.space().gram()), D.lattice().basis()), D.u0());
    };
    auto want = values_mod(scaled(C), p, s + 2);
    std::set<Integer> got;
    for (auto& cc : ccs) {
      auto back = values_mod(scaled(cc_to_lt(cc).C), p, s + 2);
      got.insert(back.begin(), back.end());
    }
    CHECK(got == want);
  }
}

TEST_CASE("almost prime norm vectors") {
  LatticeCoset Z2(std_lattice({1, 1}));
  auto u = almost_prime_norm_vector(Z2, {2}, {{2, Vec{1, 0}}}, Rational(3, 5));
  CHECK(oracle::check_almost_prime(Z2, {2}, {{2, Vec{1, 0}}}, Rational(3, 5), u) == "");
  LatticeCoset Z3(std_lattice({1, 1, 1}));
  auto w = almost_prime_norm_vector(Z3, {2}, {{2, Vec{1, 1, 1}}}, Rational(3, 5));
  CHECK(oracle::check_almost_prime(Z3, {2}, {{2, Vec{1, 1, 1}}}, Rational(3, 5), w) == "");
  CHECK_THROWS(almost_prime_norm_vector(LatticeCoset(std_lattice({1, -1})), {2}, {}, Rational(1, 2)));
  std::mt19937 rng(41);
  for (int i = 0; i < 30; ++i) {
    Mat g = diagonal(Vec{1, long(rng() % 3) + 1, long(rng() % 5) + 1});
    LatticeCoset C(Lattice::standard(QuadSpace(g)));
    std::set<Integer> T{2};
    for (auto& p : bad_primes(C)) T.insert(p);
    std::map<Integer, Vec> tg;
    for (auto& p : T) tg[p] = Vec{long(rng() % 7), long(rng() % 7), 1};
    Rational eps(1, long(rng() % 20) + 2);
    auto r = almost_prime_norm_vector(C, T, tg, eps);
    CHECK(oracle::check_almost_prime(C, T, tg, eps, r) == "");
  }
}

TEST_CASE("associated vectors") {
  Lattice Z3 = std_lattice({1, 1, 1});
  auto a = associated_vector(Vec{1, 0, 0}, Z3, 3, 1);
  CHECK(a.y == Vec{Rational(1, 10), Rational(3, 10), 0});
  CHECK(Z3.space().q(Vec{1, 0, 0} - a.y) == Rational(9, 10));
  CHECK(oracle::check_associated(Vec{1, 0, 0}, Z3, 3, 1, a) == "");
  auto big = associated_vector(Vec{1, 2, 0}, Z3, 5, 6);
  CHECK(oracle::check_associated(Vec{1, 2, 0}, Z3, 5, 6, big) == "");
  // x = 0: allowed only when V_p is isotropic.
  auto zero = associated_vector(Vec{0, 0, 0}, Z3, 3, 1);
  CHECK(oracle::check_associated(Vec{0, 0, 0}, Z3, 3, 1, zero) == "");
  CHECK_THROWS(associated_vector(Vec{0, 0, 0}, std_lattice({1, 1, 7}), 7, 1));
}

TEST_CASE("associated vector postconditions on random inputs") {
  std::mt19937 rng(43);
  int ok = 0;
  for (int i = 0; i < 150; ++i) {
    long p = std::vector<long>{3, 5, 7}[rng() % 3];
    long s = long(rng() % 3) + 1;
    Mat g = diagonal(Vec{long(rng() % 5) + 1, long(rng() % 5) + 1, long(rng() % 7) + 1});
    if (rng() % 2) g[0][1] = g[1][0] = 1;
    if (det(g) == 0) continue;
    Lattice L = Lattice::standard(QuadSpace(g));
    Vec x{long(rng() % 21) - 10, long(rng() % 21) - 10, long(rng() % 21) - 10};
    if (is_zero(x)) continue;
    auto a = associated_vector(x, L, p, s);
    std::string why = oracle::check_associated(x, L, p, s, a);
    CHECK_MESSAGE(why == "", "p=" << p << " s=" << s << " case " << i << ": " << why);
    ok += why.empty();
  }
  CHECK(ok > 100);
}

TEST_CASE("compact covers") {
  CHECK_THROWS(compact_cover(TargetSet::FullCoset, LatticeCoset(std_lattice({1, 1, 1})), 5, 0));
  // Primitive vectors at an anisotropic prime. The full cover is far beyond
  // the budget, so most balls are resolved per query.
  LatticeCoset A(std_lattice({1, 1, 7}));
  auto cov = compact_cover(TargetSet::PrimitiveVectors, A, 7, 1, 3000);
  auto lazy = compact_cover(TargetSet::PrimitiveVectors, A, 7, 1, 0);
  CHECK_FALSE(cov.complete);
  CHECK(lazy.balls.empty());
  std::mt19937 rng(47);
  long m = 7 * 7 * 7 * 7 * 7 * 7;
  int checked = 0;
  for (int i = 0; i < 60; ++i) {
    Vec x{long(rng() % m), long(rng() % m), long(rng() % m)};
    if (coefficient_exponent(x, A.lattice(), 7) != 0) {
      CHECK(cov.ball_of(A, x) == nullptr);
      continue;
    }
    const CoverBall* b = cov.ball_of(A, x);
    REQUIRE(b != nullptr);
    // Same leaf whether or not the eager pass listed it.
    const CoverBall* c = lazy.ball_of(A, x);
    REQUIRE(c != nullptr);
    CHECK(b->depth == c->depth);
    CHECK(b->center == c->center);
    // x lies in the ball and the associated lattice primitively represents q(x) - q(beta).
    for (auto& v : A.lattice().coords(x - b->center)) CHECK(valuation(v, 7) >= b->depth);
    LatticeCoset K(lattice_of(A.space(), b->K));
    CHECK(local_represents(K, 7, A.q(x) - A.q(b->beta), true).verdict == Verdict::Yes);
    ++checked;
  }
  CHECK(checked > 40);
}

TEST_CASE("verify_lt on four squares") {
  LatticeCoset Z4(std_lattice({1, 1, 1, 1}));
  auto r = verify_lt(Z4, {2}, 3000);
  CHECK(r.failures.empty());
  CHECK(r.c_hat == 0);
  CHECK(r.admissible_count > 0);
  LatticeCoset H(std_lattice({1, 1, 1, 1}), Vec{Rational(1, 2), Rational(1, 2), Rational(1, 2), Rational(1, 2)});
  auto h = verify_lt(H, {2}, 500);
  for (auto& f : h.failures) CHECK(f <= h.c_hat);
  CHECK_THROWS(verify_lt(LatticeCoset(std_lattice({1, 1, 1})), {2}, 10));
}
