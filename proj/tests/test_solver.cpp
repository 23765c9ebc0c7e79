#include "doctest.h"
#include "oracles.hpp"

#include "quadrep/solver.hpp"

#include <random>

using namespace quadrep;

namespace {

WatsonInstance watson(const oracle::IntMat& g, std::vector<long> poly) {
  Vec c(poly.begin(), poly.end());
  return {QuadSpace(oracle::to_mat(g)), Polynomial(c), Domain::Integers};
}

const oracle::IntMat kI3{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
const oracle::IntMat kI4{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};

}  // namespace

TEST_CASE("dirichlet alpha") {
  TargetMap t3{{3, {1, 2}}};
  auto a = dirichlet_alpha(t3, 1);
  CHECK(oracle::check_dirichlet(t3, 1, a) == "");
  CHECK(a.alpha == 19);
  auto neg = dirichlet_alpha({}, -1);
  CHECK(oracle::check_dirichlet({}, -1, neg) == "");
  CHECK(neg.alpha == -Rational(neg.v0));
  TargetMap t25{{2, {1, 3}}, {5, PadicTarget::from_epsilon(Rational(1, 5), 5, Rational(1, 25))}};
  CHECK(oracle::check_dirichlet(t25, 1, dirichlet_alpha(t25, 1)) == "");
}

TEST_CASE("dirichlet and shifted alpha pass their validators") {
  std::mt19937 rng(31);
  const long ps[] = {2, 3, 5, 7, 11};
  for (int i = 0; i < 200; ++i) {
    TargetMap tm;
    for (long p : ps)
      if (rng() % 3 == 0) {
        Rational v(long(rng() % 200) - 100, long(std::vector<long>{1, p, p * p}[rng() % 3]));
        v.canonicalize();
        tm[p] = {v, long(rng() % 3) + 1 + std::max(0L, valuation(v, p))};
      }
    int sign = rng() % 2 ? 1 : -1;
    auto d = dirichlet_alpha(tm, sign);
    CHECK_MESSAGE(oracle::check_dirichlet(tm, sign, d) == "", "case " << i);
    Rational C(long(rng() % 100000) + 1);
    CHECK_MESSAGE(oracle::check_shifted(tm, sign, C, shifted_alpha(tm, sign, C)) == "", "case " << i);
  }
  TargetMap t27{{3, {2, 3}}};
  CHECK(oracle::check_shifted(t27, 1, 10000, shifted_alpha(t27, 1, 10000)) == "");
  TargetMap t2{{2, PadicTarget::from_epsilon(Rational(1, 2), 2, Rational(1, 8))}};
  Rational h = shifted_alpha(t2, -1, 100);
  CHECK(oracle::check_shifted(t2, -1, 100, h) == "");
  CHECK(h.get_den() == 2);
  CHECK(shifted_alpha({}, 1, 1000000) > 1000000);
}

TEST_CASE("almost all p roots") {
  CHECK(almost_all_p_root(Polynomial(Vec{-4, 1})).verdict == Verdict::Yes);
  auto r2 = almost_all_p_root(Polynomial(Vec{-2, 0, 1}));
  CHECK(r2.verdict == Verdict::No);
  CHECK(r2.primes_without_root > 0);
  // (t^2-2)(t^2-3)(t^2-6)
  Polynomial f = poly_mul(poly_mul(Polynomial(Vec{-2, 0, 1}), Polynomial(Vec{-3, 0, 1})), Polynomial(Vec{-6, 0, 1}));
  auto r3 = almost_all_p_root(f);
  CHECK(r3.verdict == Verdict::Yes);
  // Sampling oracle: every odd prime outside {3} up to 1000 has a root mod p.
  for (long p = 5; p < 1000; p += 2) {
    bool prime = true;
    for (long d = 3; d * d <= p; d += 2) prime = prime && p % d != 0;
    if (prime) CHECK(!oracle::roots_mod(f, p, 1).empty());
  }
}

TEST_CASE("Watson examples") {
  auto W = watson(kI3, {7, 8});
  auto v = decide_watson(W);
  CHECK(v.status == SolverStatus::LocallyObstructed);
  REQUIRE(v.certificate);
  CHECK(v.certificate->place == Place::finite(2));
  CHECK(v.certificate->exponent == 3);
  CHECK(oracle::no_solution_mod(kI3, {7, 8}, 2, 3));
  CHECK(oracle::watson_solutions(kI3, {7, 8}, 6, 6).empty());
  CHECK(recheck_certificate(W, *v.certificate) == true);

  auto s = decide_watson(watson(kI3, {7, 0, 1}));
  CHECK(s.status == SolverStatus::Solvable);
  REQUIRE(s.witness);
  CHECK(check_witness(watson(kI3, {7, 0, 1}), *s.witness));

  auto f = decide_watson(watson(kI4, {0, 1}));
  CHECK(f.status == SolverStatus::Solvable);
  REQUIRE(f.witness);
  CHECK(f.witness->t == 0);
}

TEST_CASE("constant polynomials on definite forms") {
  // Locally represented everywhere, yet 5 is not a value of the form.
  oracle::IntMat g{{9, 0, 0, 0}, {0, 8, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 7}};
  CHECK(oracle::watson_solutions(g, {5}, 3, 0).empty());
  auto v = decide_watson(watson(g, {5}));
  CHECK(v.status == SolverStatus::Unsolvable);
  CHECK_FALSE(v.witness_pending);
  auto w = decide_watson(watson(g, {16}));
  CHECK(w.status == SolverStatus::Solvable);
  REQUIRE(w.witness);
  CHECK(check_witness(watson(g, {16}), *w.witness));
}

TEST_CASE("brute force search") {
  auto sols = brute_force_search(watson(kI3, {0, 1}), 4, 10);
  std::set<long> ts;
  for (auto& w : sols) ts.insert(Rational(w.t).get_num().get_si());
  CHECK(ts == std::set<long>{0, 1, 2, 3, 4, 5, 6, 8, 9, 10});
  CHECK(brute_force_search(watson(kI3, {7, 8}), 5, 5).empty());
  auto neg = brute_force_search(watson({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, {0, 0, -1}), 3, 3);
  REQUIRE(neg.size() == 1);
  CHECK(neg[0].t == 0);
}

TEST_CASE("soundness on random quaternary instances") {
  std::mt19937 rng(17);
  for (int i = 0; i < 10; ++i) {
    oracle::IntMat g(4, std::vector<long>(4, 0));
    for (int k = 0; k < 4; ++k) g[k][k] = long(rng() % 9) + 1;
    std::vector<long> poly{long(rng() % 19) - 9, long(rng() % 19) - 9, long(rng() % 9) + 1};
    auto W = watson(g, poly);
    auto v = decide_watson(W);
    if (v.status == SolverStatus::Solvable && v.witness) CHECK(check_witness(W, *v.witness));
    if (v.status == SolverStatus::LocallyObstructed) {
      REQUIRE(v.certificate);
      CHECK(recheck_certificate(W, *v.certificate) != false);
      CHECK(oracle::watson_solutions(g, poly, 4, 6).empty());
    }
  }
}

TEST_CASE("input validation") {
  CHECK_THROWS(decide_watson(watson({{1, 0}, {0, 1}}, {1})));
}
