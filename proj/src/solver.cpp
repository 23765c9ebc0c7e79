#include "quadrep/solver.hpp"

#include "quadrep/enumeration.hpp"

#include <algorithm>
#include <cmath>
#include <future>

namespace quadrep {

namespace {

using IPoly = std::vector<Integer>;  // c[i] coefficient of t^i

Integer eval(const IPoly& f, const Integer& t) {
  Integer r = 0;
  for (size_t i = f.size(); i-- > 0;) r = r * t + f[i];
  return r;
}

Integer mod_pos(const Integer& a, const Integer& m) {
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

Polynomial to_poly(const IPoly& f) {
  std::vector<Rational> c(f.begin(), f.end());
  return Polynomial(c);
}

std::vector<Integer> positive_divisors(const Integer& n) {
  std::vector<Integer> out{1};
  for (auto [p, e] : factorize(n)) {
    size_t m = out.size();
    Integer pk = 1;
    for (unsigned k = 1; k <= e; ++k) {
      pk *= p;
      for (size_t i = 0; i < m; ++i) out.push_back(out[i] * pk);
    }
  }
  return out;
}

/// Primitive integral factor of F of exact degree d, by Kronecker's method.
/// `too_costly` is set when the divisor combinations exceed the cap.
std::optional<IPoly> kronecker_factor(const IPoly& F, int d, bool& too_costly) {
  too_costly = false;
  std::vector<std::pair<size_t, Integer>> cand;  // (divisor count, point)
  std::vector<std::vector<Integer>> divs_of;
  for (long x = -8; x <= 8; ++x) {
    Integer v = eval(F, x);
    if (v == 0) return IPoly{-x, 1};
    cand.emplace_back(positive_divisors(v).size(), x);
  }
  std::sort(cand.begin(), cand.end());
  std::vector<Integer> pts;
  for (int i = 0; i <= d; ++i) pts.push_back(cand[i].second);
  Integer check_pt = cand[d + 1].second, check_val = eval(F, check_pt);
  double combos = 1;
  for (auto& x : pts) {
    divs_of.push_back(positive_divisors(eval(F, x)));
    combos *= 2.0 * static_cast<double>(divs_of.back().size());
  }
  if (combos > 4e6) {
    too_costly = true;
    return std::nullopt;
  }
  // Lagrange basis polynomials for the chosen points.
  std::vector<std::vector<Rational>> basis;
  for (int i = 0; i <= d; ++i) {
    std::vector<Rational> b{1};
    Rational denom = 1;
    for (int j = 0; j <= d; ++j) {
      if (j == i) continue;
      std::vector<Rational> nb(b.size() + 1, 0);
      for (size_t k = 0; k < b.size(); ++k) {
        nb[k + 1] += b[k];
        nb[k] -= b[k] * pts[j];
      }
      b = nb;
      denom *= Rational(pts[i] - pts[j]);
    }
    for (auto& c : b) c /= denom;
    basis.push_back(b);
  }
  // Position k at point i > 0 encodes divisor k / 2 with sign (-1)^k; the
  // first point keeps a positive sign.
  std::vector<size_t> pos(d + 1, 0), span(d + 1);
  for (int i = 0; i <= d; ++i) span[i] = divs_of[i].size() * (i == 0 ? 1 : 2);
  Polynomial Fq = to_poly(F);
  for (;;) {
    std::vector<Rational> g(d + 1, 0);
    for (int i = 0; i <= d; ++i) {
      size_t k = i == 0 ? pos[0] : pos[i] / 2;
      Integer y = divs_of[i][k];
      if (i > 0 && pos[i] % 2) y = -y;
      for (int c = 0; c <= d; ++c) g[c] += basis[i][c] * y;
    }
    bool ok = g[d] != 0;
    for (auto& c : g) ok = ok && c.get_den() == 1;
    if (ok) {
      IPoly gi(d + 1);
      for (int k = 0; k <= d; ++k) gi[k] = g[k].get_num();
      Integer gv = eval(gi, check_pt);
      if (gv != 0 && check_val % gv == 0) {
        auto [qt, rm] = poly_divmod(Fq, to_poly(gi));
        if (rm.is_zero()) return gi;
      }
    }
    int i = 0;
    for (; i <= d; ++i) {
      if (++pos[i] < span[i]) break;
      pos[i] = 0;
    }
    if (i > d) break;
  }
  return std::nullopt;
}

IPoly exact_quotient(const IPoly& F, const IPoly& g) {
  auto [qt, rm] = poly_divmod(to_poly(F), to_poly(g));
  IPoly out;
  for (auto& c : qt.c) out.push_back(c.get_num());
  return out;
}

/// F2 coordinates of the squarefree kernel of d (sign first).
std::map<Integer, int> square_class_support(const Integer& d) {
  std::map<Integer, int> s;
  if (d < 0) s[-1] = 1;
  for (auto [p, e] : factorize(d))
    if (e % 2) s[p] = 1;
  return s;
}

/// Every element of the Galois group of the compositum of Q(sqrt(D_i))
/// fixes a root of some quadratic factor.
bool multiquadratic_covers(const std::vector<Integer>& discs) {
  std::vector<Integer> keys;
  std::vector<std::map<Integer, int>> sup;
  for (auto& d : discs) {
    sup.push_back(square_class_support(d));
    for (auto& [k, v] : sup.back()) keys.push_back(k);
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  size_t m = keys.size();
  std::vector<std::vector<int>> vec;
  for (auto& s : sup) {
    std::vector<int> v(m, 0);
    for (size_t k = 0; k < m; ++k) v[k] = s.count(keys[k]) ? 1 : 0;
    vec.push_back(v);
  }
  // Characters of the group generated by the classes are functionals on F2^m;
  // it is enough to run through all of F2^m.
  if (m > 20) throw BudgetError("almost_all_p_root: too many prime factors in discriminants");
  for (unsigned long sigma = 0; sigma < (1ul << m); ++sigma) {
    bool fixed = false;
    for (auto& v : vec) {
      int s = 0;
      for (size_t k = 0; k < m; ++k) s ^= v[k] & static_cast<int>((sigma >> k) & 1);
      if (s == 0) {
        fixed = true;
        break;
      }
    }
    if (!fixed) return false;
  }
  return true;
}

IPoly scaled_integral(const Polynomial& f, Integer& D) {
  D = 1;
  for (auto& c : f.c) D = lcm(D, Integer(c.get_den()));
  IPoly F;
  for (auto& c : f.c) F.push_back(Rational(c * D).get_num());
  return F;
}

std::vector<Integer> integer_roots(const IPoly& F) {
  std::vector<Integer> out;
  size_t lo = 0;
  while (lo < F.size() && F[lo] == 0) ++lo;
  if (lo == F.size()) return out;
  if (lo > 0) out.push_back(0);
  if (lo + 1 == F.size()) return out;
  for (auto& d : positive_divisors(F[lo]))
    for (int s : {1, -1})
      if (eval(F, s * d) == 0) out.push_back(s * d);
  std::sort(out.begin(), out.end(), [](const Integer& a, const Integer& b) {
    return abs(a) < abs(b) || (abs(a) == abs(b) && a > b);
  });
  return out;
}

/// Integers t with s * F(t) >= 0 when that set is finite.
std::optional<std::vector<Integer>> finite_sign_range(const IPoly& F, int s) {
  int deg = static_cast<int>(F.size()) - 1;
  if (deg < 0) return std::nullopt;
  if (deg == 0) {
    if (s * sgn(F[0]) >= 0) return std::nullopt;
    return std::vector<Integer>{};
  }
  if (deg % 2 == 1 || s * sgn(F.back()) > 0) return std::nullopt;
  // Cauchy bound on the real roots.
  Rational R = 0;
  for (int i = 0; i < deg; ++i) R = std::max(R, Rational(abs(F[i]), abs(F.back())));
  Integer B = floor_q(R) + 1;
  std::vector<Integer> out;
  for (Integer t = -B; t <= B; ++t)
    if (s * sgn(eval(F, t)) >= 0) out.push_back(t);
  std::sort(out.begin(), out.end(), [](const Integer& a, const Integer& b) {
    return abs(a) < abs(b) || (abs(a) == abs(b) && a > b);
  });
  return out;
}

std::vector<Integer> sweep_order(long range) {
  std::vector<Integer> ts{0};
  for (long k = 1; k <= range; ++k) {
    ts.push_back(k);
    ts.push_back(-k);
  }
  return ts;
}

struct LocalOutcome {
  enum Kind { Pass, Fail, Undecided } kind = Undecided;
  long depth = 0;
  std::string note;
};

/// Exists t in Z_p with F(t) in q(L_p)? Tree over t mod p^k; a class is
/// resolved once ord_p(F(t0)) + a <= k, since then every F(t) in it lies
/// in F(t0)(1 + p^a Z_p).
LocalOutcome local_t_check(const IPoly& F, const LatticeCoset& C, LocalOracle& oracle,
                           const Integer& p, long max_depth) {
  LocalOutcome out;
  try {
    if (auto r = hensel_root(to_poly(F), p, 4); r && (r->is_zero() || r->valuation >= 0)) {
      out.kind = LocalOutcome::Pass;
      out.note = "p(t) has a root in Z_p";
      return out;
    }
  } catch (const PrecisionError&) {
  }
  long a = stability_exponent(C, p);
  std::vector<std::pair<Integer, long>> level;
  for (Integer t = 0; t < p; ++t) level.emplace_back(t, 1);
  long nodes = 0;
  long K = 0;
  while (!level.empty()) {
    std::vector<std::pair<Integer, long>> next;
    for (auto& [t0, k] : level) {
      if (++nodes > 2000000) {
        out.note = "local node cap";
        return out;
      }
      Integer val = eval(F, t0);
      if (val == 0) {
        out.kind = LocalOutcome::Pass;
        out.note = "integral root";
        return out;
      }
      long v = valuation(val, p);
      if (v + a <= k) {
        if (oracle.local(p, val, false)) {
          out.kind = LocalOutcome::Pass;
          out.note = "t = " + t0.get_str() + " mod " + p.get_str() + "^" + std::to_string(k);
          return out;
        }
        K = std::max(K, k);
        continue;
      }
      if (k >= max_depth) {
        out.note = "depth cap at t = " + t0.get_str();
        return out;
      }
      Integer pk = ipow(p, k);
      for (Integer j = 0; j < p; ++j) next.emplace_back(t0 + j * pk, k + 1);
    }
    level = std::move(next);
  }
  out.kind = LocalOutcome::Fail;
  out.depth = K;
  return out;
}

/// Calls f(x) for integral x in the box with q(x) == alpha (Gram g).
/// Returns false when f stopped the search.
bool box_solutions(const IMat& g, const Integer& alpha, long box, const std::function<bool(const IVec&)>& f) {
  size_t n = g.size();
  size_t k = 0;
  while (k < n && g[k][k] == 0) ++k;
  IVec x(n, 0);
  if (k == n) {
    // No usable diagonal: plain box.
    std::function<bool(size_t)> rec = [&](size_t i) -> bool {
      if (i == n) {
        Integer v = 0;
        for (size_t r = 0; r < n; ++r)
          for (size_t c = 0; c < n; ++c) v += g[r][c] * x[r] * x[c];
        return v != alpha || f(x);
      }
      for (long y = -box; y <= box; ++y) {
        x[i] = y;
        if (!rec(i + 1)) return false;
      }
      return true;
    };
    return rec(0);
  }
  std::vector<size_t> others;
  for (size_t i = 0; i < n; ++i)
    if (i != k) others.push_back(i);
  const Integer& h = g[k][k];
  std::function<bool(size_t)> rec = [&](size_t idx) -> bool {
    if (idx == others.size()) {
      Integer b = 0, c = 0;
      for (size_t i : others) {
        b += g[k][i] * x[i];
        for (size_t j : others) c += g[i][j] * x[i] * x[j];
      }
      // h y^2 + 2 b y + c = alpha
      Integer disc = b * b - h * (c - alpha);
      if (disc < 0 || mpz_perfect_square_p(disc.get_mpz_t()) == 0) return true;
      Integer s = sqrt(disc);
      for (int sg : {1, -1}) {
        if (sg == -1 && s == 0) break;
        Integer num = -b + sg * s;
        if (num % h != 0) continue;
        Integer y = num / h;
        if (abs(y) > box) continue;
        x[k] = y;
        if (!f(x)) return false;
      }
      x[k] = 0;
      return true;
    }
    for (long y = -box; y <= box; ++y) {
      x[others[idx]] = y;
      if (!rec(idx + 1)) return false;
    }
    x[others[idx]] = 0;
    return true;
  };
  return rec(0);
}

IMat integral_gram(const QuadSpace& V) {
  size_t n = V.dim();
  IMat g(n, IVec(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      if (V.gram()[i][j].get_den() != 1) throw std::invalid_argument("Watson instance: Gram must be integral");
      g[i][j] = V.gram()[i][j].get_num();
    }
  return g;
}

Vec to_vec(const IVec& x) { return Vec(x.begin(), x.end()); }

void validate(const WatsonInstance& W) {
  if (W.form.dim() < 3) throw std::invalid_argument("Watson instance: n >= 3 required");
  Polynomial f = W.poly;
  f.normalize();
  if (f.is_zero()) throw std::invalid_argument("Watson instance: zero polynomial");
  integral_gram(W.form);
}

SolverVerdict decide_rational(const WatsonInstance& W, const SearchBudget& budget) {
  SolverVerdict out;
  const QuadSpace& V = W.form;
  std::vector<Rational> ts;
  for (long b = 1; b <= 6; ++b)
    for (long a = 0; a <= budget.t_range; ++a)
      for (long s : {1, -1}) {
        if (a == 0 && s == -1) continue;
        Rational t(s * a, b);
        t.canonicalize();
        if (t.get_den() == b) ts.push_back(t);
      }
  for (const auto& t : ts) {
    Rational alpha = W.poly(t);
    if (alpha == 0) {
      out.status = SolverStatus::Solvable;
      out.witness = Witness{Vec(V.dim(), 0), t};
      out.reason = "rational root of p(t)";
      return out;
    }
    std::set<Integer> primes{2};
    for (auto& p : prime_divisors(Integer(V.det().get_num() * V.det().get_den()))) primes.insert(p);
    for (auto& p : prime_divisors(Integer(alpha.get_num() * alpha.get_den()))) primes.insert(p);
    bool local = represents_over_completion(V, alpha, Place::real());
    for (auto it = primes.begin(); local && it != primes.end(); ++it)
      local = represents_over_completion(V, alpha, Place::finite(*it));
    if (!local) continue;
    // Hasse-Minkowski: alpha is represented over Q. Look for q(y) = alpha k^2.
    out.status = SolverStatus::Solvable;
    out.reason = "represented over every completion at t = " + rational_to_string(t);
    IMat g = integral_gram(V);
    long box = static_cast<long>(std::pow(static_cast<double>(budget.box_cells), 1.0 / static_cast<double>(V.dim() - 1)) / 2);
    for (long k = 1; k <= 12 && !out.witness; ++k) {
      Rational target = alpha * k * k;
      if (target.get_den() != 1) continue;
      box_solutions(g, target.get_num(), std::max(box, 1L), [&](const IVec& y) {
        Vec x = to_vec(y);
        for (auto& c : x) c /= k;
        out.witness = Witness{x, t};
        return false;
      });
    }
    if (!out.witness) {
      out.witness_pending = true;
      out.budget_exhausted = true;
    }
    return out;
  }
  out.reason = "search-exhausted";
  out.budget_exhausted = true;
  return out;
}

}  // namespace

PadicTarget PadicTarget::from_epsilon(const Rational& value, const Integer& p, const Rational& eps) {
  if (eps <= 0) throw std::invalid_argument("PadicTarget: eps must be positive");
  long k = 0;
  // p^-k < eps
  while (Rational(1, ipow(p, static_cast<unsigned long>(std::max(k, 0L)))) >= eps) ++k;
  while (k > -64 && rpow(Rational(p), -(k - 1)) < eps) --k;
  return {value, k};
}

namespace {

struct Progression {
  Integer B0, M, D;  // alpha = (B0 + j M) / D for all integers j
  Integer g;         // T-part of B0, common to the whole progression
};

Progression progression(const TargetMap& targets) {
  Progression pr{0, 1, 1, 1};
  for (auto& [p, t] : targets) {
    if (!is_prime(p)) throw std::invalid_argument("targets: keys must be primes");
    if (t.value != 0) {
      long v = valuation(t.value, p);
      if (v < 0) pr.D *= ipow(p, static_cast<unsigned long>(-v));
    }
  }
  std::vector<std::pair<Integer, Integer>> congr;  // (residue, modulus)
  for (auto& [p, t] : targets) {
    Rational beta = t.value * pr.D;
    long k = std::max(1L, t.precision + valuation(pr.D, p));
    Integer m = ipow(p, static_cast<unsigned long>(k));
    Integer r = beta == 0 ? Integer(0) : mod_rational(beta, m);
    if (r == 0) {
      // Pin the valuation: p^k is within p^k of beta.
      r = m;
      m *= p;
    }
    congr.emplace_back(r, m);
  }
  for (auto& [r, m] : congr) {
    // CRT step: B0 == B0 mod M, B0 == r mod m.
    Integer inv;
    Integer Mm = mod_pos(pr.M, m);
    mpz_invert(inv.get_mpz_t(), Mm.get_mpz_t(), m.get_mpz_t());
    Integer j = mod_pos((r - pr.B0) * inv, m);
    pr.B0 += j * pr.M;
    pr.M *= m;
  }
  for (auto& [p, t] : targets) pr.g *= ipow(p, static_cast<unsigned long>(valuation(pr.B0, p)));
  if (targets.empty()) pr.B0 = 0;
  return pr;
}

}  // namespace

DirichletAlpha dirichlet_alpha(const TargetMap& targets, int sign, long max_attempts) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("dirichlet_alpha: sign must be +1 or -1");
  Progression pr = progression(targets);
  // alpha = g (c + j m) / D with c prime to every p in T and m supported on T.
  Integer c = pr.B0 / pr.g, m = pr.M / pr.g;
  // c + j m = sign * v0: walk j outwards in the demanded direction.
  Integer j;
  if (sign > 0) {
    mpz_cdiv_q(j.get_mpz_t(), Integer(2 - c).get_mpz_t(), m.get_mpz_t());
  } else {
    mpz_fdiv_q(j.get_mpz_t(), Integer(-2 - c).get_mpz_t(), m.get_mpz_t());
  }
  for (long attempt = 0; attempt < max_attempts; ++attempt, j += sign) {
    Integer val = c + j * m;
    Integer v0 = abs(val);
    if (sgn(val) != sign || !is_prime(v0) || targets.count(v0)) continue;
    Rational alpha(sign * pr.g * v0, pr.D);
    alpha.canonicalize();
    return {alpha, v0};
  }
  throw BudgetError("dirichlet_alpha: attempt bound exceeded");
}

Rational shifted_alpha(const TargetMap& targets, int sign, const Rational& threshold) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("shifted_alpha: sign must be +1 or -1");
  Progression pr = progression(targets);
  // alpha_1 + K alpha_2 with alpha_1 = B0 / D and alpha_2 = sign * M / D.
  Integer K = floor_q(Rational(threshold * pr.D - Rational(sign * pr.B0)) / Rational(pr.M)) + 1;
  if (K < 0) K = 0;
  Rational alpha(pr.B0 + sign * K * pr.M, pr.D);
  alpha.canonicalize();
  return alpha;
}

RootCondition almost_all_p_root(const Polynomial& f0, long sample_bound) {
  Polynomial f = f0;
  f.normalize();
  if (f.is_zero()) throw std::invalid_argument("almost_all_p_root: zero polynomial");
  RootCondition out;
  for (Integer p = 2; p <= sample_bound; p = next_prime(p)) {
    ++out.sampled_primes;
    try {
      if (!hensel_root(f, p, 2)) ++out.primes_without_root;
    } catch (const PrecisionError&) {
    }
  }
  if (f.degree() == 0) {
    out.verdict = Verdict::No;
    out.reason = "nonzero constant";
    return out;
  }
  Polynomial sq = poly_divmod(f, poly_gcd(f, f.derivative())).first;
  IPoly F = primitive_part(sq);

  std::vector<IPoly> factors;
  bool incomplete = false;
  IPoly rest = F;
  for (int d = 1; 2 * d <= static_cast<int>(rest.size()) - 1;) {
    bool costly = false;
    auto g = kronecker_factor(rest, d, costly);
    if (costly) incomplete = true;
    if (g) {
      if (d == 1) {
        out.verdict = Verdict::Yes;
        out.reason = "rational root";
        return out;
      }
      factors.push_back(*g);
      rest = exact_quotient(rest, *g);
      continue;
    }
    ++d;
  }
  if (rest.size() > 1) {
    if (rest.size() == 2) {
      out.verdict = Verdict::Yes;
      out.reason = "rational root";
      return out;
    }
    factors.push_back(rest);
  }
  if (incomplete) {
    out.reason = "factorisation incomplete";
    return out;
  }
  if (factors.size() == 1) {
    out.verdict = Verdict::No;
    out.reason = "irreducible of degree " + std::to_string(factors[0].size() - 1) +
                 ": a transitive group has a fixed-point-free element";
    return out;
  }
  bool all_quadratic = std::all_of(factors.begin(), factors.end(), [](const IPoly& g) { return g.size() == 3; });
  if (all_quadratic) {
    std::vector<Integer> discs;
    for (auto& g : factors) discs.push_back(g[1] * g[1] - 4 * g[2] * g[0]);
    if (multiquadratic_covers(discs)) {
      out.verdict = Verdict::Yes;
      out.reason = "multiquadratic: every Frobenius class fixes a root";
    } else {
      out.verdict = Verdict::No;
      out.reason = "multiquadratic: some Frobenius class fixes no root";
    }
    return out;
  }
  out.reason = "mixed factor degrees";
  return out;
}

std::string status_name(SolverStatus s) {
  switch (s) {
    case SolverStatus::Solvable: return "solvable";
    case SolverStatus::LocallyObstructed: return "locally_obstructed";
    case SolverStatus::Unsolvable: return "unsolvable";
    case SolverStatus::Unknown: return "unknown";
  }
  return "unknown";
}

bool check_witness(const WatsonInstance& W, const Witness& w) {
  if (w.x.size() != W.form.dim()) return false;
  if (W.domain == Domain::Integers) {
    if (w.t.get_den() != 1 || !is_integral(w.x)) return false;
  }
  return W.form.q(w.x) == W.poly(w.t);
}

std::vector<Witness> brute_force_search(const WatsonInstance& W, long xbox, long tbox) {
  validate(W);
  IMat g = integral_gram(W.form);
  std::vector<Witness> out;
  for (long t = -tbox; t <= tbox; ++t) {
    Rational alpha = W.poly(Rational(t));
    if (alpha.get_den() != 1) continue;
    box_solutions(g, alpha.get_num(), xbox, [&](const IVec& x) {
      out.push_back({to_vec(x), Rational(t)});
      return true;
    });
  }
  return out;
}

std::optional<bool> recheck_certificate(const WatsonInstance& W, const LocalCertificate& c) {
  validate(W);
  Integer D;
  IPoly F = scaled_integral(W.poly, D);
  IMat g = integral_gram(W.form);
  size_t n = g.size();
  if (c.place.is_real()) {
    int s = W.form.is_positive_definite() ? 1 : (W.form.is_definite() ? -1 : 0);
    if (s == 0) return false;
    auto range = finite_sign_range(F, s);
    return range && range->empty();
  }
  Integer mz = ipow(c.place.p, static_cast<unsigned long>(c.exponent));
  double cells = std::pow(mz.get_d(), static_cast<double>(n));
  if (cells > 3e7) return std::nullopt;
  long m = mz.get_si();
  std::vector<std::vector<long>> gm(n, std::vector<long>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) gm[i][j] = mod_pos(g[i][j] * D, mz).get_si();
  std::vector<char> hit(static_cast<size_t>(m), 0);
  std::vector<long> x(n, 0);
  for (;;) {
    long v = 0;
    for (size_t i = 0; i < n; ++i) {
      long row = 0;
      for (size_t j = 0; j < n; ++j) row = (row + gm[i][j] * x[j]) % m;
      v = (v + row * x[i]) % m;
    }
    hit[static_cast<size_t>(v)] = 1;
    size_t i = 0;
    for (; i < n; ++i) {
      if (++x[i] < m) break;
      x[i] = 0;
    }
    if (i == n) break;
  }
  for (long t = 0; t < m; ++t)
    if (hit[mod_pos(eval(F, t), mz).get_ui()]) return false;
  return true;
}

SolverVerdict decide_watson(const WatsonInstance& W, const SearchBudget& budget) {
  validate(W);
  if (W.domain == Domain::Rationals) return decide_rational(W, budget);
  SolverVerdict out;
  size_t n = W.form.dim();
  Integer D;
  IPoly F = scaled_integral(W.poly, D);
  while (!F.empty() && F.back() == 0) F.pop_back();
  // D q(x) = F(t) on Z^n.
  QuadSpace V(Rational(D) * W.form.gram());
  LatticeCoset C(Lattice::standard(V));
  IMat g = integral_gram(V);

  auto found = [&](const IVec& x, const Integer& t, const std::string& why) {
    out.status = SolverStatus::Solvable;
    out.witness = Witness{to_vec(x), Rational(t)};
    out.reason = why;
    return out;
  };

  auto roots = integer_roots(F);
  if (!roots.empty()) return found(IVec(n, 0), roots.front(), "integral root of p(t)");

  int sign = V.is_positive_definite() ? 1 : (V.is_definite() ? -1 : 0);
  std::optional<LatticeCoset> Cpos;
  if (sign != 0) Cpos = LatticeCoset(Lattice::standard(QuadSpace(Rational(sign) * V.gram())));

  std::set<Integer> primes{2};
  for (auto& p : prime_divisors(Integer(2 * D * det(W.form.gram()).get_num()))) primes.insert(p);
  for (Integer p = 2; p <= budget.prime_bound; p = next_prime(p)) primes.insert(p);
  LocalOracle oracle(C);
  auto locally_ok = [&](const Integer& alpha) {
    for (auto& p : primes)
      if (!oracle.local(p, alpha, false)) return false;
    return true;
  };
  // Per-t search; returns true on a witness, sets `exhausted` when budget ran out.
  bool exhausted = false;
  long box = 1;
  if (sign == 0) {
    box = static_cast<long>(std::pow(static_cast<double>(budget.box_cells), 1.0 / static_cast<double>(n - 1)));
    box = std::max(1L, (box - 1) / 2);
  }
  std::optional<Enumerator> en;
  if (Cpos) {
    en.emplace(*Cpos);
    en->set_node_budget(budget.nodes_per_t);
  }
  auto try_t = [&](const Integer& t) -> bool {
    Integer alpha = eval(F, t);
    if (alpha == 0) {
      found(IVec(n, 0), t, "p(t) = 0");
      return true;
    }
    if (sign != 0 && sgn(alpha) != sign) return false;
    if (!locally_ok(alpha)) return false;
    if (sign != 0) {
      auto x = en->find(Rational(alpha * sign));
      if (en->budget_exhausted()) exhausted = true;
      if (x) {
        IVec xi;
        for (auto& c : *x) xi.push_back(c.get_num());
        found(xi, t, "enumeration");
        return true;
      }
      return false;
    }
    bool hit = false;
    box_solutions(g, alpha, box, [&](const IVec& x) {
      found(x, t, "box search");
      hit = true;
      return false;
    });
    if (!hit) exhausted = true;
    return hit;
  };

  // (a) real place
  if (sign != 0) {
    if (auto range = finite_sign_range(F, sign)) {
      if (range->empty()) {
        out.status = SolverStatus::LocallyObstructed;
        out.certificate = LocalCertificate{Place::real(), 0, false, "sign: q definite and p(t) of opposite sign"};
        out.reason = "real place";
        return out;
      }
      en->set_node_budget(0);
      exhausted = false;
      for (auto& t : *range)
        if (try_t(t)) return out;
      out.status = SolverStatus::Unsolvable;
      out.certificate = LocalCertificate{Place::real(), 0, false,
                                         "finitely many t with s p(t) >= 0, each ruled out by enumeration"};
      out.reason = "finite t-range exhausted";
      return out;
    }
  }

  // (b) local checks at the bad primes
  std::vector<Integer> plist(primes.begin(), primes.end());
  std::vector<LocalOutcome> outcomes(plist.size());
  if (budget.jobs > 1) {
    std::vector<std::future<LocalOutcome>> futs;
    for (auto& p : plist)
      futs.push_back(std::async(std::launch::async, [&, p] { return local_t_check(F, C, oracle, p, budget.max_depth); }));
    for (size_t i = 0; i < plist.size(); ++i) outcomes[i] = futs[i].get();
  } else {
    for (size_t i = 0; i < plist.size(); ++i) outcomes[i] = local_t_check(F, C, oracle, plist[i], budget.max_depth);
  }
  bool undecided = false;
  std::string undecided_note;
  for (size_t i = 0; i < plist.size(); ++i) {
    if (outcomes[i].kind == LocalOutcome::Fail) {
      out.status = SolverStatus::LocallyObstructed;
      out.certificate = LocalCertificate{Place::finite(plist[i]), outcomes[i].depth, false,
                                         "no t in Z_p with p(t) in q(Z_p^n)"};
      out.reason = "local obstruction at " + plist[i].get_str();
      return out;
    }
    if (outcomes[i].kind == LocalOutcome::Undecided) {
      undecided = true;
      undecided_note = plist[i].get_str() + ": " + outcomes[i].note;
    }
  }

  // Constant p on a definite form: one value, settled by complete enumeration.
  // The local-global theorems below need p nonconstant.
  if (sign != 0 && F.size() == 1) {
    en->set_node_budget(0);
    if (try_t(0)) return out;
    out.status = SolverStatus::Unsolvable;
    out.certificate = LocalCertificate{Place::real(), 0, false, "p constant; complete enumeration of q(x) = p"};
    out.reason = "constant value not represented";
    return out;
  }

  // (c) witness sweep
  for (auto& t : sweep_order(budget.t_range))
    if (try_t(t)) return out;

  if (undecided) {
    out.reason = "search-exhausted; local check undecided at " + undecided_note;
    out.budget_exhausted = true;
    return out;
  }
  bool theorem = n >= 4;
  std::string why = "local-global principle, n >= 4";
  if (!theorem) {
    RootCondition rc = almost_all_p_root(W.poly, 200);
    theorem = rc.verdict == Verdict::Yes;
    why = "local-global principle, n = 3 with roots of p(t) at almost all p";
  }
  if (theorem) {
    out.status = SolverStatus::Solvable;
    out.witness_pending = true;
    out.budget_exhausted = true;
    out.reason = why + "; witness search exhausted";
    return out;
  }
  out.reason = "BM-condition-unverified";
  out.budget_exhausted = exhausted;
  return out;
}

}  // namespace quadrep
