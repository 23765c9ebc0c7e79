#include "quadrep/localrep.hpp"

#include <algorithm>

namespace quadrep {

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Yes:
      return "yes";
    case Verdict::No:
      return "no";
    default:
      return "unknown";
  }
}

RepDecision RepDecision::yes(std::optional<Vec> w, long prec, std::string why) {
  RepDecision d;
  d.verdict = Verdict::Yes;
  d.witness = std::move(w);
  d.witness_precision = prec;
  d.reason = std::move(why);
  return d;
}

RepDecision RepDecision::no(LocalCertificate c) {
  RepDecision d;
  d.verdict = Verdict::No;
  d.reason = c.reason;
  d.certificate = std::move(c);
  return d;
}

RepDecision RepDecision::unknown(std::string why) {
  RepDecision d;
  d.verdict = Verdict::Unknown;
  d.reason = std::move(why);
  return d;
}

long conductor_exponent(const LatticeCoset& C, const Integer& p) {
  long m = 0;
  for (const auto& c : C.lattice().coords(C.u0())) {
    long v = valuation(c, p);
    if (v != kInfinity) m = std::min(m, v);
  }
  return -m;
}

namespace {

struct Term {
  long s;
  Rational u;
  bool eligible;
};

int legendre(const Rational& x, const Integer& p) { return square_class(x, Place{p}).unit; }

// Representation of alpha by sum p^{s_i} u_i y_i^2 over Z_p, p odd; when prim
// is set some eligible y_i must be a unit.
bool odd_diagonal_represents(std::vector<Term> t, Rational alpha, bool prim, const Integer& p) {
  if (alpha == 0) {
    if (!prim) return true;
    Vec d;
    for (auto& x : t) d.push_back(rpow(Rational(p), x.s) * x.u);
    return is_isotropic(QuadSpace(diagonal(d)), Place{p});
  }
  for (;;) {
    bool any_elig = std::any_of(t.begin(), t.end(), [](const Term& x) { return x.eligible; });
    if (prim && !any_elig) return false;
    long s = kInfinity;
    for (auto& x : t) s = std::min(s, x.s);
    if (s != 0) {
      alpha *= rpow(Rational(p), -s);
      for (auto& x : t) x.s -= s;
    }
    long v = valuation(alpha, p);
    if (v < 0) return false;
    std::vector<Rational> U;
    for (auto& x : t)
      if (x.s == 0) U.push_back(x.u);
    size_t r = U.size();
    if (v == 0) {
      if (r >= 2) return true;
      return legendre(alpha * U[0], p) == 1;
    }
    bool iso = r >= 3 || (r == 2 && legendre(-U[0] * U[1], p) == 1);
    if (iso) return true;
    for (auto& x : t)
      if (x.s == 0) {
        x.s = 2;
        x.eligible = false;
      }
  }
}

std::vector<Term> odd_terms(const Lattice& L, const Integer& p) {
  JordanData jd = jordan_decomposition(L, p);
  std::vector<Term> t;
  for (const auto& c : jd.components)
    for (size_t i = 0; i < c.rank; ++i) t.push_back(Term{c.scale, c.unit_gram[i][i], true});
  return t;
}

// Congruence tree over x = u0 + B c, c in Z_p^n.
struct Search {
  Integer p;
  size_t n = 0;
  Mat G;
  Vec lin;  // 2 B(u0, b_i)
  Rational q0;
  Vec u0;
  Mat B, ambient;
  long w1 = 0, wQ = 0;

  Search(const LatticeCoset& C, const Integer& prime, bool drop_u0) : p(prime) {
    const Lattice& L = C.lattice();
    n = L.dim();
    G = L.gram();
    B = L.basis();
    ambient = L.space().gram();
    u0 = drop_u0 ? Vec(n, 0) : C.u0();
    lin.resize(n);
    for (size_t i = 0; i < n; ++i) lin[i] = 2 * L.space().b(u0, L.basis_vector(i));
    q0 = L.space().q(u0);
    w1 = wQ = kInfinity;
    for (size_t i = 0; i < n; ++i) {
      w1 = std::min(w1, valuation(lin[i], p));
      for (size_t j = 0; j < n; ++j) {
        long v = valuation(2 * G[i][j], p);
        w1 = std::min(w1, v);
        if (i != j) wQ = std::min(wQ, v);
      }
      wQ = std::min(wQ, valuation(G[i][i], p));
    }
  }

  Rational value(const IVec& c) const {
    Rational f = q0;
    for (size_t i = 0; i < n; ++i) {
      if (c[i] == 0) continue;
      Rational ci(c[i]);
      f += lin[i] * ci;
      f += G[i][i] * ci * ci;
      for (size_t j = i + 1; j < n; ++j)
        if (c[j] != 0) f += 2 * G[i][j] * ci * Rational(c[j]);
    }
    return f;
  }

  Rational partial(const IVec& c, size_t i) const {
    Rational d = lin[i];
    for (size_t j = 0; j < n; ++j)
      if (c[j] != 0) d += 2 * G[i][j] * Rational(c[j]);
    return d;
  }

  Vec point(const Vec& c) const { return u0 + B * c; }

  // Refine coordinate i of c by a root t of F(c + t e_i) = 0 to the given precision.
  Vec newton(const IVec& c, size_t i, const Rational& alpha, long target) const {
    Vec cr(c.begin(), c.end());
    Rational f0 = value(c) - alpha, d0 = partial(c, i), a = G[i][i];
    long g = valuation(d0, p);
    Integer mod = ipow(p, target + 2 * std::max(0L, g) + 4);
    Rational t = 0;
    for (int it = 0; it < 80; ++it) {
      Rational ft = f0 + d0 * t + a * t * t;
      if (ft == 0 || valuation(ft, p) >= target) break;
      Rational dt = d0 + 2 * a * t;
      t = t - ft / dt;
      t = Rational(mod_rational(t, mod));
    }
    cr[i] += t;
    return point(cr);
  }

  struct Hit {
    Vec x;
    long precision;
  };

  // Some x with v(q(x) - alpha) >= N (or an exact root certified by Hensel),
  // with x primitive when prim is set (lattice case only).
  std::optional<Hit> run(const Rational& alpha, bool prim, long N) const {
    struct Node {
      long k;
      IVec c;
    };
    std::vector<Node> stack;
    stack.push_back(Node{0, IVec(n, 0)});
    while (!stack.empty()) {
      Node nd = std::move(stack.back());
      stack.pop_back();
      Rational F = value(nd.c) - alpha;
      long vF = valuation(F, p);
      bool primitive_ok = !prim || nd.k > 0;
      if (primitive_ok) {
        if (vF >= N) return Hit{point(Vec(nd.c.begin(), nd.c.end())), vF};
        for (size_t i = 0; i < n; ++i) {
          Rational d = partial(nd.c, i);
          if (d == 0) continue;
          long g = valuation(d, p);
          long nu = std::min({vF, g, valuation(G[i][i], p)});
          if (vF > 2 * g - nu) {
            long target = std::max(N, vF) + 4;
            Vec x = newton(nd.c, i, alpha, target);
            Rational e = quad_value(x) - alpha;
            return Hit{x, e == 0 ? kInfinity : valuation(e, p)};
          }
        }
      }
      long bound = std::min({N, nd.k + w1, 2 * nd.k + wQ});
      if (vF < bound) continue;
      Integer pk = ipow(p, nd.k);
      // children c + p^k d, pushed in reverse so the smallest digit is explored first
      std::vector<Node> kids;
      IVec d(n, 0);
      Integer pu = p;
      for (;;) {
        bool zero = std::all_of(d.begin(), d.end(), [](const Integer& z) { return z == 0; });
        if (!(prim && nd.k == 0 && zero)) {
          IVec c = nd.c;
          for (size_t i = 0; i < n; ++i) c[i] += pk * d[i];
          kids.push_back(Node{nd.k + 1, c});
        }
        size_t i = 0;
        while (i < n && ++d[i] == pu) d[i++] = 0;
        if (i == n) break;
      }
      for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(std::move(*it));
    }
    return std::nullopt;
  }

  Rational quad_value(const Vec& x) const { return quad(ambient, x); }
};

LocalCertificate make_cert(const Integer& p, long N, bool prim, const std::string& why) {
  return LocalCertificate{Place{p}, N, prim, why};
}

}  // namespace

long stability_exponent(const LatticeCoset& C, const Integer& p) {
  long e = conductor_exponent(C, p);
  if (p == 2) return std::max(3L, e + 1);
  return std::max(1L, e);
}

RepDecision local_represents(const LatticeCoset& C, const Integer& p, const Rational& alpha,
                             bool primitive) {
  if (!is_prime(p)) throw std::invalid_argument("local_represents: modulus not prime");
  long e = conductor_exponent(C, p);
  bool coset = e > 0;
  long a = stability_exponent(C, p);
  if (coset && primitive)
    return RepDecision::no(make_cert(p, 0, true, "u0 not in L_p: no vector of L_p + u0 is primitive"));
  if (alpha == 0) {
    if (!coset && !primitive) return RepDecision::yes(Vec(C.dim(), 0), kInfinity, "zero vector");
    if (!coset) {
      if (is_isotropic(C.space(), Place{p}))
        return RepDecision::yes(std::nullopt, kInfinity, "isotropic space has primitive isotropic vectors");
      return RepDecision::no(make_cert(p, 0, true, "anisotropic: no primitive isotropic vector"));
    }
    Search s(C, p, false);
    if (auto hit = s.run(0, false, kInfinity / 4)) return RepDecision::yes(hit->x, hit->precision);
    return RepDecision::no(make_cert(p, 0, false, "congruence tree exhausted"));
  }
  long v = valuation(alpha, p);
  long N = v + a;
  const Lattice& L = C.lattice();
  if (!coset && p != 2) {
    bool ok = odd_diagonal_represents(odd_terms(L, p), alpha, primitive, p);
    if (ok) return RepDecision::yes(std::nullopt, kInfinity, "odd Jordan criterion");
    return RepDecision::no(make_cert(p, N, primitive, "odd Jordan criterion"));
  }
  Search s(C, p, !coset);
  if (coset || primitive) {
    if (auto hit = s.run(alpha, primitive, N)) return RepDecision::yes(hit->x, hit->precision);
    return RepDecision::no(make_cert(p, N, primitive, "congruence tree exhausted"));
  }
  // lattice, non-primitive: x = p^j x' with x' primitive
  Rational beta = alpha;
  Rational pp = Rational(p) * Rational(p);
  for (long j = 0; valuation(beta, p) >= s.wQ; ++j) {
    long vb = valuation(beta, p);
    if (auto hit = s.run(beta, true, vb + a)) {
      Vec x = rpow(Rational(p), j) * hit->x;
      return RepDecision::yes(x, hit->precision == kInfinity ? kInfinity : hit->precision + 2 * j);
    }
    beta /= pp;
  }
  return RepDecision::no(make_cert(p, N, false, "congruence tree exhausted"));
}

std::set<Integer> genus_check_primes(const LatticeCoset& C, const Primitivity& prim) {
  std::set<Integer> r = bad_primes(C);
  r.insert(prim.off.begin(), prim.off.end());
  return r;
}

namespace {

bool is_rational_square(const Rational& r) {
  if (r < 0) return false;
  Integer a = sqrt(r.get_num()), b = sqrt(r.get_den());
  return a * a == r.get_num() && b * b == r.get_den();
}

}  // namespace

RepDecision genus_represents(const LatticeCoset& C, const Rational& alpha, const Primitivity& prim) {
  if (alpha == 0) throw std::invalid_argument("genus_represents: alpha must be nonzero");
  if (prim.required)
    for (const auto& p : conductor_set(C))
      if (!prim.off.count(p))
        throw std::invalid_argument("genus_represents: T must contain the conductor set");
  if (!represents_over_completion(C.space(), alpha, Place::real()))
    return RepDecision::no(LocalCertificate{Place::real(), 0, false, "sign"});
  std::set<Integer> ps = genus_check_primes(C, prim);
  for (auto& p : prime_divisors(alpha.get_num() * alpha.get_den())) ps.insert(p);
  for (const auto& p : ps) {
    RepDecision d = local_represents(C, p, alpha, prim.at(p));
    if (d.verdict != Verdict::Yes) return d;
  }
  // Rank one: at good primes alpha / q(b) must still be a square; only global squares are.
  if (C.dim() == 1 && !is_rational_square(alpha / C.lattice().gram()[0][0]))
    return RepDecision::no(LocalCertificate{Place::real(), 0, false, "rank one: quotient is not a square"});
  return RepDecision::yes(std::nullopt, kInfinity, "all local conditions hold");
}

LocalOracle::LocalOracle(LatticeCoset C, Primitivity prim) : C_(std::move(C)), prim_(std::move(prim)) {
  base_primes_ = genus_check_primes(C_, prim_);
}

bool LocalOracle::local(const Integer& p, const Rational& alpha, bool primitive) {
  long a;
  {
    std::lock_guard<std::mutex> lk(mu_);
    auto it = stab_.find(p);
    if (it == stab_.end()) it = stab_.emplace(p, stability_exponent(C_, p)).first;
    a = it->second;
  }
  long v = valuation(alpha, p);
  Rational unit = alpha * rpow(Rational(p), -v);
  auto key = std::make_tuple(p, v, mod_rational(unit, ipow(p, a)), primitive);
  {
    std::lock_guard<std::mutex> lk(mu_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  bool r = local_represents(C_, p, alpha, primitive).verdict == Verdict::Yes;
  std::lock_guard<std::mutex> lk(mu_);
  cache_[key] = r;
  return r;
}

bool LocalOracle::genus(const Rational& alpha) {
  if (alpha == 0) return false;
  if (!represents_over_completion(C_.space(), alpha, Place::real())) return false;
  std::set<Integer> ps = base_primes_;
  for (auto& p : prime_divisors(alpha.get_num() * alpha.get_den())) ps.insert(p);
  for (const auto& p : ps)
    if (!local(p, alpha, prim_.at(p))) return false;
  return true;
}

}  // namespace quadrep
