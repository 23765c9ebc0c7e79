#include "quadrep/arith.hpp"

#include <algorithm>
#include <sstream>

namespace quadrep {

bool is_prime(const Integer& n) {
  if (n < 2) return false;
  // BPSW plus Miller-Rabin rounds; deterministic below 2^64.
  return mpz_probab_prime_p(n.get_mpz_t(), 30) > 0;
}

Integer next_prime(const Integer& n) {
  Integer r;
  mpz_nextprime(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

namespace {

Integer pollard_brent(const Integer& n, unsigned long seed) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  Integer y = seed % 1000 + 2, c = seed % 97 + 1, g = 1, q = 1, x, ys;
  unsigned long r = 1, m = 128;
  auto f = [&](const Integer& v) {
    Integer t = v * v + c;
    mpz_mod(t.get_mpz_t(), t.get_mpz_t(), n.get_mpz_t());
    return t;
  };
  while (g == 1) {
    x = y;
    for (unsigned long i = 0; i < r; ++i) y = f(y);
    unsigned long k = 0;
    while (k < r && g == 1) {
      ys = y;
      for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
        y = f(y);
        Integer d = abs(x - y);
        q = q * d % n;
      }
      g = gcd(q, n);
      k += m;
    }
    r *= 2;
  }
  if (g == n) {
    do {
      ys = f(ys);
      g = gcd(abs(x - ys), n);
    } while (g == 1);
  }
  return g;
}

void factor_into(Integer n, std::vector<Integer>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  for (unsigned long seed = 1;; ++seed) {
    Integer d = pollard_brent(n, seed);
    if (d != n && d != 1) {
      factor_into(d, out);
      factor_into(n / d, out);
      return;
    }
  }
}

}  // namespace

std::vector<std::pair<Integer, unsigned>> factorize(const Integer& n0) {
  if (n0 == 0) throw std::invalid_argument("factorize: zero");
  Integer n = abs(n0);
  std::vector<Integer> ps;
  for (unsigned long d = 2; d < 10000 && n > 1; d += (d == 2 ? 1 : 2)) {
    if (Integer(d) * d > n) break;
    while (mpz_divisible_ui_p(n.get_mpz_t(), d)) {
      ps.push_back(d);
      n /= d;
    }
  }
  factor_into(n, ps);
  std::sort(ps.begin(), ps.end());
  std::vector<std::pair<Integer, unsigned>> res;
  for (const auto& p : ps) {
    if (!res.empty() && res.back().first == p)
      ++res.back().second;
    else
      res.emplace_back(p, 1);
  }
  return res;
}

std::vector<Integer> prime_divisors(const Integer& n) {
  std::vector<Integer> r;
  for (auto& [p, e] : factorize(n)) r.push_back(p);
  return r;
}

long valuation(const Integer& x, const Integer& p) {
  if (x == 0) return kInfinity;
  if (p == 2) return static_cast<long>(mpz_scan1(x.get_mpz_t(), 0));
  Integer t;
  return static_cast<long>(mpz_remove(t.get_mpz_t(), x.get_mpz_t(), p.get_mpz_t()));
}

long valuation(const Rational& x, const Integer& p) {
  if (x == 0) return kInfinity;
  return valuation(x.get_num(), p) - valuation(x.get_den(), p);
}

Integer ipow(const Integer& b, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

Rational rpow(const Rational& b, long e) {
  if (e >= 0) return Rational(ipow(b.get_num(), e), ipow(b.get_den(), e));
  Rational r(ipow(b.get_den(), -e), ipow(b.get_num(), -e));
  r.canonicalize();
  return r;
}

Integer mod_rational(const Rational& x, const Integer& m) {
  Integer inv;
  if (!mpz_invert(inv.get_mpz_t(), x.get_den().get_mpz_t(), m.get_mpz_t())) {
    if (m == 1) return 0;
    throw std::domain_error("mod_rational: denominator not invertible");
  }
  Integer r = x.get_num() * inv;
  mpz_mod(r.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t());
  return r;
}

Place Place::finite(const Integer& q) {
  if (!is_prime(q)) throw std::invalid_argument("Place: " + q.get_str() + " is not prime");
  return Place{q};
}

std::string Place::to_string() const { return is_real() ? "real" : p.get_str(); }

SquareClass SquareClass::operator*(const SquareClass& o) const {
  if (!(place == o.place)) throw std::invalid_argument("SquareClass: places differ");
  SquareClass r{place, (parity + o.parity) % 2, 1};
  if (place.p == 2)
    r.unit = (unit * o.unit) % 8;
  else
    r.unit = unit * o.unit;
  return r;
}

int square_class_rank(const Place& v) {
  if (v.is_real()) return 1;
  return v.p == 2 ? 3 : 2;
}

std::vector<int> SquareClass::bits() const {
  if (place.is_real()) return {unit < 0 ? 1 : 0};
  if (place.p == 2) {
    int eps = ((unit - 1) / 2) % 2;
    int omega = ((unit * unit - 1) / 8) % 2;
    return {parity, eps, omega};
  }
  return {parity, unit < 0 ? 1 : 0};
}

SquareClass SquareClass::from_bits(const Place& v, const std::vector<int>& b) {
  if (v.is_real()) return SquareClass{v, 0, b[0] ? -1 : 1};
  if (v.p == 2) {
    static const int table[2][2] = {{1, 5}, {7, 3}};
    return SquareClass{v, b[0], table[b[1]][b[2]]};
  }
  return SquareClass{v, b[0], b[1] ? -1 : 1};
}

Rational SquareClass::representative() const {
  if (place.is_real()) return unit;
  Integer u = unit;
  if (place.p != 2 && unit == -1) {
    u = 2;
    while (mpz_legendre(u.get_mpz_t(), place.p.get_mpz_t()) != -1) ++u;
  }
  return parity ? Rational(u * place.p) : Rational(u);
}

SquareClass square_class(const Rational& x, const Place& v) {
  if (x == 0) throw std::invalid_argument("square_class: zero");
  if (v.is_real()) return SquareClass{v, 0, sgn(x) < 0 ? -1 : 1};
  long e = valuation(x, v.p);
  Integer num = x.get_num(), den = x.get_den();
  Integer t;
  mpz_remove(num.get_mpz_t(), num.get_mpz_t(), v.p.get_mpz_t());
  mpz_remove(den.get_mpz_t(), den.get_mpz_t(), v.p.get_mpz_t());
  Integer u = num * den;
  SquareClass r{v, static_cast<int>(((e % 2) + 2) % 2), 1};
  if (v.p == 2) {
    mpz_fdiv_r_ui(t.get_mpz_t(), u.get_mpz_t(), 8);
    r.unit = static_cast<int>(t.get_si());
  } else {
    r.unit = mpz_legendre(u.get_mpz_t(), v.p.get_mpz_t());
  }
  return r;
}

bool is_local_square(const Rational& x, const Place& v) {
  return x == 0 || square_class(x, v).is_trivial();
}

int hilbert_symbol(const Rational& a, const Rational& b, const Place& v) {
  if (a == 0 || b == 0) throw std::invalid_argument("hilbert_symbol: zero argument");
  if (v.is_real()) return (sgn(a) < 0 && sgn(b) < 0) ? -1 : 1;
  SquareClass ca = square_class(a, v), cb = square_class(b, v);
  int s = 0;
  if (v.p == 2) {
    auto ba = ca.bits(), bb = cb.bits();
    // bits = (parity, eps, omega)
    s = ba[1] * bb[1] + ca.parity * bb[2] + cb.parity * ba[2];
  } else {
    Integer h = (v.p - 1) / 2;
    int eps = mpz_odd_p(h.get_mpz_t()) ? 1 : 0;
    s = ca.parity * cb.parity * eps;
    if (cb.parity && ca.unit == -1) ++s;
    if (ca.parity && cb.unit == -1) ++s;
  }
  return (s % 2) ? -1 : 1;
}

Polynomial::Polynomial(std::vector<Rational> coeffs) : c(std::move(coeffs)) { normalize(); }

void Polynomial::normalize() {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

Rational Polynomial::operator()(const Rational& t) const {
  Rational r = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * t + *it;
  return r;
}

Polynomial Polynomial::derivative() const {
  std::vector<Rational> d;
  for (size_t i = 1; i < c.size(); ++i) d.push_back(c[i] * static_cast<long>(i));
  return Polynomial(d);
}

std::string Polynomial::to_string() const {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << rational_to_string(c[i]);
  os << "]";
  return os.str();
}

Polynomial poly_mul(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> r(a.c.size() + b.c.size() - 1, 0);
  for (size_t i = 0; i < a.c.size(); ++i)
    for (size_t j = 0; j < b.c.size(); ++j) r[i + j] += a.c[i] * b.c[j];
  return Polynomial(r);
}

std::pair<Polynomial, Polynomial> poly_divmod(const Polynomial& a, const Polynomial& b) {
  if (b.is_zero()) throw std::invalid_argument("poly_divmod: zero divisor");
  std::vector<Rational> r = a.c;
  int db = b.degree();
  std::vector<Rational> q(std::max(0, a.degree() - db + 1), 0);
  for (int i = a.degree(); i >= db; --i) {
    if (r[i] == 0) continue;
    Rational k = r[i] / b.lead();
    q[i - db] = k;
    for (int j = 0; j <= db; ++j) r[i - db + j] -= k * b.c[j];
  }
  return {Polynomial(q), Polynomial(r)};
}

Polynomial poly_gcd(Polynomial a, Polynomial b) {
  while (!b.is_zero()) {
    Polynomial r = poly_divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  if (a.is_zero()) return a;
  Rational l = a.lead();
  for (auto& x : a.c) x /= l;
  return a;
}

std::vector<Integer> primitive_part(const Polynomial& f) {
  Integer den = 1, g = 0;
  for (const auto& x : f.c) den = lcm(den, x.get_den());
  std::vector<Integer> r;
  for (const auto& x : f.c) {
    Integer v = x.get_num() * (den / x.get_den());
    r.push_back(v);
    g = gcd(g, v);
  }
  if (g == 0) return r;
  if (sgn(r.back()) < 0) g = -g;
  for (auto& x : r) x /= g;
  return r;
}

Rational PadicApprox::value() const {
  if (is_zero()) return 0;
  return rpow(Rational(p), valuation) * Rational(unit);
}

namespace {

Integer eval_int(const std::vector<Integer>& g, const Integer& t) {
  Integer r = 0;
  for (auto it = g.rbegin(); it != g.rend(); ++it) r = r * t + *it;
  return r;
}

std::vector<Integer> deriv_int(const std::vector<Integer>& g) {
  std::vector<Integer> d;
  for (size_t i = 1; i < g.size(); ++i) d.push_back(g[i] * static_cast<unsigned long>(i));
  return d;
}

// A root of squarefree integral g in Z_p (restricted to pZ_p if in_maximal),
// as an integer approximation r with v_p(r - root) >= target.
std::optional<Integer> integral_root(const std::vector<Integer>& g, const Integer& p, long target,
                                     bool in_maximal, long depth_cap) {
  auto dg = deriv_int(g);
  std::vector<Integer> level;
  if (in_maximal) {
    level.push_back(0);
  } else {
    for (Integer r = 0; r < p; ++r) level.push_back(r);
  }
  Integer pm = p;
  for (long m = 1; !level.empty(); ++m) {
    if (m > depth_cap) throw PrecisionError("hensel_root: depth cap exceeded");
    std::vector<Integer> next;
    for (const auto& r : level) {
      Integer gr = eval_int(g, r);
      long vg = valuation(gr, p);
      if (vg < m) continue;
      if (vg == kInfinity) return r;
      Integer dr = eval_int(dg, r);
      long e = valuation(dr, p);
      if (e < m && vg > 2 * e) {
        // Newton iteration towards the unique root in the class.
        Integer x = r;
        for (;;) {
          Integer gx = eval_int(g, x);
          long v = valuation(gx, p);
          if (v == kInfinity || v - e >= target) return x;
          Integer mod = ipow(p, static_cast<unsigned long>(2 * (v - e) + e + 2));
          Integer dx = eval_int(dg, x);
          Integer unit = dx / ipow(p, e), inv;
          mpz_invert(inv.get_mpz_t(), unit.get_mpz_t(), mod.get_mpz_t());
          x = x - (gx / ipow(p, e)) * inv;
          mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), mod.get_mpz_t());
        }
      }
      for (Integer d = 0; d < p; ++d) next.push_back(r + d * pm);
    }
    level = std::move(next);
    pm *= p;
  }
  return std::nullopt;
}

PadicApprox to_approx(const Integer& x, const Integer& p, long abs_prec) {
  PadicApprox a{p, kInfinity, 0, 0};
  long v = valuation(x, p);
  if (v >= abs_prec) return a;
  a.valuation = v;
  a.precision = abs_prec - v;
  Integer m = ipow(p, a.precision);
  a.unit = x / ipow(p, v);
  mpz_fdiv_r(a.unit.get_mpz_t(), a.unit.get_mpz_t(), m.get_mpz_t());
  return a;
}

}  // namespace

std::optional<PadicApprox> hensel_root(const Polynomial& f0, const Integer& p, long precision) {
  Polynomial f = f0;
  f.normalize();
  if (f.is_zero()) throw std::invalid_argument("hensel_root: zero polynomial");
  if (!is_prime(p)) throw std::invalid_argument("hensel_root: modulus not prime");
  if (f.degree() == 0) return std::nullopt;
  if (f.c[0] == 0) return PadicApprox{p, kInfinity, 0, precision};
  Polynomial sq = poly_divmod(f, poly_gcd(f, f.derivative())).first;
  std::vector<Integer> g = primitive_part(sq);
  long cap = 64 + 4 * precision;
  for (auto& x : g)
    if (x != 0) cap = std::max(cap, 4 * static_cast<long>(mpz_sizeinbase(x.get_mpz_t(), 2)) + 64);

  auto certify = [&](const PadicApprox& a) {
    Rational v = f(a.value());
    return v == 0 || valuation(v, p) >= precision;
  };
  for (long target = precision;; target += precision) {
    if (auto r = integral_root(g, p, target, false, cap)) {
      PadicApprox a = to_approx(*r, p, target);
      if (a.is_zero()) a.precision = target;
      if (certify(a)) return a;
      continue;
    }
    break;
  }
  std::vector<Integer> rev(g.rbegin(), g.rend());
  for (long target = precision;; target += precision) {
    auto s = integral_root(rev, p, target, true, cap);
    if (!s) return std::nullopt;
    PadicApprox a = to_approx(*s, p, target);
    PadicApprox inv{p, -a.valuation, 0, a.precision};
    Integer m = ipow(p, a.precision);
    mpz_invert(inv.unit.get_mpz_t(), a.unit.get_mpz_t(), m.get_mpz_t());
    if (certify(inv)) return inv;
  }
}

std::optional<Integer> sqrt_mod_prime(const Integer& a0, const Integer& p) {
  Integer a;
  mpz_fdiv_r(a.get_mpz_t(), a0.get_mpz_t(), p.get_mpz_t());
  if (a == 0) return Integer(0);
  if (p == 2) return a;
  if (mpz_legendre(a.get_mpz_t(), p.get_mpz_t()) != 1) return std::nullopt;
  Integer q = p - 1, z = 2, r, t, c, b, tmp;
  unsigned long s = mpz_scan1(q.get_mpz_t(), 0);
  q >>= s;
  while (mpz_legendre(z.get_mpz_t(), p.get_mpz_t()) != -1) ++z;
  mpz_powm(c.get_mpz_t(), z.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
  Integer e = (q + 1) / 2;
  mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
  mpz_powm(t.get_mpz_t(), a.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
  unsigned long m = s;
  while (t != 1) {
    unsigned long i = 0;
    tmp = t;
    while (tmp != 1) {
      tmp = tmp * tmp % p;
      ++i;
    }
    b = c;
    for (unsigned long j = 0; j + i + 1 < m; ++j) b = b * b % p;
    r = r * b % p;
    c = b * b % p;
    t = t * c % p;
    m = i;
  }
  return r;
}

std::optional<Integer> sqrt_unit_padic(const Rational& a, const Integer& p, long k) {
  if (valuation(a, p) != 0) return std::nullopt;
  Integer r0 = mod_rational(a, p);
  auto r = sqrt_mod_prime(r0, p);
  if (!r) return std::nullopt;
  Integer x = *r, m = p;
  // Newton: x <- x - (x^2 - a)/(2x), doubling precision
  for (long prec = 1; prec < k;) {
    prec = std::min(2 * prec, k);
    m = ipow(p, prec);
    Integer am = mod_rational(a, m), inv;
    Integer twox = 2 * x;
    mpz_invert(inv.get_mpz_t(), twox.get_mpz_t(), m.get_mpz_t());
    x = x - (x * x - am) * inv;
    mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
  }
  return x;
}

std::string rational_to_string(const Rational& x) { return x.get_str(); }

Rational parse_rational(const std::string& s) {
  Rational r;
  if (s.empty() || r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: '" + s + "'");
  if (r.get_den() == 0) throw std::invalid_argument("zero denominator: '" + s + "'");
  r.canonicalize();
  return r;
}

}  // namespace quadrep
