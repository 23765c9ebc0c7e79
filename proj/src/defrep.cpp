#include "quadrep/defrep.hpp"

#include "quadrep/enumeration.hpp"
#include "quadrep/spinor.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <mutex>
#include <optional>
#include <set>

namespace quadrep {

namespace {

Integer mod_pos(const Integer& a, const Integer& m) {
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

/// Least valuation of the L-coordinates of v (kInfinity for v = 0).
long lattice_valuation(const Lattice& L, const Vec& v, const Integer& p) {
  long m = kInfinity;
  for (auto& c : L.coords(v))
    if (c != 0) m = std::min(m, valuation(c, p));
  return m;
}

bool in_scaled(const Lattice& L, const Vec& v, const Integer& p, long k) {
  long m = lattice_valuation(L, v, p);
  return m == kInfinity || m >= k;
}

/// Integer vector c with c == target (p-integral rationals) mod p^k for each prime.
IVec crt_vector(const std::vector<std::tuple<Integer, long, Vec>>& parts, size_t n, Integer& modulus) {
  IVec c(n, 0);
  modulus = 1;
  for (auto& [p, k, target] : parts) {
    if (k <= 0) continue;
    Integer m = ipow(p, static_cast<unsigned long>(k));
    Integer inv;
    Integer Mm = mod_pos(modulus, m);
    mpz_invert(inv.get_mpz_t(), Mm.get_mpz_t(), m.get_mpz_t());
    for (size_t i = 0; i < n; ++i) {
      Integer r = mod_rational(target[i], m);
      Integer j = mod_pos((r - c[i]) * inv, m);
      c[i] += j * modulus;
    }
    modulus *= m;
  }
  return c;
}

/// Columns 1..n-1 of a unimodular U with r U = (g, 0, ..., 0).
std::vector<IVec> integer_row_kernel(IVec r) {
  size_t n = r.size();
  std::vector<IVec> U(n, IVec(n, 0));  // U[col][row]
  for (size_t i = 0; i < n; ++i) U[i][i] = 1;
  size_t pivot = 0;
  while (pivot < n && r[pivot] == 0) ++pivot;
  if (pivot == n) throw std::invalid_argument("integer_row_kernel: zero row");
  std::swap(U[0], U[pivot]);
  std::swap(r[0], r[pivot]);
  for (size_t j = 1; j < n; ++j) {
    if (r[j] == 0) continue;
    Integer g, u, v;
    mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), r[0].get_mpz_t(), r[j].get_mpz_t());
    Integer a = r[0] / g, b = r[j] / g;
    IVec c0(n), cj(n);
    for (size_t i = 0; i < n; ++i) {
      c0[i] = u * U[0][i] + v * U[j][i];
      cj[i] = -b * U[0][i] + a * U[j][i];
    }
    U[0] = c0;
    U[j] = cj;
    r[0] = g;
    r[j] = 0;
  }
  return std::vector<IVec>(U.begin() + 1, U.end());
}

/// Basis (columns) of (Q y)^perp intersected with p^s L.
Mat perp_in_scaled(const Lattice& L, const Vec& y, const Integer& p, long s) {
  size_t n = L.dim();
  Mat Bs = rpow(Rational(p), s) * L.basis();
  Vec row(n);
  Vec gy = L.space().gram() * y;
  for (size_t j = 0; j < n; ++j) row[j] = dot(gy, column(Bs, j));
  Integer d = common_denominator(row);
  IVec r(n);
  for (size_t j = 0; j < n; ++j) r[j] = Rational(row[j] * d).get_num();
  auto ker = integer_row_kernel(r);
  std::vector<Vec> cols;
  for (auto& k : ker) cols.push_back(Bs * Vec(k.begin(), k.end()));
  Mat K = zeros(n, cols.size());
  for (size_t j = 0; j < cols.size(); ++j)
    for (size_t i = 0; i < n; ++i) K[i][j] = cols[j][i];
  return K;
}

/// Coordinates of v in the columns of K, given v in their span and y off it.
Vec coords_in(const Mat& K, const Vec& y, const Vec& v) {
  size_t n = y.size();
  std::vector<Vec> cols;
  for (size_t j = 0; j + 1 < n; ++j) cols.push_back(column(K, j));
  cols.push_back(y);
  Vec c = inverse(from_columns(cols, n)) * v;
  if (c.back() != 0) throw std::logic_error("coords_in: vector outside the span");
  c.pop_back();
  return c;
}

/// An anisotropic vector of the orthogonal complement of the given vectors.
Vec anisotropic_in_complement(const QuadSpace& V, const std::vector<Vec>& vs) {
  Mat rows;
  for (auto& v : vs) rows.push_back(V.gram() * v);
  std::vector<Vec> ker = kernel(rows);
  size_t m = ker.size();
  Mat g = zeros(m, m);
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < m; ++j) g[i][j] = V.b(ker[i], ker[j]);
  auto [P, d] = diagonalize(g);
  for (size_t k = 0; k < m; ++k) {
    if (d[k] == 0) continue;
    Vec xi(V.dim(), 0);
    for (size_t i = 0; i < m; ++i) xi = xi + P[i][k] * ker[i];
    return xi;
  }
  throw std::logic_error("anisotropic_in_complement: degenerate complement");
}

AssociatedData finish(const Lattice& L, const Integer& p, long s, const Vec& x, AssociatedData a) {
  Mat N = perp_in_scaled(L, a.y, p, s);
  Vec c = coords_in(N, a.y, x - a.y);
  long e = kInfinity;
  for (auto& v : c)
    if (v != 0) e = std::min(e, valuation(v, p));
  a.K = e == kInfinity ? N : rpow(Rational(p), e) * N;
  return a;
}

AssociatedData associate_nonzero(const Vec& x, const Lattice& L, const Integer& p, long s) {
  const QuadSpace& V = L.space();
  Rational qx = V.q(x);
  Rational pp(p);
  AssociatedData a;
  if (qx != 0) {
    Vec xi = anisotropic_in_complement(V, {x});
    Rational qxi = V.q(xi);
    for (long t = 1;; ++t) {
      Rational p2t = rpow(pp, 2 * t);
      if (!in_scaled(L, rpow(pp, t) * xi, p, s)) continue;
      if (!in_scaled(L, (qxi / qx * p2t) * x, p, s)) continue;
      if (qx + p2t * qxi == 0) continue;
      Rational c = qxi / qx * p2t;
      // 1 + c may be divisible by p when c is a unit; such t are skipped.
      Vec y = Rational(1 / (1 + c)) * (x + rpow(pp, t) * xi);
      if (!in_scaled(L, x - y, p, s)) continue;
      a.y = y;
      a.t = t;
      a.xi = xi;
      break;
    }
  } else {
    size_t i = 0;
    Vec gx = V.gram() * x;
    while (gx[i] == 0) ++i;
    Vec w0(x.size(), 0);
    w0[i] = 1 / gx[i];
    Vec w = w0 - (V.q(w0) / 2) * x;
    Vec h = anisotropic_in_complement(V, {x, w});
    Rational qh = V.q(h);
    for (long t = 1;; ++t) {
      Rational p2t = rpow(pp, 2 * t);
      if (!in_scaled(L, rpow(pp, t) * h, p, s)) continue;
      if (!in_scaled(L, (qh * p2t) * w, p, s)) continue;
      a.y = x - (p2t * qh) * w + rpow(pp, t) * h;
      a.t = t;
      a.xi = h;
      a.isotropic_branch = true;
      break;
    }
  }
  return finish(L, p, s, x, a);
}

/// Nonzero x' in p^s L_p with q(x') == 0 mod p^prec: a rational isotropic
/// vector when a short one exists, otherwise a p-adic root on a line.
Vec near_isotropic(const Lattice& L, const Integer& p, long s, long prec) {
  const QuadSpace& V = L.space();
  size_t n = V.dim();
  Rational ps = rpow(Rational(p), s);
  std::vector<Vec> pts;
  IVec c(n, -2);
  for (;;) {
    Vec v(c.begin(), c.end());
    if (!is_zero(v)) pts.push_back(L.from_coords(v));
    size_t i = 0;
    for (; i < n; ++i) {
      if (++c[i] <= 2) break;
      c[i] = -2;
    }
    if (i == n) break;
  }
  for (auto& v : pts)
    if (V.q(v) == 0) return ps * v;
  for (auto& a : pts)
    for (auto& b : pts) {
      // q(a + t b) = q(a) + 2 t b(a,b) + t^2 q(b)
      Polynomial f({V.q(a), 2 * V.b(a, b), V.q(b)});
      f.normalize();
      if (f.degree() < 1) continue;
      std::optional<PadicApprox> r;
      try {
        r = hensel_root(f, p, prec + 8);
      } catch (const PrecisionError&) {
        continue;
      }
      if (!r || r->is_zero()) continue;
      Vec x = a + r->value() * b;
      if (is_zero(x)) continue;
      long m = lattice_valuation(L, x, p);
      Vec y = rpow(Rational(p), s - m) * x;
      if (valuation(V.q(y), p) >= prec) return y;
    }
  throw std::runtime_error("near_isotropic: no p-adic isotropic line found");
}

}  // namespace

std::set<Integer> CCInstance::T() const {
  std::set<Integer> t;
  for (auto& c : conditions) t.insert(c.p);
  return t;
}

LTInstance cc_to_lt(const CCInstance& cc) {
  const Lattice& L = cc.L;
  size_t n = L.dim();
  std::vector<std::tuple<Integer, long, Vec>> parts;
  Integer M = 1;
  std::set<Integer> seen;
  for (auto& c : cc.conditions) {
    if (c.s < 1) throw std::invalid_argument("cc_to_lt: s must be positive");
    if (!seen.insert(c.p).second) throw std::invalid_argument("cc_to_lt: one condition per prime");
    Vec coords = L.coords(c.target);
    for (auto& v : coords)
      if (v != 0 && valuation(v, c.p) < 0) throw std::invalid_argument("cc_to_lt: target not in L_p");
    parts.emplace_back(c.p, c.s, coords);
    M *= ipow(c.p, static_cast<unsigned long>(c.s));
  }
  Integer mod;
  IVec u = crt_vector(parts, n, mod);
  Lattice K = L.scaled(Rational(M));
  return {LatticeCoset(K, L.from_coords(Vec(u.begin(), u.end()))), cc.T()};
}

std::vector<CCInstance> lt_to_cc(const LTInstance& lt, size_t max_instances) {
  const LatticeCoset& C = lt.C;
  const Lattice& L = C.lattice();
  Lattice K = C.span_lattice();
  size_t n = C.dim();
  std::vector<std::vector<CongruenceCondition>> per_prime;
  for (auto& p : lt.T) {
    long s = std::max(1L, conductor_exponent(C, p));
    Integer ps = ipow(p, static_cast<unsigned long>(s));
    if (ps.get_d() > 64 || std::pow(ps.get_d(), static_cast<double>(n)) > 1e6)
      throw BudgetError("lt_to_cc: too many residue classes");
    bool prim = !is_isotropic(C.space(), Place::finite(p)) && conductor_exponent(C, p) == 0;
    std::map<Vec, Vec> classes;  // class key -> target
    IVec c(n, 0);
    long m = ps.get_si();
    for (;;) {
      Vec lc = L.from_coords(Vec(c.begin(), c.end()));
      Vec key = Rational(1, ps) * K.coords(lc);
      for (auto& v : key) v = floor_frac(v);
      classes.emplace(key, C.u0() + lc);
      size_t i = 0;
      for (; i < n; ++i) {
        if (++c[i] < m) break;
        c[i] = 0;
      }
      if (i == n) break;
    }
    std::vector<CongruenceCondition> conds;
    for (auto& [key, target] : classes) conds.push_back({p, target, s, prim});
    per_prime.push_back(conds);
  }
  size_t total = 1;
  for (auto& v : per_prime) total *= v.size();
  if (total > max_instances) throw BudgetError("lt_to_cc: too many instances");
  std::vector<CCInstance> out;
  std::vector<size_t> idx(per_prime.size(), 0);
  for (size_t k = 0; k < total; ++k) {
    CCInstance cc{K, {}};
    for (size_t j = 0; j < per_prime.size(); ++j) cc.conditions.push_back(per_prime[j][idx[j]]);
    out.push_back(cc);
    for (size_t j = 0; j < per_prime.size(); ++j) {
      if (++idx[j] < per_prime[j].size()) break;
      idx[j] = 0;
    }
  }
  return out;
}

long precision_from_epsilon(const Integer& p, const Rational& eps) {
  if (eps <= 0) throw std::invalid_argument("precision_from_epsilon: eps must be positive");
  long k = 0;
  while (rpow(Rational(p), -k) >= eps) ++k;
  while (rpow(Rational(p), -(k - 1)) < eps) --k;
  return k;
}

AlmostPrimeVector almost_prime_norm_vector(const LatticeCoset& C, const std::set<Integer>& T,
                                           const std::map<Integer, Vec>& targets, const Rational& eps,
                                           long max_candidates) {
  size_t n = C.dim();
  const QuadSpace& V = C.space();
  Integer nd = Rational(-V.det()).get_num() * V.det().get_den();
  if (n < 2 || (n == 2 && nd > 0 && mpz_perfect_square_p(nd.get_mpz_t()) != 0))
    throw std::invalid_argument("almost_prime_norm_vector: need dim >= 3 or -det nonsquare");
  if (!T.count(2)) throw std::invalid_argument("almost_prime_norm_vector: T must contain 2");
  for (auto& p : bad_primes(C))
    if (!T.count(p)) throw std::invalid_argument("almost_prime_norm_vector: bad prime outside T");
  const Lattice& L = C.lattice();
  std::vector<std::tuple<Integer, long, Vec>> parts;
  for (auto& [p, u] : targets) {
    if (!T.count(p)) throw std::invalid_argument("almost_prime_norm_vector: target outside T");
    Vec c = L.coords(u - C.u0());
    for (auto& v : c)
      if (v != 0 && valuation(v, p) < 0) throw std::invalid_argument("almost_prime_norm_vector: target not in L_p + u0");
    parts.emplace_back(p, std::max(0L, precision_from_epsilon(p, eps)), c);
  }
  Integer M;
  IVec c0 = crt_vector(parts, n, M);
  long tried = 0;
  for (long R = 0;; ++R) {
    IVec z(n, -R);
    for (;;) {
      bool shell = R == 0;
      for (auto& v : z) shell = shell || abs(v) == R;
      if (shell) {
        if (++tried > max_candidates) throw BudgetError("almost_prime_norm_vector: candidate budget exceeded");
        Vec c(n);
        for (size_t i = 0; i < n; ++i) c[i] = c0[i] + M * z[i];
        Vec u = C.u0() + L.from_coords(c);
        Rational val = V.q(u);
        if (val != 0) {
          Integer num = abs(val.get_num()), den = val.get_den();
          for (auto& p : T) {
            while (num % p == 0) num /= p;
            while (den % p == 0) den /= p;
          }
          if (den == 1 && is_prime(num)) return {u, num};
        }
      }
      size_t i = 0;
      for (; i < n; ++i) {
        if (++z[i] <= R) break;
        z[i] = -R;
      }
      if (i == n) break;
    }
  }
}

AssociatedData associated_vector(const Vec& x, const Lattice& L, const Integer& p, long s) {
  if (s < 1) throw std::invalid_argument("associated_vector: s must be positive");
  const QuadSpace& V = L.space();
  size_t n = V.dim();
  if (n < 2 || (n == 2 && is_local_square(-V.det(), Place::finite(p))))
    throw std::invalid_argument("associated_vector: need dim >= 3 or -det nonsquare at p");
  if (!is_zero(x)) return associate_nonzero(x, L, p, s);
  if (!is_isotropic(V, Place::finite(p)))
    throw std::invalid_argument("associated_vector: x = 0 needs V_p isotropic");
  // Associate a (near) isotropic x' in p^s L_p; then 0 - y lies in p^s L_p and
  // -q(y) = q(x' - y) - q(x') is checked against K directly.
  for (long prec = 8;; prec += 8) {
    Vec xp = near_isotropic(L, p, s, prec);
    AssociatedData a = associate_nonzero(xp, L, p, s);
    a.xi = xp;
    Rational target = -V.q(a.y);
    if (V.q(xp) == 0) return a;
    RepDecision r = local_represents(LatticeCoset(lattice_of(V, a.K)), p, target, true);
    if (r.verdict == Verdict::Yes) return a;
    if (prec > 200) throw PrecisionError("associated_vector: isotropic approximation did not stabilise");
  }
}

Lattice lattice_of(const QuadSpace& V, const Mat& K) {
  size_t m = K.empty() ? 0 : K[0].size();
  Mat g = zeros(m, m);
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < m; ++j) g[i][j] = V.b(column(K, i), column(K, j));
  return Lattice::standard(QuadSpace(g));
}

class CoverResolver {
 public:
  CoverResolver(TargetSet P, const LatticeCoset& C, const Integer& p, long s)
      : P_(P), C_(C), p_(p), s_(s), n_(C.dim()) {
    v2_ = p == 2 ? 1 : 0;
    for (auto& row : C.lattice().gram())
      for (auto& g : row)
        if (g != 0) m0_ = std::min(m0_, valuation(g, p));
  }

  bool in_target(const IVec& c) const {
    if (P_ == TargetSet::FullCoset) return true;
    for (auto& v : c)
      if (v % p_ != 0) return true;
    return false;
  }

  Vec center(const IVec& c) const {
    Vec b = C_.lattice().from_coords(Vec(c.begin(), c.end()));
    return P_ == TargetSet::FullCoset ? C_.u0() + b : b;
  }

  // Candidates y = b + p^s' z for small z; the first whose perpendicular
  // lattice primitively represents q(b) - q(y) wins once its depth fits `limit`.
  std::optional<CoverBall> associate(const Vec& b, long limit, long& need) const {
    const Lattice& L = C_.lattice();
    const QuadSpace& V = C_.space();
    std::optional<CoverBall> best;
    for (long sp = s_; sp <= s_ + 2 && !(best && need <= limit); ++sp) {
      Rational psp = rpow(Rational(p_), sp);
      IVec z(n_, -1);
      for (;;) {
        Vec zv(z.begin(), z.end());
        if (!is_zero(zv)) {
          Vec y = b + psp * L.from_coords(zv);
          Rational val = V.q(b) - V.q(y);
          if (V.q(y) != 0 && val != 0) {
            Mat K = perp_in_scaled(L, y, p_, s_);
            LatticeCoset KC(lattice_of(V, K));
            if (local_represents(KC, p_, val, true).verdict == Verdict::Yes) {
              long target = valuation(val, p_) + stability_exponent(KC, p_);
              long d = std::max(depth_for(b, target), depth_for(y, target));
              if (!best || d < need) {
                best = CoverBall{b, 0, y, K};
                need = d;
              }
            }
          }
        }
        size_t i = 0;
        for (; i < n_; ++i) {
          if (++z[i] <= 1) break;
          z[i] = -1;
        }
        if (i == n_ || (best && need <= limit)) break;
      }
    }
    return best;
  }

  // Ball at node (c mod p^d), if the node is a leaf of the refinement.
  std::optional<CoverBall> leaf(const IVec& c, long d) const {
    if (d < s_ + 1) return std::nullopt;
    long need = kInfinity;
    auto ball = associate(center(c), d, need);
    if (!ball || need > d) return std::nullopt;
    ball->depth = d;
    return ball;
  }

  // Walks the refinement path of the L-coordinates c down to its leaf.
  const CoverBall* resolve(const Vec& c) {
    for (long d = 1;; ++d) {
      if (d > 256) throw PrecisionError("compact_cover: refinement did not terminate");
      Integer pd = ipow(p_, static_cast<unsigned long>(d));
      IVec k;
      for (auto& v : c) k.push_back(mod_rational(v, pd));
      if (d == 1 && !in_target(k)) return nullptr;
      {
        std::lock_guard<std::mutex> g(mu_);
        auto it = memo_.find({d, k});
        if (it != memo_.end()) return it->second;
      }
      auto ball = leaf(k, d);
      if (!ball) continue;
      std::lock_guard<std::mutex> g(mu_);
      auto [it, fresh] = memo_.try_emplace({d, k}, nullptr);
      if (fresh) {
        store_.push_back(*ball);
        it->second = &store_.back();
      }
      return it->second;
    }
  }

 private:
  // Least depth d >= s with q(z + p^d L_p) inside q(z) + p^target Z_p.
  long depth_for(const Vec& z, long target) const {
    long vb = kInfinity;
    for (size_t j = 0; j < n_; ++j) {
      Rational b = C_.space().b(z, C_.lattice().basis_vector(j));
      if (b != 0) vb = std::min(vb, valuation(b, p_));
    }
    long d = s_;
    while (std::min(vb == kInfinity ? kInfinity : v2_ + d + vb, 2 * d + m0_) < target) ++d;
    return d;
  }

  TargetSet P_;
  LatticeCoset C_;
  Integer p_;
  long s_;
  size_t n_;
  long v2_ = 0;
  long m0_ = kInfinity;
  std::mutex mu_;
  std::deque<CoverBall> store_;
  std::map<std::pair<long, IVec>, const CoverBall*> memo_;
};

const CoverBall* CoverData::ball_of(const LatticeCoset& C, const Vec& x) const {
  const Lattice& L = C.lattice();
  Vec rel = target == TargetSet::FullCoset ? x - C.u0() : x;
  Vec c = L.coords(rel);
  std::set<long> depths;
  for (auto& [key, i] : index) depths.insert(key.first);
  for (long d : depths) {
    Integer pd = ipow(p, static_cast<unsigned long>(d));
    IVec k;
    for (auto& v : c) k.push_back(mod_rational(v, pd));
    auto it = index.find({d, k});
    if (it != index.end()) return &balls[it->second];
  }
  return complete || !resolver ? nullptr : resolver->resolve(c);
}

CoverData compact_cover(TargetSet P, const LatticeCoset& C, const Integer& p, long s, size_t max_balls) {
  if (s < 1) throw std::invalid_argument("compact_cover: s must be positive");
  const QuadSpace& V = C.space();
  size_t n = C.dim();
  if (n < 2 || (n == 2 && is_local_square(-V.det(), Place::finite(p))))
    throw std::invalid_argument("compact_cover: need dim >= 3 or -det nonsquare at p");
  long e = conductor_exponent(C, p);
  bool iso = is_isotropic(V, Place::finite(p));
  if (P == TargetSet::PrimitiveVectors && e > 0)
    throw std::invalid_argument("compact_cover: primitive vectors need u0 in L_p");
  if (P == TargetSet::FullCoset && e == 0 && !iso)
    throw std::invalid_argument("compact_cover: 0 lies in P and V_p is anisotropic");
  CoverData out;
  out.p = p;
  out.s = s;
  out.target = P;
  out.resolver = std::make_shared<CoverResolver>(P, C, p, s);
  const CoverResolver& R = *out.resolver;

  // Breadth-first refinement of the classes of P modulo p^d L_p.
  struct Node {
    IVec c;
    long d;
  };
  std::vector<Node> level;
  long m = p.get_si();
  auto children = [&](const IVec& base, long d, std::vector<Node>& dst) {
    Integer pd = ipow(p, static_cast<unsigned long>(d - 1));
    IVec j(n, 0);
    for (;;) {
      IVec c = base;
      for (size_t i = 0; i < n; ++i) c[i] += j[i] * pd;
      dst.push_back({c, d});
      size_t i = 0;
      for (; i < n; ++i) {
        if (++j[i] < m) break;
        j[i] = 0;
      }
      if (i == n) break;
    }
  };
  children(IVec(n, 0), 1, level);
  while (!level.empty()) {
    std::vector<Node> next;
    for (auto& nd : level) {
      if (!R.in_target(nd.c)) continue;
      if (auto ball = R.leaf(nd.c, nd.d)) {
        out.index[{nd.d, nd.c}] = out.balls.size();
        out.balls.push_back(*ball);
        out.delta_exponent = std::max(out.delta_exponent, nd.d);
        continue;
      }
      children(nd.c, nd.d + 1, next);
      if (next.size() + out.balls.size() > max_balls) {
        // Too many balls to list: keep the leaves found so far and resolve the rest per query.
        out.complete = false;
        return out;
      }
    }
    level = std::move(next);
  }
  out.resolver.reset();
  return out;
}

LTReport verify_lt(const LatticeCoset& C, const std::set<Integer>& T, const Rational& alpha_bound,
                   long nodes_per_alpha) {
  if (C.dim() != 4 || !C.space().is_positive_definite())
    throw std::invalid_argument("verify_lt: positive definite rank-4 coset required");
  if (!T.count(2)) throw std::invalid_argument("verify_lt: T must contain 2");
  for (auto& p : bad_primes(C))
    if (!T.count(p)) throw std::invalid_argument("verify_lt: bad prime outside T");
  const Lattice& L = C.lattice();
  Vec vals{C.q(C.u0())};
  for (size_t i = 0; i < 4; ++i) {
    vals.push_back(2 * C.space().b(C.u0(), L.basis_vector(i)));
    for (size_t j = 0; j < 4; ++j) vals.push_back((i == j ? 1 : 2) * L.gram()[i][j]);
  }
  Integer N = common_denominator(vals);

  LocalOracle oracle(C);
  std::vector<Integer> aniso;
  for (auto& p : T)
    if (!is_isotropic(C.space(), Place::finite(p)) && conductor_exponent(C, p) == 0) aniso.push_back(p);
  Primitivity prim = Primitivity::outside(T);
  Enumerator en(C);
  en.set_node_budget(nodes_per_alpha);
  auto accept = [&](const Vec& x) { return primitive_outside(L, x, prim); };

  LTReport rep;
  rep.alpha_bound = alpha_bound;
  Integer top = floor_q(alpha_bound * N);
  for (Integer k = 1; k <= top; ++k) {
    Rational alpha(k, N);
    alpha.canonicalize();
    if (!oracle.genus(alpha)) continue;
    bool ok = true;
    for (auto& p : aniso) ok = ok && oracle.local(p, alpha, true);
    if (!ok) continue;
    ++rep.admissible_count;
    auto x = en.find(alpha, accept);
    if (x) {
      if (rep.witness_samples.size() < 16 || k == top) rep.witness_samples.emplace_back(alpha, *x);
      continue;
    }
    if (en.budget_exhausted()) rep.budget_exhausted = true;
    rep.failures.push_back(alpha);
    rep.c_hat = alpha;
  }
  return rep;
}

}  // namespace quadrep
