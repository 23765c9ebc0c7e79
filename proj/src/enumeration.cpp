#include "quadrep/enumeration.hpp"

#include <algorithm>
#include <numeric>

namespace quadrep {

namespace {

Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Integer ceil_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Integer isqrt(const Integer& a) {
  Integer r;
  mpz_sqrt(r.get_mpz_t(), a.get_mpz_t());
  return r;
}

}  // namespace

IMat pair_reduce(IMat& g) {
  size_t n = g.size();
  IMat u(n, IVec(n, 0));
  for (size_t i = 0; i < n; ++i) u[i][i] = 1;
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) {
        if (i == j || 2 * abs(g[i][j]) <= g[j][j]) continue;
        Integer k = floor_div(2 * g[i][j] + g[j][j], 2 * g[j][j]);
        Integer gii = g[i][i] - 2 * k * g[i][j] + k * k * g[j][j];
        for (size_t l = 0; l < n; ++l) {
          if (l == i) continue;
          g[i][l] -= k * g[j][l];
          g[l][i] = g[i][l];
        }
        g[i][i] = gii;
        for (size_t r = 0; r < n; ++r) u[r][i] -= k * u[r][j];
        changed = true;
      }
  }
  std::vector<size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(), [&](size_t a, size_t b) { return g[a][a] < g[b][b]; });
  IMat g2(n, IVec(n)), u2(n, IVec(n));
  for (size_t a = 0; a < n; ++a)
    for (size_t b = 0; b < n; ++b) {
      g2[a][b] = g[perm[a]][perm[b]];
      u2[a][b] = u[a][perm[b]];
    }
  g = g2;
  return u2;
}

Enumerator::Enumerator(const LatticeCoset& C) : n_(C.dim()) {
  if (!C.space().is_positive_definite())
    throw std::invalid_argument("Enumerator: coset is not positive definite");
  const Lattice& L = C.lattice();
  Integer D = common_denominator(L.gram());
  IMat g(n_, IVec(n_));
  for (size_t i = 0; i < n_; ++i)
    for (size_t j = 0; j < n_; ++j) g[i][j] = Rational(L.gram()[i][j] * D).get_num();
  IMat u = pair_reduce(g);
  Mat uq = zeros(n_, n_);
  for (size_t i = 0; i < n_; ++i)
    for (size_t j = 0; j < n_; ++j) uq[i][j] = u[i][j];
  basis_ = L.basis() * uq;
  Vec f = inverse(uq) * L.coords(C.u0());
  for (auto& v : f) v = floor_frac(v);
  d_ = common_denominator(f);
  residue_.resize(n_);
  for (size_t i = 0; i < n_; ++i) residue_[i] = Rational(f[i] * d_).get_num();
  scale_ = D * d_ * d_;
  forms_.push_back(g);
  for (size_t k = 0; k + 1 < n_; ++k) {
    const IMat& F = forms_[k];
    IMat H(n_, IVec(n_, 0));
    for (size_t i = k + 1; i < n_; ++i)
      for (size_t j = k + 1; j < n_; ++j) H[i][j] = F[k][k] * F[i][j] - F[k][i] * F[k][j];
    forms_.push_back(H);
  }
}

Vec Enumerator::to_ambient(const IVec& z) const {
  Vec c(n_);
  for (size_t i = 0; i < n_; ++i) c[i] = Rational(z[i], d_);
  for (auto& v : c) v.canonicalize();
  return basis_ * c;
}

bool Enumerator::walk(const Integer& bound, bool exact,
                      const std::function<bool(const IVec&, const Integer&)>& f) const {
  exhausted_ = false;
  if (bound < 0) return true;
  std::vector<Integer> R(n_ + 1);
  R[0] = bound;
  for (size_t k = 0; k < n_; ++k) R[k + 1] = forms_[k][k][k] * R[k];
  IVec z(n_, 0);
  long nodes = 0;
  bool stopped = false;

  std::function<void(size_t, const Integer&)> rec = [&](size_t k, const Integer& vnext) {
    const IMat& F = forms_[k];
    const Integer& h = F[k][k];
    Integer B = 0;
    for (size_t j = k + 1; j < n_; ++j) B += F[k][j] * z[j];
    Integer hpp = (vnext + B * B) / h;
    Integer disc = R[k + 1] - vnext;
    if (disc < 0) return;
    if (exact && k == 0) {
      if (mpz_perfect_square_p(disc.get_mpz_t()) == 0) return;
      Integer s = isqrt(disc);
      for (int sign : {-1, 1}) {
        if (sign == 1 && s == 0) break;
        Integer num = -B + sign * s;
        if (num % h != 0) continue;
        Integer y = num / h;
        Integer m = y - residue_[0];
        if (m % d_ != 0) continue;
        z[0] = y;
        if (!f(z, bound)) {
          stopped = true;
          return;
        }
      }
      return;
    }
    Integer s = isqrt(disc);
    Integer lo = ceil_div(-B - s, h), hi = floor_div(-B + s, h);
    Integer shift = (residue_[k] - lo) % d_;
    if (shift < 0) shift += d_;
    lo += shift;
    for (Integer y = lo; y <= hi; y += d_) {
      if (budget_ > 0 && ++nodes > budget_) {
        exhausted_ = true;
        stopped = true;
        return;
      }
      z[k] = y;
      Integer v = h * y * y + 2 * B * y + hpp;
      if (k == 0) {
        if (v != 0 && !f(z, v)) {
          stopped = true;
          return;
        }
      } else {
        rec(k - 1, v);
      }
      if (stopped) return;
    }
    z[k] = 0;
  };
  rec(n_ - 1, Integer(0));
  return !stopped;
}

bool Enumerator::visit(const Rational& bound,
                       const std::function<bool(const Vec&, const Rational&)>& f) const {
  if (bound <= 0) return true;
  Integer R = floor_q(bound * scale_);
  return walk(R, false, [&](const IVec& z, const Integer& v) {
    Rational val(v, scale_);
    val.canonicalize();
    return f(to_ambient(z), val);
  });
}

bool Enumerator::visit_value(const Rational& alpha, const std::function<bool(const Vec&)>& f) const {
  if (alpha < 0) return true;
  if (alpha == 0) {
    bool zero_in = std::all_of(residue_.begin(), residue_.end(), [](const Integer& r) { return r == 0; });
    return zero_in ? f(Vec(n_, 0)) : true;
  }
  Rational t = alpha * scale_;
  if (t.get_den() != 1) return true;
  return walk(t.get_num(), true, [&](const IVec& z, const Integer&) { return f(to_ambient(z)); });
}

std::optional<Vec> Enumerator::find(const Rational& alpha,
                                    const std::function<bool(const Vec&)>& accept) const {
  std::optional<Vec> out;
  visit_value(alpha, [&](const Vec& x) {
    if (accept && !accept(x)) return true;
    out = x;
    return false;
  });
  return out;
}

std::vector<Vec> shortest_vectors(const Lattice& L, const Rational& bound) {
  std::vector<Vec> out;
  Enumerator(LatticeCoset(L)).visit(bound, [&](const Vec& x, const Rational&) {
    out.push_back(x);
    return true;
  });
  return out;
}

}  // namespace quadrep
