#include "quadrep/lattice.hpp"

namespace quadrep {

Lattice::Lattice(QuadSpace space, const Mat& basis) : space_(std::move(space)) {
  size_t n = space_.dim();
  std::vector<Vec> gens;
  for (size_t j = 0; j < (basis.empty() ? 0 : basis[0].size()); ++j) gens.push_back(column(basis, j));
  basis_ = hermite_basis(gens, n);
  basis_inv_ = inverse(basis_);
  gram_ = transpose(basis_) * space_.gram() * basis_;
  det_ = quadrep::det(gram_);
}

Lattice Lattice::standard(const QuadSpace& space) { return Lattice(space, identity(space.dim())); }

bool Lattice::contains(const Lattice& m) const {
  for (size_t j = 0; j < m.dim(); ++j)
    if (!contains(m.basis_vector(j))) return false;
  return true;
}

Lattice Lattice::sum(const std::vector<Vec>& extra) const {
  std::vector<Vec> gens;
  for (size_t j = 0; j < dim(); ++j) gens.push_back(basis_vector(j));
  for (const auto& v : extra) gens.push_back(v);
  return Lattice(space_, from_columns(gens, dim()));
}

Lattice Lattice::scaled(const Rational& lambda) const { return Lattice(space_, lambda * basis_); }

Lattice Lattice::dual() const { return Lattice(space_, basis_ * inverse(gram_)); }

Lattice Lattice::intersect(const Lattice& m) const {
  Mat t = m.basis_inv_ * basis_;
  Integer d = common_denominator(t);
  IMat rows;
  for (const auto& r : t) {
    IVec row;
    for (const auto& v : r) row.push_back(Rational(v * d).get_num());
    rows.push_back(row);
  }
  Mat k = congruence_kernel(rows, d, dim());
  return Lattice(space_, basis_ * k);
}

Lattice Lattice::transformed(const Mat& sigma) const { return Lattice(space_, sigma * basis_); }

bool Lattice::is_integral() const { return quadrep::is_integral(gram_); }

LatticeCoset::LatticeCoset(Lattice lattice, const Vec& u0) : lattice_(std::move(lattice)) {
  if (u0.size() != lattice_.dim()) throw std::invalid_argument("LatticeCoset: dimension mismatch");
  Vec c = lattice_.coords(u0);
  for (auto& x : c) x = floor_frac(x);
  u0_ = lattice_.from_coords(c);
}

LatticeCoset::LatticeCoset(Lattice lattice) : LatticeCoset(lattice, Vec(lattice.dim(), 0)) {}

Lattice LatticeCoset::span_lattice() const { return is_lattice() ? lattice_ : lattice_.sum({u0_}); }

long coefficient_exponent(const Vec& x, const Lattice& L, const Integer& p) {
  if (is_zero(x)) throw std::invalid_argument("coefficient_exponent: zero vector");
  long m = kInfinity;
  for (const auto& c : L.coords(x)) m = std::min(m, valuation(c, p));
  return -m;
}

std::set<Integer> conductor_set(const LatticeCoset& C) {
  std::set<Integer> r;
  Integer d = common_denominator(C.lattice().coords(C.u0()));
  if (d != 1)
    for (auto& p : prime_divisors(d)) r.insert(p);
  return r;
}

std::set<Integer> bad_primes(const LatticeCoset& C) {
  std::set<Integer> r = conductor_set(C);
  r.insert(2);
  const Lattice& L = C.lattice();
  Rational d = L.det();
  for (auto& p : prime_divisors(d.get_num() * d.get_den())) r.insert(p);
  Integer den = common_denominator(L.gram());
  if (den != 1)
    for (auto& p : prime_divisors(den)) r.insert(p);
  return r;
}

Mat reflection(const Mat& gram, const Vec& z) {
  size_t n = z.size();
  Rational qz = quad(gram, z);
  if (qz == 0) throw std::invalid_argument("reflection: isotropic vector");
  Vec gz = gram * z;
  Mat r = identity(n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) r[i][j] -= 2 * z[i] * gz[j] / qz;
  return r;
}

bool stabilizes_locally(const Lattice& L, const Mat& sigma, const Integer& p) {
  Mat t = inverse(L.basis()) * sigma * L.basis();
  for (const auto& row : t)
    for (const auto& v : row)
      if (valuation(v, p) < 0) return false;
  return valuation(det(t), p) == 0;
}

namespace {

bool congruent(const Rational& a, const Rational& b, const Integer& p, long prec) {
  return a == b || valuation(a - b, p) >= prec;
}

bool verify_transporter(const Lattice& L, const Integer& p, const Mat& s, const Vec& x, const Vec& y,
                        const Rational& mu, long prec) {
  const Mat& g = L.space().gram();
  Mat st = transpose(s) * g * s;
  for (size_t i = 0; i < g.size(); ++i)
    for (size_t j = 0; j < g.size(); ++j)
      if (!congruent(st[i][j], g[i][j], p, prec)) return false;
  if (!stabilizes_locally(L, s, p)) return false;
  Vec sx = s * x;
  for (size_t i = 0; i < x.size(); ++i)
    if (!congruent(sx[i], mu * y[i], p, prec)) return false;
  return true;
}

}  // namespace

std::optional<IsometryMatrix> line_transporter(const Lattice& L, const Integer& p, const Vec& x,
                                               const Vec& y, long precision) {
  if (is_zero(x)) throw std::invalid_argument("line_transporter: zero vector");
  const QuadSpace& V = L.space();
  const Mat& g = V.gram();
  if (x == y) return IsometryMatrix{identity(x.size()), true};
  Rational qx = V.q(x), qy = V.q(y);
  if (qx == 0 || qy == 0) return std::nullopt;
  Lattice Ld = L.dual();
  long j = coefficient_exponent(x, Ld, p);
  if (j != coefficient_exponent(y, Ld, p)) return std::nullopt;
  Rational r = qx / qy;
  if (valuation(r, p) != 0 || !is_local_square(r, Place{p})) return std::nullopt;
  long work = precision + 2 * std::abs(valuation(qx, p)) + 8;
  for (const auto& row : L.gram())
    for (const auto& v : row)
      if (v != 0) work += std::max(0L, -valuation(v, p));
  auto root = hensel_root(Polynomial({-r, 0, 1}), p, work);
  if (!root) return std::nullopt;
  Rational lam = root->value();
  // closeness: p^j (mu y - x) in L_p for the admissible signs of mu
  std::vector<int> signs;
  for (int sgn_l : {1, -1}) {
    Vec d = rpow(Rational(p), j) * (sgn_l * lam * y - x);
    bool ok = true;
    for (const auto& c : L.coords(d)) ok = ok && valuation(c, p) >= 0;
    if (ok) signs.push_back(sgn_l);
  }
  if (signs.empty()) return std::nullopt;
  for (int sgn_l : signs) {
    Rational mu = sgn_l * lam;
    Vec z = x - mu * y;
    if (!is_zero(z) && V.q(z) != 0) {
      Mat s = reflection(g, z);
      if (verify_transporter(L, p, s, x, y, mu, precision)) return IsometryMatrix{s, false};
    }
  }
  // Two reflections: first move x by tau_w for a basis vector w, then reflect onto y.
  for (size_t k = 0; k < L.dim(); ++k) {
    Vec w = L.basis_vector(k);
    if (V.q(w) == 0) continue;
    Mat t1 = reflection(g, w);
    if (!stabilizes_locally(L, t1, p)) continue;
    Vec x1 = t1 * x;
    for (int sgn_l : signs) {
      Rational mu = sgn_l * lam;
      Vec z = x1 - mu * y;
      if (is_zero(z) || V.q(z) == 0) continue;
      Mat s = reflection(g, z) * t1;
      if (verify_transporter(L, p, s, x, y, mu, precision)) return IsometryMatrix{s, true};
    }
  }
  return std::nullopt;
}

}  // namespace quadrep
