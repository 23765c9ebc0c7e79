#include "quadrep/quadspace.hpp"

#include <set>

namespace quadrep {

QuadSpace::QuadSpace(Mat gram) : gram_(std::move(gram)) {
  size_t n = gram_.size();
  if (n == 0) throw std::invalid_argument("QuadSpace: empty gram");
  for (size_t i = 0; i < n; ++i) {
    if (gram_[i].size() != n) throw std::invalid_argument("QuadSpace: gram not square");
    for (size_t j = 0; j < i; ++j)
      if (gram_[i][j] != gram_[j][i]) throw std::invalid_argument("QuadSpace: gram not symmetric");
  }
  det_ = quadrep::det(gram_);
  if (det_ == 0) throw std::invalid_argument("QuadSpace: degenerate gram");
  std::tie(diag_basis_, diag_) = diagonalize(gram_);
}

bool QuadSpace::is_positive_definite() const {
  for (const auto& a : diag_)
    if (sgn(a) <= 0) return false;
  return true;
}

bool QuadSpace::is_definite() const {
  int pos = 0;
  for (const auto& a : diag_) pos += sgn(a) > 0;
  return pos == 0 || pos == static_cast<int>(dim());
}

QuadSpace QuadSpace::with_extra(const Rational& a) const {
  size_t n = dim();
  Mat g = zeros(n + 1, n + 1);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) g[i][j] = gram_[i][j];
  g[n][n] = a;
  return QuadSpace(g);
}

int hasse_of_diagonal(const Vec& d, const Place& v) {
  int h = 1;
  for (size_t i = 0; i < d.size(); ++i)
    for (size_t j = i + 1; j < d.size(); ++j) h *= hilbert_symbol(d[i], d[j], v);
  return h;
}

int SpaceInvariants::hasse(const Place& v) const {
  if (v.is_real()) {
    // prod (a_i,a_j)_inf = (-1)^{s(s-1)/2}
    return (negative * (negative - 1) / 2) % 2 ? -1 : 1;
  }
  auto it = hasse_bad.find(v.p);
  return it == hasse_bad.end() ? 1 : it->second;
}

bool SpaceInvariants::operator==(const SpaceInvariants& o) const {
  if (dim != o.dim || positive != o.positive || negative != o.negative) return false;
  std::set<Integer> ps;
  for (auto& [p, h] : hasse_bad) ps.insert(p);
  for (auto& [p, h] : o.hasse_bad) ps.insert(p);
  ps.insert(2);
  for (auto& p : prime_divisors(det.get_num() * det.get_den())) ps.insert(p);
  for (auto& p : prime_divisors(o.det.get_num() * o.det.get_den())) ps.insert(p);
  for (const auto& p : ps) {
    Place v{p};
    if (!(det_class(v) == o.det_class(v))) return false;
    if (hasse(v) != o.hasse(v)) return false;
  }
  return sgn(det) == sgn(o.det);
}

SpaceInvariants invariants(const QuadSpace& V) {
  SpaceInvariants inv;
  inv.dim = V.dim();
  inv.det = V.det();
  std::set<Integer> ps{2};
  for (const auto& a : V.diag()) {
    (sgn(a) > 0 ? inv.positive : inv.negative)++;
    for (auto& p : prime_divisors(a.get_num() * a.get_den())) ps.insert(p);
  }
  for (const auto& p : ps) {
    int h = hasse_of_diagonal(V.diag(), Place{p});
    if (h == -1) inv.hasse_bad[p] = -1;
  }
  return inv;
}

bool is_isotropic(const QuadSpace& V, const Place& v) {
  const Vec& a = V.diag();
  size_t n = a.size();
  if (v.is_real()) return !V.is_definite();
  if (n == 1) return false;
  if (n >= 5) return true;
  Rational d = V.det();
  int eps = hasse_of_diagonal(a, v);
  if (n == 2) return is_local_square(-d, v);
  if (n == 3) return hilbert_symbol(-1, -d, v) == eps;
  // n == 4
  if (!is_local_square(d, v)) return true;
  return eps == hilbert_symbol(-1, -1, v);
}

bool represents_over_completion(const QuadSpace& V, const Rational& alpha, const Place& v) {
  if (alpha == 0) return is_isotropic(V, v);
  const Vec& a = V.diag();
  size_t n = a.size();
  if (v.is_real()) {
    for (const auto& x : a)
      if (sgn(x) == sgn(alpha)) return true;
    return false;
  }
  Rational d = V.det();
  if (n == 1) return is_local_square(alpha / d, v);
  if (n >= 4) return true;
  int eps = hasse_of_diagonal(a, v);
  if (n == 2) return hilbert_symbol(alpha, -d, v) == eps;
  if (!(square_class(alpha, v) == square_class(-d, v))) return true;
  return hilbert_symbol(-1, -d, v) == eps;
}

}  // namespace quadrep
