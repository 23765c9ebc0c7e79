#include "quadrep/matrix.hpp"

#include <stdexcept>

namespace quadrep {

Mat identity(size_t n) {
  Mat r = zeros(n, n);
  for (size_t i = 0; i < n; ++i) r[i][i] = 1;
  return r;
}

Mat zeros(size_t r, size_t c) { return Mat(r, Vec(c, Rational(0))); }

Mat diagonal(const Vec& d) {
  Mat r = zeros(d.size(), d.size());
  for (size_t i = 0; i < d.size(); ++i) r[i][i] = d[i];
  return r;
}

Mat transpose(const Mat& a) {
  if (a.empty()) return a;
  Mat r = zeros(a[0].size(), a.size());
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[0].size(); ++j) r[j][i] = a[i][j];
  return r;
}

Mat operator*(const Mat& a, const Mat& b) {
  size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  Mat r = zeros(n, m);
  for (size_t i = 0; i < n; ++i)
    for (size_t l = 0; l < k; ++l) {
      if (a[i][l] == 0) continue;
      for (size_t j = 0; j < m; ++j) r[i][j] += a[i][l] * b[l][j];
    }
  return r;
}

Vec operator*(const Mat& a, const Vec& x) {
  Vec r(a.size(), 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < x.size(); ++j) r[i] += a[i][j] * x[j];
  return r;
}

Vec operator+(const Vec& a, const Vec& b) {
  Vec r(a);
  for (size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

Vec operator-(const Vec& a, const Vec& b) {
  Vec r(a);
  for (size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

Vec operator*(const Rational& s, const Vec& x) {
  Vec r(x);
  for (auto& v : r) v *= s;
  return r;
}

Mat operator*(const Rational& s, const Mat& a) {
  Mat r(a);
  for (auto& row : r)
    for (auto& v : row) v *= s;
  return r;
}

Rational dot(const Vec& a, const Vec& b) {
  Rational r = 0;
  for (size_t i = 0; i < a.size(); ++i) r += a[i] * b[i];
  return r;
}

Rational bilinear(const Mat& g, const Vec& x, const Vec& y) { return dot(x, g * y); }
Rational quad(const Mat& g, const Vec& x) { return bilinear(g, x, x); }

namespace {

// Gaussian elimination to row echelon form; returns the determinant sign/product
// bookkeeping through the callback-free interface below.
size_t echelon(Mat& a, Rational* det_out) {
  size_t n = a.size(), m = n ? a[0].size() : 0, r = 0;
  Rational d = 1;
  for (size_t c = 0; c < m && r < n; ++c) {
    size_t piv = r;
    while (piv < n && a[piv][c] == 0) ++piv;
    if (piv == n) {
      d = 0;
      continue;
    }
    if (piv != r) {
      std::swap(a[piv], a[r]);
      d = -d;
    }
    d *= a[r][c];
    for (size_t i = r + 1; i < n; ++i) {
      if (a[i][c] == 0) continue;
      Rational k = a[i][c] / a[r][c];
      for (size_t j = c; j < m; ++j) a[i][j] -= k * a[r][j];
    }
    ++r;
  }
  if (det_out) *det_out = (r == n && n == m) ? d : Rational(0);
  return r;
}

}  // namespace

Rational det(const Mat& a0) {
  if (a0.empty()) return 1;
  Mat a = a0;
  Rational d;
  echelon(a, &d);
  return d;
}

size_t rank(const Mat& a0) {
  Mat a = a0;
  return echelon(a, nullptr);
}

Mat inverse(const Mat& a0) {
  size_t n = a0.size();
  Mat a = a0, inv = identity(n);
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    while (piv < n && a[piv][c] == 0) ++piv;
    if (piv == n) throw std::domain_error("inverse: singular matrix");
    std::swap(a[piv], a[c]);
    std::swap(inv[piv], inv[c]);
    Rational k = a[c][c];
    for (size_t j = 0; j < n; ++j) {
      a[c][j] /= k;
      inv[c][j] /= k;
    }
    for (size_t i = 0; i < n; ++i) {
      if (i == c || a[i][c] == 0) continue;
      Rational f = a[i][c];
      for (size_t j = 0; j < n; ++j) {
        a[i][j] -= f * a[c][j];
        inv[i][j] -= f * inv[c][j];
      }
    }
  }
  return inv;
}

bool is_zero(const Vec& x) {
  for (const auto& v : x)
    if (v != 0) return false;
  return true;
}

bool is_integral(const Vec& x) {
  for (const auto& v : x)
    if (v.get_den() != 1) return false;
  return true;
}

bool is_integral(const Mat& a) {
  for (const auto& r : a)
    if (!is_integral(r)) return false;
  return true;
}

Integer common_denominator(const Vec& x) {
  Integer d = 1;
  for (const auto& v : x) d = lcm(d, v.get_den());
  return d;
}

Integer common_denominator(const Mat& a) {
  Integer d = 1;
  for (const auto& r : a) d = lcm(d, common_denominator(r));
  return d;
}

Vec column(const Mat& a, size_t j) {
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i][j];
  return r;
}

Mat from_columns(const std::vector<Vec>& cols, size_t n) {
  Mat r = zeros(n, cols.size());
  for (size_t j = 0; j < cols.size(); ++j)
    for (size_t i = 0; i < n; ++i) r[i][j] = cols[j][i];
  return r;
}

Integer floor_q(const Rational& x) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return r;
}

Rational floor_frac(const Rational& x) { return x - Rational(floor_q(x)); }

namespace {

// Integer Hermite reduction of the column module of a (n rows); returns n columns.
IMat hermite_integer(IMat cols, size_t n) {
  size_t m = cols.size();
  for (size_t i = 0; i < n; ++i) {
    // combine entries of row i in columns i..m-1 into column i
    size_t piv = i;
    while (piv < m && cols[piv][i] == 0) ++piv;
    if (piv == m) throw std::domain_error("hermite_basis: generators not of full rank");
    std::swap(cols[i], cols[piv]);
    for (size_t j = i + 1; j < m; ++j) {
      if (cols[j][i] == 0) continue;
      Integer a = cols[i][i], b = cols[j][i], g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
      Integer ag = a / g, bg = b / g;
      for (size_t r = i; r < n; ++r) {
        Integer x = cols[i][r], y = cols[j][r];
        cols[i][r] = s * x + t * y;
        cols[j][r] = -bg * x + ag * y;
      }
    }
    if (cols[i][i] < 0)
      for (size_t r = i; r < n; ++r) cols[i][r] = -cols[i][r];
    for (size_t j = 0; j < i; ++j) {
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), cols[j][i].get_mpz_t(), cols[i][i].get_mpz_t());
      if (q != 0)
        for (size_t r = i; r < n; ++r) cols[j][r] -= q * cols[i][r];
    }
  }
  cols.resize(n);
  return cols;
}

}  // namespace

Mat hermite_basis(const std::vector<Vec>& generators, size_t n) {
  Integer d = 1;
  for (const auto& g : generators) d = lcm(d, common_denominator(g));
  IMat cols;
  for (const auto& g : generators) {
    IVec c(n);
    for (size_t i = 0; i < n; ++i) c[i] = Rational(g[i] * d).get_num();
    bool nz = false;
    for (auto& v : c) nz = nz || v != 0;
    if (nz) cols.push_back(c);
  }
  IMat h = hermite_integer(cols, n);
  Mat r = zeros(n, n);
  for (size_t j = 0; j < n; ++j)
    for (size_t i = 0; i < n; ++i) {
      r[i][j] = Rational(h[j][i], d);
      r[i][j].canonicalize();
    }
  return r;
}

Mat congruence_kernel(const IMat& rows, const Integer& m, size_t n) {
  // Solutions form a lattice containing m Z^n; generate it from m e_i and
  // a basis of the kernel mod m via successive single-congruence reduction.
  std::vector<Vec> gens;
  Mat basis = identity(n);
  for (const auto& row : rows) {
    // current lattice has basis columns b_j; impose row . x == 0 mod m
    std::vector<Vec> cur;
    for (size_t j = 0; j < n; ++j) cur.push_back(column(basis, j));
    IVec vals;
    for (auto& b : cur) {
      Integer v = 0;
      for (size_t i = 0; i < n; ++i) v += row[i] * b[i].get_num();
      mpz_fdiv_r(v.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t());
      vals.push_back(v);
    }
    // x = sum c_j b_j, condition sum c_j vals_j == 0 mod m
    std::vector<Vec> next;
    Integer g = m;
    for (auto& v : vals) g = gcd(g, v);
    // kernel of c -> sum c_j vals_j mod m in Z^n: Hermite of the relation lattice
    size_t k = cur.size();
    IMat rel;  // generators of kernel lattice in c-coordinates
    {
      // reduce with extended gcd chain: build unimodular transform making vals (g,0,...)
      IMat u(k, IVec(k, 0));
      for (size_t i = 0; i < k; ++i) u[i][i] = 1;
      IVec w = vals;
      for (size_t j = 1; j < k; ++j) {
        if (w[j] == 0) continue;
        Integer a = w[0], b = w[j], gg, s, t;
        mpz_gcdext(gg.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
        Integer ag = a / gg, bg = b / gg;
        for (size_t r = 0; r < k; ++r) {
          Integer x = u[0][r], y = u[j][r];
          u[0][r] = s * x + t * y;
          u[j][r] = -bg * x + ag * y;
        }
        w[0] = gg;
        w[j] = 0;
      }
      // now combos u[j] (j>=1) have value 0; u[0] has value w[0]
      for (size_t j = 1; j < k; ++j) rel.push_back(u[j]);
      Integer step = m / gcd(m, w[0]);
      IVec c0 = u[0];
      for (auto& x : c0) x *= step;
      rel.push_back(c0);
    }
    for (auto& c : rel) {
      Vec x(n, 0);
      for (size_t j = 0; j < k; ++j)
        if (c[j] != 0) x = x + Rational(c[j]) * cur[j];
      next.push_back(x);
    }
    basis = hermite_basis(next, n);
  }
  return basis;
}

std::vector<Vec> kernel(const Mat& a0) {
  Mat a = a0;
  size_t n = a.size(), m = n ? a[0].size() : 0;
  std::vector<size_t> pivcol;
  size_t r = 0;
  for (size_t c = 0; c < m && r < n; ++c) {
    size_t piv = r;
    while (piv < n && a[piv][c] == 0) ++piv;
    if (piv == n) continue;
    std::swap(a[piv], a[r]);
    Rational k = a[r][c];
    for (size_t j = 0; j < m; ++j) a[r][j] /= k;
    for (size_t i = 0; i < n; ++i) {
      if (i == r || a[i][c] == 0) continue;
      Rational f = a[i][c];
      for (size_t j = 0; j < m; ++j) a[i][j] -= f * a[r][j];
    }
    pivcol.push_back(c);
    ++r;
  }
  std::vector<Vec> res;
  std::vector<bool> is_piv(m, false);
  for (auto c : pivcol) is_piv[c] = true;
  for (size_t f = 0; f < m; ++f) {
    if (is_piv[f]) continue;
    Vec x(m, 0);
    x[f] = 1;
    for (size_t i = 0; i < pivcol.size(); ++i) x[pivcol[i]] = -a[i][f];
    res.push_back(x);
  }
  return res;
}

std::pair<Mat, Vec> diagonalize(const Mat& g0) {
  size_t n = g0.size();
  Mat g = g0, p = identity(n);
  // column operations on p mirror congruence g -> E^T g E
  auto add_col = [&](size_t dst, size_t src, const Rational& k) {
    // e_dst += k e_src
    for (size_t i = 0; i < n; ++i) p[i][dst] += k * p[i][src];
    for (size_t i = 0; i < n; ++i) g[i][dst] += k * g[i][src];
    for (size_t j = 0; j < n; ++j) g[dst][j] += k * g[src][j];
  };
  for (size_t i = 0; i < n; ++i) {
    if (g[i][i] == 0) {
      size_t j = i + 1;
      while (j < n && g[j][j] == 0) ++j;
      if (j < n) {
        // swap basis vectors i and j
        for (size_t r = 0; r < n; ++r) std::swap(p[r][i], p[r][j]);
        std::swap(g[i], g[j]);
        for (size_t r = 0; r < n; ++r) std::swap(g[r][i], g[r][j]);
      } else {
        j = i + 1;
        while (j < n && g[i][j] == 0) ++j;
        if (j == n) throw std::domain_error("diagonalize: degenerate form");
        add_col(i, j, 1);  // q(e_i + e_j) = 2 g_ij != 0
      }
    }
    for (size_t j = i + 1; j < n; ++j) {
      if (g[i][j] == 0) continue;
      add_col(j, i, -g[i][j] / g[i][i]);
    }
  }
  Vec d(n);
  for (size_t i = 0; i < n; ++i) d[i] = g[i][i];
  return {p, d};
}

}  // namespace quadrep
