#include "quadrep/genusenum.hpp"
#include "quadrep/lattice.hpp"

#include <algorithm>
#include <sstream>

namespace quadrep {

JordanData jordan_decomposition(const Lattice& L, const Integer& p, long /*precision*/) {
  // Exact splitting over Z_(p): rational arithmetic with denominators prime to p.
  const Mat& g = L.space().gram();
  std::vector<Vec> vs;
  for (size_t j = 0; j < L.dim(); ++j) vs.push_back(L.basis_vector(j));
  struct Block {
    long scale;
    std::vector<Vec> vecs;
  };
  std::vector<Block> blocks;
  while (!vs.empty()) {
    size_t k = vs.size();
    Mat m = zeros(k, k);
    for (size_t i = 0; i < k; ++i)
      for (size_t j = i; j < k; ++j) m[i][j] = m[j][i] = bilinear(g, vs[i], vs[j]);
    long best = kInfinity;
    size_t bi = 0, bj = 0;
    for (size_t i = 0; i < k; ++i)
      for (size_t j = i; j < k; ++j) {
        long v = valuation(m[i][j], p);
        // prefer diagonal entries at equal valuation
        if (v < best || (v == best && i == j && bi != bj)) {
          best = v;
          bi = i;
          bj = j;
        }
      }
    if (best == kInfinity) throw std::domain_error("jordan_decomposition: degenerate lattice");
    std::vector<size_t> blk;
    if (bi == bj) {
      blk = {bi};
    } else if (p != 2) {
      vs[bi] = vs[bi] + vs[bj];
      blk = {bi};
    } else {
      blk = {bi, bj};
    }
    if (blk.size() == 1 && bi != bj) {
      // recompute row bi after the basis change
      for (size_t j = 0; j < k; ++j) m[bi][j] = m[j][bi] = bilinear(g, vs[bi], vs[j]);
    }
    size_t b = blk.size();
    Mat mbb = zeros(b, b);
    for (size_t a = 0; a < b; ++a)
      for (size_t c = 0; c < b; ++c) mbb[a][c] = m[blk[a]][blk[c]];
    Mat inv = inverse(mbb);
    std::vector<Vec> rest;
    for (size_t i = 0; i < k; ++i) {
      if (std::find(blk.begin(), blk.end(), i) != blk.end()) continue;
      Vec rhs(b);
      for (size_t a = 0; a < b; ++a) rhs[a] = m[blk[a]][i];
      Vec c = inv * rhs;
      Vec w = vs[i];
      for (size_t a = 0; a < b; ++a) w = w - c[a] * vs[blk[a]];
      rest.push_back(w);
    }
    Block nb{best, {}};
    for (auto i : blk) nb.vecs.push_back(vs[i]);
    blocks.push_back(std::move(nb));
    vs = std::move(rest);
  }
  std::stable_sort(blocks.begin(), blocks.end(),
                   [](const Block& a, const Block& b) { return a.scale < b.scale; });
  JordanData jd{p, {}};
  for (auto& blk : blocks) {
    if (jd.components.empty() || jd.components.back().scale != blk.scale)
      jd.components.push_back(JordanComponent{blk.scale, 0, {}, {}});
    auto& c = jd.components.back();
    std::vector<Vec> cols;
    for (size_t j = 0; j < c.rank; ++j) cols.push_back(column(c.basis, j));
    for (auto& v : blk.vecs) cols.push_back(v);
    c.rank = cols.size();
    c.basis = from_columns(cols, L.dim());
  }
  for (auto& c : jd.components) {
    Rational f = rpow(Rational(p), -c.scale);
    c.unit_gram = f * (transpose(c.basis) * g * c.basis);
  }
  return jd;
}

namespace {

// Oddity of an odd unimodular Z_2-form with given rank, unit determinant and
// Hasse invariant: such forms are classified by these data, so any diagonal
// form with matching data has the same trace mod 8.
long oddity_from_invariants(size_t n, long det8, int hasse) {
  static const int units[4] = {1, 3, 5, 7};
  std::vector<int> idx(n, 0);
  Place two{2};
  for (;;) {
    long prod = 1, tr = 0;
    Vec d;
    for (size_t i = 0; i < n; ++i) {
      prod = (prod * units[idx[i]]) % 8;
      tr += units[idx[i]];
      d.push_back(units[idx[i]]);
    }
    if (prod == det8 && hasse_of_diagonal(d, two) == hasse) return tr % 8;
    size_t i = 0;
    while (i < n && ++idx[i] == 4) idx[i++] = 0;
    if (i == n) break;
  }
  throw std::logic_error("oddity_from_invariants: no diagonal form");
}

std::vector<std::vector<size_t>> compartments(const std::vector<std::array<long, 5>>& s) {
  std::vector<std::vector<size_t>> res;
  size_t i = 0, r = s.size();
  while (i < r) {
    if (s[i][3] == 1) {
      long v = s[i][0];
      std::vector<size_t> c;
      while (i < r && s[i][3] == 1 && s[i][0] == v) {
        c.push_back(i);
        ++i;
        ++v;
      }
      res.push_back(c);
    } else {
      ++i;
    }
  }
  return res;
}

std::vector<std::vector<size_t>> trains(const std::vector<std::array<long, 5>>& s) {
  std::vector<std::vector<size_t>> res;
  if (s.empty()) return res;
  std::vector<size_t> cur{0};
  for (size_t i = 1; i < s.size(); ++i) {
    const auto& prev = s[i - 1];
    const auto& c = s[i];
    long gap = c[0] - prev[0];
    bool brk = gap > 2 || (gap == 2 && c[3] * prev[3] == 0) || (prev[3] == 0 && c[3] == 0);
    if (brk) {
      res.push_back(cur);
      cur = {i};
    } else {
      cur.push_back(i);
    }
  }
  res.push_back(cur);
  return res;
}

void canonical_2adic(std::vector<std::array<long, 5>>& s) {
  for (auto& e : s) e[2] = (e[2] == 1 || e[2] == 7) ? 1 : -1;
  auto comps = compartments(s);
  for (auto& c : comps) {
    long odd = 0;
    for (auto i : c) {
      odd += s[i][4];
      s[i][4] = 0;
    }
    s[c[0]][4] = ((odd % 8) + 8) % 8;
  }
  for (auto& tr : trains(s)) {
    size_t t = tr.size();
    for (size_t i = 0; i + 1 < t; ++i) {
      size_t t1 = tr[t - i - 1];
      if (s[t1][2] == -1) {
        s[t1][2] = 1;
        s[t1 - 1][2] *= -1;
        for (auto& c : comps) {
          bool hit = std::find(c.begin(), c.end(), t1 - 1) != c.end() ||
                     std::find(c.begin(), c.end(), t1) != c.end();
          if (hit) s[c[0]][4] = (s[c[0]][4] + 4) % 8;
        }
      }
    }
  }
}

}  // namespace

LocalSymbol local_symbol(const Lattice& L, const Integer& p) {
  JordanData jd = jordan_decomposition(L, p);
  LocalSymbol sym{p, {}};
  for (const auto& c : jd.components) {
    Rational d = det(c.unit_gram);
    if (p != 2) {
      long leg = square_class(d, Place{p}).unit;
      sym.entries.push_back({c.scale, static_cast<long>(c.rank), leg, 0, 0});
      continue;
    }
    long det8 = mod_rational(d, 8).get_si();
    bool odd = false;
    for (size_t i = 0; i < c.rank; ++i) odd = odd || valuation(c.unit_gram[i][i], Integer(2)) == 0;
    long oddity = 0;
    if (odd) {
      int h = hasse_of_diagonal(diagonalize(c.unit_gram).second, Place{2});
      oddity = oddity_from_invariants(c.rank, det8, h);
    }
    sym.entries.push_back({c.scale, static_cast<long>(c.rank), det8, odd ? 1 : 0, oddity});
  }
  if (p == 2) canonical_2adic(sym.entries);
  return sym;
}

std::string LocalSymbol::to_string() const {
  std::ostringstream os;
  os << p.get_str() << ":";
  for (const auto& e : entries) {
    os << " [" << e[0] << "," << e[1] << "," << e[2];
    if (p == 2) os << "," << (e[3] ? "I" : "II") << "," << e[4];
    os << "]";
  }
  return os.str();
}

namespace {

std::set<Integer> lattice_bad_primes(const Lattice& L) {
  std::set<Integer> r{2};
  Rational d = L.det();
  for (auto& p : prime_divisors(d.get_num() * d.get_den())) r.insert(p);
  Integer den = common_denominator(L.gram());
  if (den != 1)
    for (auto& p : prime_divisors(den)) r.insert(p);
  return r;
}

}  // namespace

GenusSymbol genus_symbol(const LatticeCoset& C) {
  GenusSymbol g;
  const Lattice& L = C.lattice();
  g.space = invariants(L.space());
  g.det = L.det();
  for (const auto& p : lattice_bad_primes(L)) g.local.push_back(local_symbol(L, p));
  g.conductor = conductor_set(C);
  if (!g.conductor.empty()) {
    Lattice S = C.span_lattice();
    for (const auto& p : g.conductor) {
      g.span_local.push_back(local_symbol(S, p));
      g.conductor_orders.push_back((valuation(L.det(), p) - valuation(S.det(), p)) / 2);
    }
  }
  return g;
}

bool GenusSymbol::operator==(const GenusSymbol& o) const {
  return det == o.det && space.positive == o.space.positive && space.negative == o.space.negative &&
         local == o.local && conductor == o.conductor && span_local == o.span_local &&
         conductor_orders == o.conductor_orders;
}

bool same_lattice_genus(const Lattice& A, const Lattice& B) {
  if (A.dim() != B.dim() || A.det() != B.det()) return false;
  auto ia = invariants(A.space()), ib = invariants(B.space());
  if (ia.positive != ib.positive) return false;
  auto pa = lattice_bad_primes(A), pb = lattice_bad_primes(B);
  if (pa != pb) return false;
  for (const auto& p : pa)
    if (!(local_symbol(A, p) == local_symbol(B, p))) return false;
  return true;
}

Tri same_genus(const LatticeCoset& A, const LatticeCoset& B) {
  if (A.dim() != B.dim()) return Tri::False;
  if (A == B) return Tri::True;
  if (!same_lattice_genus(A.lattice(), B.lattice())) return Tri::False;
  auto ca = conductor_set(A), cb = conductor_set(B);
  if (ca != cb) return Tri::False;
  if (ca.empty()) return Tri::True;
  Lattice sa = A.span_lattice(), sb = B.span_lattice();
  for (const auto& p : ca) {
    if (valuation(sa.det(), p) != valuation(sb.det(), p)) return Tri::False;
    if (!(local_symbol(sa, p) == local_symbol(sb, p))) return Tri::False;
  }
  // Local invariants agree; a global proper isometry settles the question.
  if (A.space().is_definite() && B.space().is_definite()) {
    try {
      if (is_isometric(A, B)) return Tri::True;
    } catch (const std::exception&) {
    }
  }
  return Tri::Unknown;
}

}  // namespace quadrep
