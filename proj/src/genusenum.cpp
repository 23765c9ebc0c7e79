#include "quadrep/genusenum.hpp"

#include <cstdlib>
#include <deque>
#include <numeric>

namespace quadrep {

namespace {

LatticeCoset negated(const LatticeCoset& C) {
  QuadSpace V(Rational(-1) * C.space().gram());
  return LatticeCoset(Lattice(V, C.lattice().basis()), C.u0());
}

Integer inverse_mod(const Integer& a, const Integer& m) {
  Integer r;
  Integer am = a % m;
  if (am < 0) am += m;
  if (mpz_invert(r.get_mpz_t(), am.get_mpz_t(), m.get_mpz_t()) == 0)
    throw std::domain_error("inverse_mod: not invertible");
  return r;
}

IMat integral_gram(const Lattice& L, Integer& D) {
  D = common_denominator(L.gram());
  size_t n = L.dim();
  IMat g(n, IVec(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) g[i][j] = Rational(L.gram()[i][j] * D).get_num();
  return g;
}

struct UnionFind {
  std::vector<size_t> parent;
  explicit UnionFind(size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  size_t find(size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(size_t a, size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

std::optional<IsometryMatrix> is_isometric(const LatticeCoset& A0, const LatticeCoset& B0) {
  if (A0.dim() != B0.dim()) return std::nullopt;
  bool pa = A0.space().is_positive_definite(), pb = B0.space().is_positive_definite();
  if (!A0.space().is_definite() || !B0.space().is_definite())
    throw std::invalid_argument("is_isometric: indefinite input");
  if (pa != pb) return std::nullopt;
  LatticeCoset A = pa ? A0 : negated(A0), B = pb ? B0 : negated(B0);
  if (A.lattice().det() != B.lattice().det()) return std::nullopt;
  if (A.is_lattice() != B.is_lattice()) return std::nullopt;
  size_t n = A.dim();

  Mat abasis = Enumerator(LatticeCoset(A.lattice())).reduced_basis();
  std::vector<Vec> a(n);
  Mat ga = zeros(n, n);
  Rational top = 0;
  for (size_t i = 0; i < n; ++i) a[i] = column(abasis, i);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) ga[i][j] = A.space().b(a[i], a[j]);
    top = std::max(top, ga[i][i]);
  }
  std::map<Rational, std::vector<std::pair<Vec, Vec>>> bucket;  // norm -> (c, G_B c)
  Enumerator(LatticeCoset(B.lattice())).visit(top, [&](const Vec& x, const Rational& v) {
    bucket[v].emplace_back(x, B.space().gram() * x);
    return true;
  });
  for (size_t i = 0; i < n; ++i)
    if (!bucket.count(ga[i][i])) return std::nullopt;

  Mat ainv = inverse(from_columns(a, n));
  std::vector<const std::pair<Vec, Vec>*> chosen(n, nullptr);
  std::optional<IsometryMatrix> result;
  std::function<bool(size_t)> rec = [&](size_t i) -> bool {
    if (i == n) {
      std::vector<Vec> cols;
      for (auto* c : chosen) cols.push_back(c->first);
      Mat sigma = from_columns(cols, n) * ainv;
      if (det(sigma) < 0) return false;
      if (!B.lattice().contains(sigma * A.u0() - B.u0())) return false;
      result = IsometryMatrix{sigma, true};
      return true;
    }
    for (const auto& cand : bucket.at(ga[i][i])) {
      bool ok = true;
      for (size_t j = 0; j < i && ok; ++j) ok = dot(cand.first, chosen[j]->second) == ga[i][j];
      if (!ok) continue;
      chosen[i] = &cand;
      if (rec(i + 1)) return true;
    }
    return false;
  };
  rec(0);
  if (result && !pa) result->proper = det(result->sigma) > 0;
  return result;
}

bool valid_walk_prime(const LatticeCoset& C, const Integer& p) {
  if (p == 2 || !is_prime(p)) return false;
  const Lattice& L = C.lattice();
  if (common_denominator(L.gram()) % p == 0) return false;
  if (valuation(L.det(), p) != 0) return false;
  for (const auto& c : L.coords(C.u0()))
    if (c.get_den() % p == 0) return false;
  return true;
}

Integer default_walk_prime(const LatticeCoset& C) {
  Integer p = 3;
  while (!valid_walk_prime(C, p)) p = next_prime(p);
  return p;
}

size_t class_budget() {
  if (const char* env = std::getenv("QUADREP_BUDGET")) {
    long v = std::atol(env);
    if (v > 0) return static_cast<size_t>(v);
  }
  return 512;
}

std::vector<Lattice> kneser_neighbors(const Lattice& L, const Integer& p) {
  if (!valid_walk_prime(LatticeCoset(L), p))
    throw std::invalid_argument("kneser_neighbors: p must be odd with L_p unimodular");
  size_t n = L.dim();
  Integer D;
  IMat g = integral_gram(L, D);
  unsigned long pp = p.get_ui();
  std::vector<Lattice> out;
  IVec v(n);
  auto handle = [&]() {
    IVec w = v;
    Integer val = 0;
    IVec gw(n, 0);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) gw[i] += g[i][j] * w[j];
    for (size_t i = 0; i < n; ++i) val += w[i] * gw[i];
    if (val % p != 0) return;
    if (val % (p * p) != 0) {
      size_t i = 0;
      while (gw[i] % p == 0) ++i;
      Integer lam = (-(val / p) * inverse_mod(2 * gw[i], p)) % p;
      w[i] += lam * p;
      for (size_t r = 0; r < n; ++r) gw[r] += g[r][i] * lam * p;
    }
    IMat rows{gw};
    for (auto& x : rows[0]) x %= p;
    Mat K = congruence_kernel(rows, p, n);
    std::vector<Vec> gens;
    for (size_t j = 0; j < n; ++j) gens.push_back(column(K, j));
    Vec wp(n);
    for (size_t i = 0; i < n; ++i) wp[i] = Rational(w[i], p);
    for (auto& x : wp) x.canonicalize();
    gens.push_back(wp);
    Mat coords = hermite_basis(gens, n);
    out.emplace_back(L.space(), L.basis() * coords);
  };
  for (size_t lead = 0; lead < n; ++lead) {
    std::fill(v.begin(), v.end(), 0);
    v[lead] = 1;
    size_t free = n - lead - 1;
    unsigned long total = 1;
    for (size_t k = 0; k < free; ++k) total *= pp;
    for (unsigned long idx = 0; idx < total; ++idx) {
      unsigned long t = idx;
      for (size_t k = 0; k < free; ++k) {
        v[lead + 1 + k] = static_cast<unsigned long>(t % pp);
        t /= pp;
      }
      handle();
    }
  }
  return out;
}

std::vector<LatticeCoset> coset_neighbors(const LatticeCoset& C, const Integer& p) {
  if (!valid_walk_prime(C, p))
    throw std::invalid_argument("coset_neighbors: invalid walk prime");
  Vec c = C.lattice().coords(C.u0());
  Integer d = common_denominator(c);
  Vec u = C.u0();
  if (d != 1) u = Rational(p * inverse_mod(p, d)) * u;
  std::vector<LatticeCoset> out;
  for (auto& M : kneser_neighbors(C.lattice(), p))
    out.emplace_back(M, d == 1 ? Vec(C.dim(), 0) : u);
  return out;
}

ClassRegistry::Key ClassRegistry::key_of(const LatticeCoset& C) const {
  Key k;
  k.det = C.lattice().det();
  auto hist = [&](const LatticeCoset& X, std::vector<std::pair<Rational, long>>& h) {
    std::map<Rational, long> m;
    Enumerator(X).visit(*bound_, [&](const Vec&, const Rational& v) {
      ++m[v];
      return true;
    });
    h.assign(m.begin(), m.end());
  };
  hist(LatticeCoset(C.lattice()), k.lattice_norms);
  if (!C.is_lattice()) hist(C, k.coset_norms);
  return k;
}

std::optional<size_t> ClassRegistry::find(const LatticeCoset& C) const {
  if (!bound_) return std::nullopt;
  Key k = key_of(C);
  auto [lo, hi] = index_.equal_range(k);
  for (auto it = lo; it != hi; ++it)
    if (is_isometric(reps_[it->second], C)) return it->second;
  return std::nullopt;
}

std::pair<size_t, bool> ClassRegistry::insert(const LatticeCoset& C) {
  if (!bound_) {
    Mat b = Enumerator(LatticeCoset(C.lattice())).reduced_basis();
    std::vector<Rational> norms;
    for (size_t j = 0; j < C.dim(); ++j) norms.push_back(C.q(column(b, j)));
    std::sort(norms.begin(), norms.end());
    bound_ = norms.size() >= 2 ? norms[norms.size() - 2] : norms.back();
  }
  Key k = key_of(C);
  auto [lo, hi] = index_.equal_range(k);
  for (auto it = lo; it != hi; ++it)
    if (is_isometric(reps_[it->second], C)) return {it->second, false};
  reps_.push_back(C);
  index_.emplace(std::move(k), reps_.size() - 1);
  return {reps_.size() - 1, true};
}

size_t ClassSet::cell_of(size_t i) const {
  for (size_t c = 0; c < spinor_partition.size(); ++c)
    for (size_t j : spinor_partition[c])
      if (j == i) return c;
  throw std::out_of_range("ClassSet::cell_of");
}

ClassSet enumerate_genus_classes(const LatticeCoset& C, std::optional<Integer> p_walk,
                                 size_t prime_count) {
  if (!C.space().is_definite())
    throw std::invalid_argument("enumerate_genus_classes: definite coset required");
  ClassSet out;
  Integer p = p_walk ? *p_walk : default_walk_prime(C);
  if (!valid_walk_prime(C, p)) throw std::invalid_argument("enumerate_genus_classes: invalid walk prime");
  out.walk_primes.push_back(p);
  while (out.walk_primes.size() < std::max<size_t>(prime_count, 1)) {
    p = next_prime(p);
    if (valid_walk_prime(C, p)) out.walk_primes.push_back(p);
  }
  size_t budget = class_budget();
  ClassRegistry reg;
  reg.insert(C);
  std::vector<std::vector<std::pair<size_t, size_t>>> edges(out.walk_primes.size());
  std::deque<size_t> queue{0};
  while (!queue.empty()) {
    size_t i = queue.front();
    queue.pop_front();
    for (size_t k = 0; k < out.walk_primes.size(); ++k) {
      LatticeCoset rep = reg.representatives()[i];
      for (const auto& M : coset_neighbors(rep, out.walk_primes[k])) {
        auto [j, fresh] = reg.insert(M);
        if (fresh) {
          if (reg.size() > budget) throw BudgetError("enumerate_genus_classes: class budget exceeded");
          queue.push_back(j);
        }
        edges[k].emplace_back(i, j);
      }
    }
  }
  out.representatives = reg.representatives();
  size_t m = out.representatives.size();
  std::vector<UnionFind> comps;
  for (auto& e : edges) {
    comps.emplace_back(m);
    for (auto [a, b] : e) comps.back().unite(a, b);
  }
  std::map<std::vector<size_t>, std::vector<size_t>> cells;
  for (size_t i = 0; i < m; ++i) {
    std::vector<size_t> key;
    for (auto& uf : comps) key.push_back(uf.find(i));
    cells[key].push_back(i);
  }
  for (auto& [key, cell] : cells) out.spinor_partition.push_back(cell);
  std::sort(out.spinor_partition.begin(), out.spinor_partition.end());
  out.genus = genus_symbol(C);
  return out;
}

}  // namespace quadrep
