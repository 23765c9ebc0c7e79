#include "quadrep/spinor.hpp"

#include <deque>

namespace quadrep {

namespace {

size_t f2_rank(std::vector<std::vector<int>> rows) {
  size_t r = 0, m = rows.empty() ? 0 : rows[0].size();
  for (size_t c = 0; c < m && r < rows.size(); ++c) {
    size_t piv = r;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[r]);
    for (size_t i = 0; i < rows.size(); ++i)
      if (i != r && rows[i][c])
        for (size_t j = c; j < m; ++j) rows[i][j] ^= rows[r][j];
    ++r;
  }
  return r;
}

std::vector<std::vector<int>> bit_rows(const std::vector<SquareClass>& cs) {
  std::vector<std::vector<int>> r;
  for (auto& c : cs) r.push_back(c.bits());
  return r;
}

bool rational_square(const Rational& r) {
  if (r <= 0) return false;
  return mpz_perfect_square_p(r.get_num_mpz_t()) && mpz_perfect_square_p(r.get_den_mpz_t());
}

Integer squarefree_part(const Rational& r) {
  Integer v = r.get_num() * r.get_den();
  Integer out = sgn(v) < 0 ? -1 : 1;
  for (auto& [p, e] : factorize(v))
    if (e % 2) out *= p;
  return out;
}

long default_radius(size_t dim) {
  if (dim <= 3) return 6;
  if (dim == 4) return 4;
  return 2;
}

std::string rat(const Rational& x) { return rational_to_string(x); }

}  // namespace

bool SpinorNormSubgroup::contains(const SquareClass& c) const {
  auto rows = bit_rows(basis);
  size_t r0 = f2_rank(rows);
  rows.push_back(c.bits());
  return f2_rank(rows) == r0;
}

void SpinorNormSubgroup::add(const SquareClass& c) {
  if (!contains(c)) basis.push_back(c);
}

SpinorNormSubgroup reflection_spinor_norms(const LatticeCoset& C, const Integer& p, long radius) {
  SpinorNormSubgroup g{Place{p}, {}, false, "reflection pairs"};
  const Lattice& L = C.lattice();
  size_t n = C.dim();
  Vec bu(n);  // 2 b(u0, e_i)
  for (size_t i = 0; i < n; ++i) bu[i] = 2 * C.space().b(C.u0(), L.basis_vector(i));
  std::vector<long> c(n, -radius);
  std::optional<SquareClass> first;
  for (;;) {
    bool primitive = false;
    for (long x : c) primitive = primitive || Integer(x) % p != 0;
    if (primitive) {
      Vec cv(c.begin(), c.end());
      Vec gc = L.gram() * cv;
      Rational Q = dot(cv, gc);
      if (Q != 0) {
        long vq = valuation(Q, p);
        bool ok = valuation(dot(bu, cv), p) >= vq;
        for (size_t i = 0; i < n && ok; ++i) ok = valuation(2 * gc[i], p) >= vq;
        if (ok) {
          SquareClass s = square_class(Q, Place{p});
          if (!first)
            first = s;
          else
            g.add(s * *first);
        }
      }
    }
    size_t k = 0;
    while (k < n && c[k] == radius) c[k++] = -radius;
    if (k == n) break;
    ++c[k];
  }
  return g;
}

SpinorNormSubgroup spinor_norm_group(const LatticeCoset& C, const Place& v, long radius) {
  if (v.is_real()) {
    if (C.space().is_definite()) return {v, {}, true, "definite: positive classes"};
    return {v, {SquareClass{v, 0, -1}}, true, "indefinite: all classes"};
  }
  const Integer& p = v.p;
  if (radius <= 0) radius = default_radius(C.dim());
  if (p != 2) {
    // Odd p, lattice L_p: generated by products of pairs of norms of Jordan
    // diagonal entries, with all units at a scale carrying a rank >= 2 block.
    SpinorNormSubgroup kn{v, {}, true, "odd Jordan closed form"};
    std::vector<SquareClass> norms;
    Rational eps = SquareClass{v, 0, -1}.representative();
    for (const auto& comp : jordan_decomposition(C.lattice(), p).components) {
      Rational ps = rpow(Rational(p), comp.scale);
      for (size_t i = 0; i < comp.rank; ++i) norms.push_back(square_class(ps * comp.unit_gram[i][i], v));
      if (comp.rank >= 2) {
        norms.push_back(square_class(ps, v));
        norms.push_back(square_class(ps * eps, v));
      }
    }
    for (size_t i = 1; i < norms.size(); ++i) kn.add(norms[i] * norms[0]);
    if (conductor_exponent(C, p) == 0) return kn;
    // Stabilisers of L_p + u0 lie in O(L_p): the search is exact once it meets that bound.
    SpinorNormSubgroup g = reflection_spinor_norms(C, p, radius);
    g.exact = g.rank() == kn.rank() || g.is_full();
    if (g.exact) g.method += " (meets the lattice bound)";
    return g;
  }
  SpinorNormSubgroup g = reflection_spinor_norms(C, p, radius);
  g.exact = g.is_full();
  return g;
}

SpinorCount count_spinor_genera(const LatticeCoset& C) {
  if (C.dim() < 3) throw std::invalid_argument("count_spinor_genera: rank >= 3 required");
  std::set<Integer> S = bad_primes(C);
  S.insert(2);
  std::vector<Place> places{Place::real()};
  for (auto& p : S) places.push_back(Place{p});
  std::vector<size_t> offset;
  size_t width = 0;
  for (auto& v : places) {
    offset.push_back(width);
    width += square_class_rank(v);
  }
  std::vector<std::vector<int>> rows;
  bool exact = true;
  std::string inexact;
  for (size_t i = 0; i < places.size(); ++i) {
    SpinorNormSubgroup g = spinor_norm_group(C, places[i]);
    if (!g.exact) {
      exact = false;
      inexact += (inexact.empty() ? "" : ",") + places[i].to_string();
    }
    for (auto& b : g.basis) {
      std::vector<int> row(width, 0);
      auto bits = b.bits();
      for (size_t k = 0; k < bits.size(); ++k) row[offset[i] + k] = bits[k];
      rows.push_back(row);
    }
  }
  std::vector<Rational> rel{Rational(-1)};
  for (auto& p : S) rel.push_back(Rational(p));
  for (auto& r : rel) {
    std::vector<int> row(width, 0);
    for (size_t i = 0; i < places.size(); ++i) {
      auto bits = square_class(r, places[i]).bits();
      for (size_t k = 0; k < bits.size(); ++k) row[offset[i] + k] = bits[k];
    }
    rows.push_back(row);
  }
  size_t corank = width - f2_rank(rows);
  SpinorCount out;
  out.upper_bound = 1L << corank;
  if (exact) {
    out.count = out.upper_bound;
    out.reason = "all local spinor norm groups exact";
  } else if (out.upper_bound == 1) {
    out.count = 1;
    out.reason = "index is 1 already for the certified subgroups";
  } else {
    out.reason = "spinor norm groups only bounded below at " + inexact;
  }
  return out;
}

bool primitive_outside(const Lattice& L, const Vec& x, const Primitivity& prim) {
  if (!prim.required) return true;
  if (is_zero(x)) return false;
  Vec c = L.coords(x);
  Integer g = 0, den = 1;
  for (auto& v : c) {
    g = gcd(g, v.get_num());
    den = lcm(den, v.get_den());
  }
  for (auto& p : prime_divisors(g * den))
    if (!prim.off.count(p)) return false;
  return true;
}

SpinorDecision spn_represents(const LatticeCoset& C, const Rational& alpha, const Primitivity& prim) {
  RepDecision g = genus_represents(C, alpha, prim);
  if (g.verdict != Verdict::Yes)
    throw std::invalid_argument("spn_represents: alpha is not represented by the genus");
  SpinorDecision out;
  out.chain.push_back({"genus_represents", {rat(alpha)}, "yes", g.reason});
  Rational d = C.lattice().det();
  auto full = [&](const std::string& cond) {
    out.decision = RepDecision::yes(std::nullopt, kInfinity, cond);
    out.relative = RelativeSpinor::Full;
    out.chain.push_back({"spn_represents", {rat(alpha)}, "yes", cond});
    return out;
  };
  if (C.dim() >= 4) return full("condition i: rank >= 4");
  if (C.dim() < 3) throw std::invalid_argument("spn_represents: rank >= 3 required");
  if (rational_square(-alpha * d)) return full("condition i: -alpha det(L) is a square");
  if (alpha.get_num() != 0)
    for (auto& p : prime_divisors(alpha.get_num())) {
      if (p == 2 || valuation(alpha, p) <= 0) continue;
      if (!valid_walk_prime(C, p)) continue;
      if (prim.required && !prim.off.count(p)) continue;
      if (is_local_square(-alpha * d, Place{p})) continue;
      return full("condition ii at v0 = " + p.get_str());
    }
  out.relative = RelativeSpinor::IndexTwo;
  out.kernel_field = squarefree_part(-alpha * d);
  out.decision = RepDecision::unknown("relative spinor norm not computed; kernel field Q(sqrt(" +
                                      rat(out.kernel_field) + "))");
  out.chain.push_back({"spn_represents", {rat(alpha)}, "unknown", out.decision.reason});
  return out;
}

SpinorDecision square_scale_inference(const LatticeCoset& C, const Rational& alpha, const Integer& t,
                                      long k, const Integer& v0, const SpinorDecision& alpha_spn,
                                      const Primitivity& prim) {
  SpinorDecision out;
  out.chain = alpha_spn.chain;
  auto unknown = [&](const std::string& why) {
    out.decision = RepDecision::unknown(why);
    out.chain.push_back({"square_scale_inference", {rat(alpha), t.get_str(), std::to_string(k)}, "unknown", why});
    return out;
  };
  if (alpha_spn.decision.verdict != Verdict::Yes) return unknown("alpha -> spn(C) not established");
  if (k < 0 || t == 0) return unknown("k must be >= 0 and t nonzero");
  if (k == 0) {
    out.decision = alpha_spn.decision;
    out.relative = alpha_spn.relative;
    out.chain.push_back({"square_scale_inference", {rat(alpha), t.get_str(), "0"}, "yes", "t^0 = 1"});
    return out;
  }
  Rational beta = alpha / rpow(Rational(t), 2 * k);
  RepDecision g = genus_represents(C, beta, prim);
  if (g.verdict != Verdict::Yes) return unknown("t^{-2k} alpha not represented by the genus");
  out.chain.push_back({"genus_represents", {rat(beta)}, "yes", g.reason});
  SpinorDecision direct = spn_represents(C, beta, prim);
  if (direct.decision.verdict == Verdict::Yes) {
    out.decision = direct.decision;
    out.relative = RelativeSpinor::Full;
    out.chain.push_back({"spn_represents", {rat(beta)}, "yes", direct.decision.reason});
    return out;
  }
  if (C.dim() != 3) return unknown("rank must be 3");
  if (!is_prime(v0) || v0 == 2) return unknown("v0 must be an odd prime");
  if (!valid_walk_prime(C, v0)) return unknown("L_{v0} not unimodular or u0 not in L_{v0}");
  if (prim.required && !prim.off.count(v0)) return unknown("v0 not in T");
  Integer rest = abs(t);
  mpz_remove(rest.get_mpz_t(), rest.get_mpz_t(), v0.get_mpz_t());
  if (rest != 1) return unknown("t is not a unit away from v0");
  Vec c = C.lattice().coords(C.u0());
  for (auto& x : c)
    if (Rational((t - 1) * x).get_den() != 1) return unknown("(t-1) u0 not in L_v away from v0");
  if (!is_local_square(-alpha * C.lattice().det(), Place{v0})) return unknown("v0 not split");
  out.decision = RepDecision::yes(std::nullopt, kInfinity, "square scaling at v0 = " + v0.get_str());
  out.relative = RelativeSpinor::Full;
  out.chain.push_back({"square_scale_inference", {rat(alpha), t.get_str(), std::to_string(k)}, "yes",
                       out.decision.reason});
  return out;
}

namespace {

long unit_index(const Integer& p, long a) {
  Integer r = p == 2 ? ipow(2, a - 1) : ipow(p, a - 1) * (p - 1);
  if (!r.fits_slong_p()) throw std::overflow_error("unit_index: too large");
  return r.get_si();
}

}  // namespace

ArithisoData arithiso_threshold(const LatticeCoset& C, const Integer& v0, const std::set<Integer>& T) {
  if (C.dim() < 3) throw std::invalid_argument("arithiso_threshold: dim >= 3 required");
  if (!valid_walk_prime(C, v0))
    throw std::invalid_argument("arithiso_threshold: v0 must be odd with L_{v0} unimodular and u0 in L_{v0}");
  auto T1 = conductor_set(C);
  if (!T.empty()) {
    if (!T.count(v0)) throw std::invalid_argument("arithiso_threshold: T must contain v0");
    for (auto& p : T1)
      if (!T.count(p)) throw std::invalid_argument("arithiso_threshold: T must contain the conductor set");
  }
  ArithisoData d;
  d.v0 = v0;
  for (auto& p : T1) d.h0 *= unit_index(p, stability_exponent(C, p));
  d.t1 = ipow(v0, d.h0);
  d.reps = {C};
  d.depth = {0};
  d.l = {0};
  if (!C.space().is_definite()) {
    d.reason = "indefinite: class representatives unavailable";
    return d;
  }
  ClassSet cs = enumerate_genus_classes(C);
  std::vector<size_t> cell = cs.spinor_partition[cs.cell_of(0)];
  ClassRegistry reg;
  for (auto& r : cs.representatives) reg.insert(r);
  std::set<size_t> missing(cell.begin(), cell.end());
  missing.erase(0);
  std::vector<LatticeCoset> seen{C};
  std::deque<std::pair<size_t, long>> queue{{0, 0}};
  size_t limit = 64 * class_budget();
  while (!missing.empty() && !queue.empty()) {
    auto [si, j] = queue.front();
    queue.pop_front();
    for (auto& N : coset_neighbors(seen[si], v0)) {
      if (std::find(seen.begin(), seen.end(), N) != seen.end()) continue;
      seen.push_back(N);
      if (seen.size() > limit) throw BudgetError("arithiso_threshold: v0-walk budget exceeded");
      queue.emplace_back(seen.size() - 1, j + 1);
      auto idx = reg.find(N);
      if (idx && missing.count(*idx)) {
        missing.erase(*idx);
        d.reps.push_back(N);
        d.depth.push_back(j + 1);
      }
    }
  }
  if (!missing.empty()) {
    d.reason = "v0-neighbour walk did not reach every class of the spinor genus";
    return d;
  }
  const Lattice& L = C.lattice();
  for (size_t i = 1; i < d.reps.size(); ++i) {
    const LatticeCoset& R = d.reps[i];
    long l = 1;
    for (;; ++l) {
      if (l > 256) throw std::runtime_error("arithiso_threshold: containment exponent not found");
      Rational s = rpow(Rational(d.t1), l);
      if (L.contains(R.lattice().scaled(s)) && L.contains(s * (R.u0() - C.u0()))) break;
    }
    d.l.push_back(l);
    d.h1 = std::max(d.h1, l);
  }
  d.h = 2 * d.h1 * d.h0 + 1;
  return d;
}

RepDecision cls_represents_large(const LatticeCoset& C, const Rational& alpha, const ArithisoData& data,
                                 const Primitivity& prim) {
  if (!data.h) return RepDecision::unknown("threshold unknown: " + data.reason);
  if (alpha == 0) throw std::invalid_argument("cls_represents_large: alpha must be nonzero");
  if (valuation(alpha, data.v0) < *data.h) return RepDecision::unknown("ord_{v0}(alpha) below the threshold");
  RepDecision g = genus_represents(C, alpha, prim);
  if (g.verdict != Verdict::Yes) return g;
  bool spn = spn_represents(C, alpha, prim).decision.verdict == Verdict::Yes;
  auto accept_in = [&](const Lattice& L) {
    return [&L, &prim](const Vec& x) { return primitive_outside(L, x, prim); };
  };
  if (!spn)
    for (auto& R : data.reps)
      if (Enumerator(R).find(alpha, accept_in(R.lattice()))) {
        spn = true;
        break;
      }
  if (!spn) return RepDecision::unknown("alpha -> spn(C) not established");
  Rational scale = rpow(Rational(data.t1), data.h1);
  Rational beta = alpha / (scale * scale);
  for (size_t i = 0; i < data.reps.size(); ++i) {
    const LatticeCoset& R = data.reps[i];
    if (auto x = Enumerator(R).find(beta, accept_in(R.lattice()))) {
      Vec w = scale * *x;
      if (C.contains(w) && C.q(w) == alpha && primitive_outside(C.lattice(), w, prim))
        return RepDecision::yes(w, kInfinity, "descent through representative " + std::to_string(i));
    }
  }
  if (auto x = Enumerator(C).find(alpha, accept_in(C.lattice())))
    return RepDecision::yes(*x, kInfinity, "direct enumeration");
  return RepDecision::unknown("descent found no witness");
}

}  // namespace quadrep
