// Acceptance criteria, one PASS/FAIL line each. Run by ctest with the CLI
// binary and the shipped corpus.

#include "oracles.hpp"

#include "quadrep/cli.hpp"
#include "quadrep/defrep.hpp"
#include "quadrep/enumeration.hpp"
#include "quadrep/spinor.hpp"

#include "CLI11.hpp"

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

using namespace quadrep;
using oracle::IntMat;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

Lattice diag_lattice(std::vector<long> d) {
  Vec v(d.begin(), d.end());
  return Lattice::standard(QuadSpace(diagonal(v)));
}

IntMat diag_int(std::vector<long> d) {
  IntMat g(d.size(), std::vector<long>(d.size(), 0));
  for (size_t i = 0; i < d.size(); ++i) g[i][i] = d[i];
  return g;
}

long poly_at(const std::vector<long>& c, long t) {
  long v = 0;
  for (size_t i = c.size(); i-- > 0;) v = v * t + c[i];
  return v;
}

// 1. Three squares by genus plus class number one.
Outcome three_squares() {
  LatticeCoset Z3(diag_lattice({1, 1, 1}));
  ClassSet cs = enumerate_genus_classes(Z3);
  if (cs.representatives.size() != 1) return {false, "genus of Z^3 has more than one class"};
  auto brute = oracle::values_up_to(diag_int({1, 1, 1}), 10000, 100);
  long mismatches = 0, legendre = 0;
  for (long n = 1; n <= 10000; ++n) {
    bool rep = genus_represents(Z3, n, Primitivity::none()).verdict == Verdict::Yes;
    mismatches += rep != bool(brute[n]);
    legendre += rep != oracle::is_sum_of_three_squares(n);
  }
  std::ostringstream s;
  s << "n <= 10^4: " << mismatches << " mismatches vs box search, " << legendre << " vs 4^a(8b+7)";
  return {mismatches == 0 && legendre == 0, s.str()};
}

// 2. Random definite quaternary instances.
Outcome quaternary_watson() {
  std::mt19937 rng(2024);
  int solved = 0, obstructed = 0, bad = 0, other = 0;
  std::string first_bad;
  for (int i = 0; i < 50; ++i) {
    IntMat g(4, std::vector<long>(4, 0));
    Mat G;
    for (;;) {
      for (int a = 0; a < 4; ++a) {
        g[a][a] = long(rng() % 9) + 1;
        for (int b = a + 1; b < 4; ++b) g[a][b] = g[b][a] = rng() % 3 == 0 ? long(rng() % 5) - 2 : 0;
      }
      G = oracle::to_mat(g);
      if (det(G) != 0 && QuadSpace(G).is_positive_definite()) break;
    }
    size_t deg = rng() % 4;
    std::vector<long> poly(deg + 1);
    for (auto& c : poly) c = long(rng() % 19) - 9;
    if (poly.back() == 0) poly.back() = long(rng() % 9) + 1;
    WatsonInstance W{QuadSpace(G), Polynomial(Vec(poly.begin(), poly.end())), Domain::Integers};
    SolverVerdict v = decide_watson(W);
    std::string why;
    if (v.status == SolverStatus::Solvable) {
      ++solved;
      if (!v.witness || !check_witness(W, *v.witness)) {
        why = "solvable without a verified witness (" + v.reason + "; poly";
        for (long c : poly) why += " " + std::to_string(c);
        why += "; gram";
        for (auto& r : g)
          for (long c : r) why += " " + std::to_string(c);
        why += ")";
      }
    } else if (v.status == SolverStatus::LocallyObstructed || v.status == SolverStatus::Unsolvable) {
      ++obstructed;
      long K = v.certificate && !v.certificate->place.is_real() ? v.certificate->exponent : 0;
      long p = K ? v.certificate->place.p.get_si() : 0;
      if (K && std::pow(double(p), 4.0 * K) > 4e8) why = "certificate modulus too large to exhaust";
      else if (K && !oracle::no_solution_mod(g, poly, p, K)) why = "certificate refuted by exhaustion";
      if (why.empty()) {
        long top = 0;
        for (long t = -50; t <= 50; ++t) top = std::max(top, poly_at(poly, t));
        auto vals = oracle::values_up_to(g, top, 60);
        for (long t = -50; t <= 50 && why.empty(); ++t) {
          long f = poly_at(poly, t);
          if (f >= 0 && vals[f]) why = "brute force solution at t = " + std::to_string(t);
        }
      }
    } else {
      ++other;
      why = "verdict " + status_name(v.status) + ": " + v.reason;
    }
    if (!why.empty() && bad++ == 0) first_bad = "instance " + std::to_string(i) + ": " + why;
  }
  std::ostringstream s;
  s << solved << " solvable, " << obstructed << " obstructed, " << other << " other, " << bad << " failures";
  if (bad) s << " (" << first_bad << ")";
  return {bad == 0, s.str()};
}

// 3. The 8t+7 obstruction.
Outcome eight_t_plus_seven() {
  WatsonInstance W{QuadSpace(identity(3)), Polynomial(Vec{7, 8}), Domain::Integers};
  SolverVerdict v = decide_watson(W);
  if (v.status != SolverStatus::LocallyObstructed || !v.certificate) return {false, "not locally obstructed"};
  const LocalCertificate& c = *v.certificate;
  if (c.place.is_real() || c.place.p != 2) return {false, "certificate at the wrong place"};
  long K = c.exponent;
  bool ok = K == 3 && oracle::no_solution_mod(diag_int({1, 1, 1}), {7, 8}, 2, K);
  return {ok, "place 2, modulus 2^" + std::to_string(K) + (ok ? ", re-verified by exhaustion" : ", not re-verified")};
}

// 4. Spinor counts against the neighbour-graph partition.
Outcome spinor_counts() {
  std::vector<LatticeCoset> pool;
  for (auto d : std::vector<std::vector<long>>{{1, 1, 1},  {1, 1, 2},  {1, 1, 3},  {1, 1, 5},  {1, 1, 7},
                                               {1, 2, 3},  {1, 2, 5},  {1, 3, 9},  {1, 1, 9},  {1, 4, 9},
                                               {1, 5, 25}, {1, 7, 49}, {2, 3, 5},  {1, 2, 14}, {1, 1, 25},
                                               {3, 5, 7},  {1, 6, 11}, {2, 2, 11}, {1, 10, 13}, {1, 3, 27},
                                               {1, 1, 27}, {1, 9, 27}, {1, 1, 11}, {1, 2, 2},  {1, 3, 3},
                                               {1, 1, 49}, {1, 5, 5}, {3, 3, 7}, {2, 5, 7},  {1, 11, 11}})
    pool.emplace_back(diag_lattice(d));
  for (long c : {1L, 3L, 5L, 7L})
    pool.emplace_back(Lattice::standard(QuadSpace(Mat{{2, 1, 0}, {1, 2, 0}, {0, 0, c}})));
  pool.emplace_back(diag_lattice({1, 1, 1}), Vec{Rational(1, 2), Rational(1, 2), 0});
  pool.emplace_back(diag_lattice({1, 1, 3}), Vec{0, 0, Rational(1, 3)});
  pool.emplace_back(diag_lattice({1, 2, 5}), Vec{Rational(1, 2), 0, 0});
  int compared = 0, mismatches = 0, split = 0;
  std::string first;
  for (auto& C : pool) {
    if (abs(C.lattice().det()) > 500) continue;
    SpinorCount sc = count_spinor_genera(C);
    if (!sc.count || sc.reason != "all local spinor norm groups exact") continue;
    ClassSet cs = enumerate_genus_classes(C);
    ++compared;
    split += *sc.count > 1;
    if (size_t(*sc.count) != cs.spinor_partition.size() && mismatches++ == 0)
      first = "det " + rational_to_string(C.lattice().det()) + ": count " + std::to_string(*sc.count) + " vs " +
              std::to_string(cs.spinor_partition.size()) + " cells";
  }
  std::ostringstream s;
  s << compared << " cosets with exact theta, " << split << " with several spinor genera, " << mismatches
    << " mismatches";
  if (mismatches) s << " (" << first << ")";
  return {compared >= 20 && mismatches == 0, s.str()};
}

// 5. Every spinor cell represents alpha when spn_represents says so.
Outcome spn_corpus(const std::vector<CorpusEntry>& corpus) {
  int checked = 0, failures = 0;
  std::string first;
  for (auto& e : corpus) {
    if (e.kind != "spn") continue;
    LatticeCoset C = coset_from_json(e.input);
    Rational alpha = parse_rational(e.args.at("alpha").get<std::string>());
    if (genus_represents(C, alpha, Primitivity::none()).verdict != Verdict::Yes) continue;
    SpinorDecision d = spn_represents(C, alpha, Primitivity::none());
    if (d.decision.verdict != Verdict::Yes || d.decision.reason.rfind("condition", 0) != 0) continue;
    ++checked;
    ClassSet cs = enumerate_genus_classes(C);
    for (auto& cell : cs.spinor_partition) {
      bool found = false;
      for (size_t i : cell) {
        auto x = Enumerator(cs.representatives[i]).find(alpha);
        found = found || (x && cs.representatives[i].q(*x) == alpha);
      }
      if (!found && failures++ == 0) first = e.id;
    }
  }
  std::ostringstream s;
  s << checked << " corpus instances via condition i or ii, " << failures << " cells without a witness";
  if (failures) s << " (first: " << first << ")";
  return {checked > 0 && failures == 0, s.str()};
}

// 6. Arithmetic isotropy sweep.
Outcome arithiso_sweep(const std::vector<CorpusEntry>& corpus) {
  int instances = 0, failures = 0;
  long swept = 0, skipped = 0;
  std::string first;
  for (auto& e : corpus) {
    if (e.kind != "threshold") continue;
    LatticeCoset C = coset_from_json(e.input);
    if (C.dim() != 3 || !C.space().is_positive_definite()) continue;
    Integer v0(e.args.at("v0").get<std::string>());
    ArithisoData a = arithiso_threshold(C, v0);
    if (!a.h) continue;
    ++instances;
    Integer step = ipow(v0, static_cast<unsigned long>(*a.h));
    LocalOracle local(C);
    Enumerator en(C);
    // alpha runs over the values of C with denominator dividing N.
    Integer N = common_denominator(Vec{C.q(C.u0())});
    for (auto& row : C.lattice().gram())
      for (auto& g : row) N = lcm(N, g.get_den());
    for (size_t i = 0; i < C.dim(); ++i) N = lcm(N, Rational(2 * C.space().b(C.u0(), C.lattice().basis_vector(i))).get_den());
    for (Integer k = 1; k * step <= 100000 * N; ++k) {
      Rational alpha(k * step, N);
      alpha.canonicalize();
      if (valuation(alpha, v0) < *a.h || !local.genus(alpha)) continue;
      if (spn_represents(C, alpha, Primitivity::none()).decision.verdict != Verdict::Yes) {
        ++skipped;
        continue;
      }
      ++swept;
      auto x = en.find(alpha);
      if ((!x || C.q(*x) != alpha) && failures++ == 0) first = e.id + " alpha " + rational_to_string(alpha);
    }
  }
  std::ostringstream s;
  s << instances << " ternary cosets, " << swept << " alpha with alpha -> spn, " << skipped
    << " skipped (spinor status not certified), " << failures << " failures";
  if (failures) s << " (first: " << first << ")";
  return {instances >= 5 && failures == 0, s.str()};
}

// Independent check that alpha has no representation by x in L + u0 primitive
// outside T. Diagonal Gram, standard basis, u0 with denominator m.
bool no_rep_off_T(const std::vector<long>& d, const Vec& u0, const std::set<Integer>& T, const Rational& alpha) {
  long m = common_denominator(u0).get_si();
  std::vector<long> r;
  for (auto& u : u0) r.push_back(Rational(u * m).get_num().get_si());
  Rational target = alpha * m * m;
  if (target.get_den() != 1) return true;
  long want = target.get_num().get_si();
  size_t n = d.size();
  std::vector<long> w(n), hi(n);
  std::function<bool(size_t, long)> rec = [&](size_t i, long left) -> bool {
    if (i == n) {
      if (left != 0) return false;
      long g = 0;
      for (long v : w) g = std::gcd(g, v);
      for (auto& p : prime_divisors(Integer(g)))
        if (!T.count(p)) return false;
      return true;
    }
    long bound = static_cast<long>(std::sqrt(double(left) / d[i])) + 1;
    for (long v = -bound + ((r[i] + bound) % m + m) % m; v <= bound; v += m) {
      long rest = left - d[i] * v * v;
      if (rest < 0) continue;
      w[i] = v;
      if (rec(i + 1, rest)) return true;
    }
    return false;
  };
  return !rec(0, want);
}

// 7. verify_lt on definite quaternary cosets.
Outcome defrep_harness() {
  struct Case {
    std::vector<long> d;
    Vec u0;
  };
  const Rational h(1, 2);
  std::vector<Case> cases{{{1, 1, 1, 1}, {}},       {{1, 1, 1, 2}, {}},       {{1, 1, 2, 3}, {}},
                          {{1, 1, 5, 7}, {}},       {{1, 2, 3, 5}, {}},       {{1, 1, 1, 7}, {}},
                          {{1, 1, 3, 3}, {}},       {{1, 2, 2, 5}, {}},       {{1, 1, 1, 11}, {}},
                          {{1, 3, 5, 7}, {}},       {{1, 1, 1, 1}, {h, h, h, h}}, {{1, 1, 2, 2}, {h, h, 0, 0}}};
  int instances = 0, bad = 0;
  long failing = 0;
  std::ostringstream s;
  std::string first;
  for (auto& c : cases) {
    Vec u0 = c.u0.empty() ? Vec(4, 0) : c.u0;
    LatticeCoset C(diag_lattice(c.d), u0);
    if (abs(C.lattice().det()) > 200) continue;
    std::set<Integer> T{2};
    for (auto& p : bad_primes(C)) T.insert(p);
    LTReport r = verify_lt(C, T, 10000);
    ++instances;
    failing += r.failures.size();
    std::string why;
    if (r.budget_exhausted) why = "budget exhausted";
    for (auto& f : r.failures) {
      if (f > r.c_hat) why = "failure above c_hat";
      if (!no_rep_off_T(c.d, u0, T, f)) why = "failure " + rational_to_string(f) + " has a representation";
    }
    for (auto& [alpha, x] : r.witness_samples)
      if (!C.contains(x) || C.q(x) != alpha || !primitive_outside(C.lattice(), x, Primitivity::outside(T)))
        why = "bad witness for " + rational_to_string(alpha);
    if (!why.empty() && bad++ == 0) first = why;
    s << (instances > 1 ? "; " : "") << "c_hat " << rational_to_string(r.c_hat);
  }
  std::ostringstream out;
  out << instances << " cosets, " << failing << " failing alpha in total, " << bad << " bad reports (" << s.str()
      << ")";
  if (bad) out << " first: " << first;
  return {instances >= 10 && bad == 0, out.str()};
}

// 8. Constructive lemmas against their validators.
Outcome constructive_lemmas() {
  std::mt19937 rng(808);
  int assoc = 0, assoc_bad = 0;
  while (assoc < 500) {
    long p = std::vector<long>{3, 5, 7, 11}[rng() % 4];
    long s = long(rng() % 3) + 1;
    size_t n = rng() % 3 == 0 ? 4 : 3;
    Mat g = zeros(n, n);
    for (size_t i = 0; i < n; ++i) g[i][i] = long(rng() % 7) + 1;
    if (rng() % 2) g[0][1] = g[1][0] = 1;
    if (det(g) == 0) continue;
    Lattice L = Lattice::standard(QuadSpace(g));
    Vec x(n);
    for (auto& c : x) c = long(rng() % 41) - 20;
    if (is_zero(x)) continue;
    ++assoc;
    try {
      if (!oracle::check_associated(x, L, p, s, associated_vector(x, L, p, s)).empty()) ++assoc_bad;
    } catch (const std::exception&) {
      ++assoc_bad;
    }
  }
  int sets = 0, dir = 0, dir_bad = 0, shift_bad = 0;
  const long ps[] = {2, 3, 5, 7, 11};
  while (sets < 200) {
    TargetMap tm;
    for (long p : ps)
      if (rng() % 3 == 0) {
        Rational v(long(rng() % 200) - 100, std::vector<long>{1, p, p * p}[rng() % 3]);
        v.canonicalize();
        tm[p] = {v, long(rng() % 3) + 1 + std::max(0L, valuation(v, p))};
      }
    int sign = rng() % 2 ? 1 : -1;
    ++sets;
    ++dir;
    if (!oracle::check_dirichlet(tm, sign, dirichlet_alpha(tm, sign)).empty()) ++dir_bad;
    Rational thr(long(rng() % 100000) + 1);
    if (!oracle::check_shifted(tm, sign, thr, shifted_alpha(tm, sign, thr)).empty()) ++shift_bad;
  }
  int ap = 0, ap_bad = 0;
  while (ap < 100) {
    size_t n = rng() % 2 ? 4 : 3;
    Vec d(n);
    for (size_t i = 0; i < n; ++i) d[i] = i == 0 ? 1 : long(rng() % 5) + 1;
    LatticeCoset C(Lattice::standard(QuadSpace(diagonal(d))));
    std::set<Integer> T{2};
    for (auto& p : bad_primes(C)) T.insert(p);
    std::map<Integer, Vec> tg;
    for (auto& p : T) {
      Vec t(n);
      for (auto& c : t) c = long(rng() % 7);
      t[n - 1] = 1;
      tg[p] = t;
    }
    Rational eps(1, long(rng() % 20) + 2);
    ++ap;
    try {
      if (!oracle::check_almost_prime(C, T, tg, eps, almost_prime_norm_vector(C, T, tg, eps)).empty()) ++ap_bad;
    } catch (const std::exception&) {
      ++ap_bad;
    }
  }
  std::ostringstream s;
  s << "associated " << assoc - assoc_bad << "/" << assoc << ", dirichlet " << dir - dir_bad << "/" << dir
    << ", shifted " << sets - shift_bad << "/" << sets << ", almost prime " << ap - ap_bad << "/" << ap;
  return {assoc_bad == 0 && dir_bad == 0 && shift_bad == 0 && ap_bad == 0, s.str()};
}

// 9. Hilbert symbols and reciprocity.
Outcome hilbert() {
  std::mt19937 rng(909);
  const long ps[] = {2, 3, 5, 7, 11, 13};
  int disagree = 0, reciprocity = 0;
  for (int i = 0; i < 1000; ++i) {
    Integer a = rng() % 2 ? 1 : -1, b = rng() % 2 ? 1 : -1;
    for (int k = 0; k < 3; ++k) {
      if (rng() % 2) a *= ps[rng() % 6];
      if (rng() % 2) b *= ps[rng() % 6];
    }
    long p = ps[rng() % 6];
    if (hilbert_symbol(a, b, Place::finite(p)) != oracle::hilbert_by_congruence(a, b, p)) ++disagree;
    int prod = hilbert_symbol(a, b, Place::real());
    for (auto& q : prime_divisors(Integer(2 * a * b))) prod *= hilbert_symbol(a, b, Place::finite(q));
    if (prod != 1) ++reciprocity;
  }
  std::ostringstream s;
  s << "1000 triples: " << disagree << " disagreements with the congruence oracle, " << reciprocity
    << " product formula failures";
  return {disagree == 0 && reciprocity == 0, s.str()};
}

std::pair<std::string, int> run(const std::string& cmd) {
  std::string out;
  FILE* f = popen(cmd.c_str(), "r");
  if (!f) return {"", -1};
  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), f)) > 0) out.append(buf.data(), n);
  int status = pclose(f);
  return {out, WIFEXITED(status) ? WEXITSTATUS(status) : -1};
}

// 10. Determinism of the corpus report.
Outcome determinism(const std::string& cli, const std::string& dir) {
  if (cli.empty()) return {false, "no --cli given"};
  std::string cmd = "'" + cli + "' --seed 0 verify-corpus '" + dir + "'";
  auto a = run(cmd);
  auto b = run(cmd);
  auto c = run("'" + cli + "' --seed 0 --jobs 2 verify-corpus '" + dir + "'");
  bool same = !a.first.empty() && a == b && a == c;
  std::ostringstream s;
  s << a.first.size() << "-byte reports, exit " << a.second << ", " << (same ? "identical" : "different")
    << " across runs and job counts";
  return {same && a.second == 0, s.str()};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::string cli, corpus_dir;
  app.add_option("--cli", cli, "quadrep binary");
  app.add_option("--corpus", corpus_dir, "corpus directory")->required();
  CLI11_PARSE(app, argc, argv);

  std::vector<CorpusEntry> corpus = load_corpus(corpus_dir);
  struct Criterion {
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  std::vector<Criterion> criteria{
      {"three squares", 60, three_squares},
      {"quaternary local-global", 600, quaternary_watson},
      {"8t+7 obstruction", 1, eight_t_plus_seven},
      {"spinor count cross-check", 300, spinor_counts},
      {"spinor cells represent", 0, [&] { return spn_corpus(corpus); }},
      {"arithmetic isotropy sweep", 600, [&] { return arithiso_sweep(corpus); }},
      {"definite representation harness", 900, defrep_harness},
      {"constructive lemmas", 300, constructive_lemmas},
      {"Hilbert symbols", 30, hilbert},
      {"corpus determinism", 0, [&] { return determinism(cli, corpus_dir); }},
  };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    auto& c = criteria[i];
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = c.limit_s == 0 || secs < c.limit_s;
    bool pass = o.pass && in_time;
    failed += !pass;
    std::cout << std::setw(2) << i + 1 << ". " << (pass ? "PASS" : "FAIL") << "  " << std::left << std::setw(34)
              << c.name << std::right << std::fixed << std::setprecision(1) << std::setw(7) << secs << " s  "
              << o.detail << (in_time ? "" : " [over time limit]") << std::endl;
  }
  std::cout << criteria.size() - failed << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
