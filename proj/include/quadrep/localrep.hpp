#pragma once

#include "quadrep/lattice.hpp"

#include <map>
#include <mutex>

namespace quadrep {

enum class Verdict { Yes, No, Unknown };

std::string verdict_name(Verdict v);

/// Local obstruction: no x in L_p + u0 (primitive if flagged) with
/// q(x) == alpha mod p^exponent; at the real place a sign obstruction.
struct LocalCertificate {
  Place place;
  long exponent = 0;
  bool primitive = false;
  std::string reason;
};

struct RepDecision {
  Verdict verdict = Verdict::Unknown;
  /// Yes: a vector x in L_p + u0 (or L + u0 for global witnesses).
  std::optional<Vec> witness;
  /// v_p(q(witness) - alpha); kInfinity when exact.
  long witness_precision = kInfinity;
  std::optional<LocalCertificate> certificate;
  std::string reason;

  static RepDecision yes(std::optional<Vec> w, long prec, std::string why = {});
  static RepDecision no(LocalCertificate c);
  static RepDecision unknown(std::string why);
};

/// Least e >= 0 with p^e u0 in L_p.
long conductor_exponent(const LatticeCoset& C, const Integer& p);

/// Exponent a with (1 + p^a Z_p) q(L_p + u0) contained in q(L_p + u0).
long stability_exponent(const LatticeCoset& C, const Integer& p);

RepDecision local_represents(const LatticeCoset& C, const Integer& p, const Rational& alpha,
                             bool primitive);

/// Primitivity demanded of a genus-level representation: none (alpha -> gen)
/// or primitive at every prime outside `off` (alpha ->*_T gen).
struct Primitivity {
  bool required = false;
  std::set<Integer> off;

  static Primitivity none() { return {}; }
  static Primitivity outside(std::set<Integer> T) { return {true, std::move(T)}; }
  bool at(const Integer& p) const { return required && !off.count(p); }
};

/// Primes checked by genus_represents beyond those dividing alpha.
std::set<Integer> genus_check_primes(const LatticeCoset& C, const Primitivity& prim);

RepDecision genus_represents(const LatticeCoset& C, const Rational& alpha, const Primitivity& prim);

/// Memoised local decisions for one coset: verdicts depend only on the
/// valuation of alpha and its unit part mod p^a for a stability exponent a.
class LocalOracle {
 public:
  explicit LocalOracle(LatticeCoset C, Primitivity prim = Primitivity::none());
  bool local(const Integer& p, const Rational& alpha, bool primitive);
  /// Same decision as genus_represents(C, alpha, T) == Yes.
  bool genus(const Rational& alpha);
  const LatticeCoset& coset() const { return C_; }

 private:
  LatticeCoset C_;
  Primitivity prim_;
  std::set<Integer> base_primes_;
  std::map<Integer, long> stab_;
  std::map<std::tuple<Integer, long, Integer, bool>, bool> cache_;
  std::mutex mu_;
};

}  // namespace quadrep
