#pragma once

#include "quadrep/localrep.hpp"

#include <map>

namespace quadrep {

/// Constraint ord_p(alpha - value) >= precision.
struct PadicTarget {
  Rational value;
  long precision = 1;

  /// Least precision k with p^-k < eps.
  static PadicTarget from_epsilon(const Rational& value, const Integer& p, const Rational& eps);
};

using TargetMap = std::map<Integer, PadicTarget>;

struct DirichletAlpha {
  Rational alpha;
  Integer v0;
};

/// alpha meeting every target, of the given sign, a unit outside T and v0,
/// with ord_{v0}(alpha) = 1. Throws BudgetError after max_attempts candidates.
DirichletAlpha dirichlet_alpha(const TargetMap& targets, int sign, long max_attempts = 1000000);

/// alpha meeting every target, integral outside T, with sign * alpha > threshold.
Rational shifted_alpha(const TargetMap& targets, int sign, const Rational& threshold);

struct RootCondition {
  Verdict verdict = Verdict::Unknown;
  std::string reason;
  long sampled_primes = 0;
  long primes_without_root = 0;
};

/// Whether f has a root in Q_p for all but finitely many p.
RootCondition almost_all_p_root(const Polynomial& f, long sample_bound = 1000);

enum class Domain { Integers, Rationals };

/// q(x) = p(t) with q given by an integral Gram matrix of rank n >= 3.
struct WatsonInstance {
  QuadSpace form;
  Polynomial poly;
  Domain domain = Domain::Integers;
};

struct SearchBudget {
  long t_range = 60;          // |t| bound of the witness sweep
  long nodes_per_t = 400000;  // enumeration nodes per value
  long box_cells = 300000;    // box search cells per value (indefinite forms)
  long max_depth = 40;        // p-adic depth of the local t-tree
  long prime_bound = 0;       // extra primes checked locally
  unsigned jobs = 1;
};

struct Witness {
  Vec x;
  Rational t;
};

enum class SolverStatus { Solvable, LocallyObstructed, Unsolvable, Unknown };

std::string status_name(SolverStatus s);

struct SolverVerdict {
  SolverStatus status = SolverStatus::Unknown;
  std::optional<Witness> witness;
  /// Solvable by the local-global theorem but no witness found in budget.
  bool witness_pending = false;
  bool budget_exhausted = false;
  std::optional<LocalCertificate> certificate;
  std::string reason;
};

SolverVerdict decide_watson(const WatsonInstance& W, const SearchBudget& budget = {});

/// All integral (x, t) with |x_i| <= xbox and |t| <= tbox solving q(x) = p(t).
std::vector<Witness> brute_force_search(const WatsonInstance& W, long xbox, long tbox);

bool check_witness(const WatsonInstance& W, const Witness& w);

/// Re-verifies a finite-place certificate: no (x, t) mod p^k with q(x) == p(t).
/// nullopt when the modulus is too large to exhaust.
std::optional<bool> recheck_certificate(const WatsonInstance& W, const LocalCertificate& c);

}  // namespace quadrep
