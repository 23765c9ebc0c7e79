#pragma once

#include "quadrep/localrep.hpp"

#include <map>
#include <memory>

namespace quadrep {

/// x == target mod p^s L_p; `primitive` asks x in* L_p (anisotropic V_p only).
struct CongruenceCondition {
  Integer p;
  Vec target;
  long s = 1;
  bool primitive = false;
};

/// Data of Statement (CC): lattice L with congruence conditions at T.
struct CCInstance {
  Lattice L;
  std::vector<CongruenceCondition> conditions;
  std::set<Integer> T() const;
};

/// Data of Statement (LT): the coset with primitivity demanded off T.
struct LTInstance {
  LatticeCoset C;
  std::set<Integer> T;
};

/// K_p = p^s L_p on T and L_p elsewhere, u0 == x_p mod p^s L_p by CRT.
LTInstance cc_to_lt(const CCInstance& cc);

/// One CC instance per class of L_p + u0 modulo p^s K_p (K = L + Z u0,
/// p^s K_p in L_p); the union of their solution sets is that of the coset.
std::vector<CCInstance> lt_to_cc(const LTInstance& lt, size_t max_instances = 4096);

/// |x|_p below eps in the coordinates of L: x in p^k L_p for the least k with p^-k < eps.
long precision_from_epsilon(const Integer& p, const Rational& eps);

struct AlmostPrimeVector {
  Vec u;
  Integer v0;
};

/// u in L + u0 with u == targets[p] mod p^k L_p (k from eps) for p in T and
/// q(u) = (unit outside T) * v0. Throws BudgetError after max_candidates.
AlmostPrimeVector almost_prime_norm_vector(const LatticeCoset& C, const std::set<Integer>& T,
                                           const std::map<Integer, Vec>& targets, const Rational& eps,
                                           long max_candidates = 2000000);

struct AssociatedData {
  Vec y;
  /// Columns span K, a sublattice of (Q_p y)^perp and p^s L_p.
  Mat K;
  long t = 0;
  Vec xi;  // auxiliary vector of the construction
  bool isotropic_branch = false;
};

/// Associated vector and lattice of x with respect to L_p and s.
AssociatedData associated_vector(const Vec& x, const Lattice& L, const Integer& p, long s);

/// K as an abstract lattice (Gram K^T G K).
Lattice lattice_of(const QuadSpace& V, const Mat& K);

enum class TargetSet { FullCoset, PrimitiveVectors };

struct CoverBall {
  Vec center;   // b
  long depth;   // the ball is b + p^depth L_p
  Vec beta;     // associated vector of b
  Mat K;        // associated lattice of b
};

class CoverResolver;

struct CoverData {
  Integer p;
  long s = 1;
  TargetSet target = TargetSet::FullCoset;
  /// Common radius: delta = p^-delta_exponent in L-coordinates. When the
  /// cover is incomplete this is the deepest ball resolved so far.
  long delta_exponent = 0;
  /// False when the refinement outgrew the ball budget. Missing balls are
  /// then resolved on demand by ball_of along the same refinement path.
  bool complete = true;
  std::vector<CoverBall> balls;
  /// (depth, L-coordinates of b - u0 mod p^depth) -> ball.
  std::map<std::pair<long, IVec>, size_t> index;

  /// Ball containing x, or nullptr if x lies outside the target set.
  const CoverBall* ball_of(const LatticeCoset& C, const Vec& x) const;

  std::shared_ptr<CoverResolver> resolver;
};

CoverData compact_cover(TargetSet P, const LatticeCoset& C, const Integer& p, long s, size_t max_balls = 400000);

struct LTReport {
  Rational alpha_bound;
  size_t admissible_count = 0;
  std::vector<Rational> failures;
  Rational c_hat = 0;
  std::vector<std::pair<Rational, Vec>> witness_samples;
  bool budget_exhausted = false;
};

/// Sweeps the admissible alpha in (0, alpha_bound] for a definite rank-4 coset.
LTReport verify_lt(const LatticeCoset& C, const std::set<Integer>& T, const Rational& alpha_bound,
                   long nodes_per_alpha = 0);

}  // namespace quadrep
