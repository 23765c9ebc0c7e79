#pragma once

#include "quadrep/genusenum.hpp"
#include "quadrep/localrep.hpp"

namespace quadrep {

/// Subgroup of Q_v^x / (Q_v^x)^2 given by an F_2 basis.
struct SpinorNormSubgroup {
  Place place;
  std::vector<SquareClass> basis;
  bool exact = false;
  std::string method;

  bool contains(const SquareClass& c) const;
  size_t rank() const { return basis.size(); }
  bool is_full() const { return static_cast<int>(rank()) == square_class_rank(place); }
  void add(const SquareClass& c);
};

/// theta(SO(L_v + u0)). `radius` bounds the coordinate box of the reflection search.
SpinorNormSubgroup spinor_norm_group(const LatticeCoset& C, const Place& v, long radius = 0);
/// Lower bound from products of pairs of stabilising reflections.
SpinorNormSubgroup reflection_spinor_norms(const LatticeCoset& C, const Integer& p, long radius);

struct SpinorCount {
  std::optional<long> count;  // number of spinor genera when certified
  long upper_bound = 1;       // count computed from the certified lower bounds on theta
  std::string reason;
};

/// [I_Q : Q^x prod theta(SO(L_v + u0))] by F_2 linear algebra over the bad primes.
SpinorCount count_spinor_genera(const LatticeCoset& C);

enum class RelativeSpinor { Full, IndexTwo, Unknown };

/// One step of a spinor-genus inference, kept for audit.
struct InferenceNode {
  std::string op;
  std::vector<std::string> inputs;
  std::string verdict;
  std::string note;
};

struct SpinorDecision {
  RepDecision decision;
  RelativeSpinor relative = RelativeSpinor::Unknown;
  /// Kernel field Q(sqrt(d)) of the index-two case.
  Rational kernel_field = 0;
  std::vector<InferenceNode> chain;
};

/// Every spinor genus of gen(C) represents alpha (primitively off T when starred).
/// Requires genus_represents(C, alpha, prim) == Yes.
SpinorDecision spn_represents(const LatticeCoset& C, const Rational& alpha, const Primitivity& prim);

/// From alpha -> spn(C) and t^{-2k} alpha -> gen(C), infer t^{-2k} alpha -> spn(C).
SpinorDecision square_scale_inference(const LatticeCoset& C, const Rational& alpha, const Integer& t,
                                      long k, const Integer& v0, const SpinorDecision& alpha_spn,
                                      const Primitivity& prim = Primitivity::none());

/// Concrete data behind the arithmetic isotropy threshold.
struct ArithisoData {
  std::optional<long> h;
  std::string reason;
  Integer v0;
  long h0 = 1;  // t1 = v0^h0
  long h1 = 0;
  Integer t1;
  /// Cosets L_i + u_i of spn(C) reached from C by v0-neighbour steps (index 0 is C).
  std::vector<LatticeCoset> reps;
  std::vector<long> depth, l;
};

/// Throws std::invalid_argument when the hypotheses on v0 fail.
ArithisoData arithiso_threshold(const LatticeCoset& C, const Integer& v0, const std::set<Integer>& T = {});

/// alpha -> cls(C) (primitively off T when starred) for ord_{v0}(alpha) >= h.
RepDecision cls_represents_large(const LatticeCoset& C, const Rational& alpha, const ArithisoData& data,
                                 const Primitivity& prim = Primitivity::none());

/// x in L_p primitive for every p outside prim.off (no-op when not required).
bool primitive_outside(const Lattice& L, const Vec& x, const Primitivity& prim);

}  // namespace quadrep
