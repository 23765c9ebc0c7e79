#pragma once

#include "quadrep/enumeration.hpp"

#include <map>
#include <memory>
#include <tuple>

namespace quadrep {

/// Proper isometry sigma with sigma(A.lattice) = B.lattice and
/// sigma(A.u0) = B.u0 mod B.lattice; both cosets positive definite.
std::optional<IsometryMatrix> is_isometric(const LatticeCoset& A, const LatticeCoset& B);

/// All p-neighbours of L (p odd, L_p unimodular).
std::vector<Lattice> kneser_neighbors(const Lattice& L, const Integer& p);
/// Neighbours of a coset: each neighbour lattice M with the translation
/// moved into M_p and kept modulo L at the other primes.
std::vector<LatticeCoset> coset_neighbors(const LatticeCoset& C, const Integer& p);

/// True when p is odd, L_p is unimodular and u0 lies in L_p.
bool valid_walk_prime(const LatticeCoset& C, const Integer& p);
Integer default_walk_prime(const LatticeCoset& C);

/// Class budget: QUADREP_BUDGET if set, else 512.
size_t class_budget();

/// Incremental set of pairwise non-isometric cosets.
class ClassRegistry {
 public:
  /// Index of the class of C, adding it when new.
  std::pair<size_t, bool> insert(const LatticeCoset& C);
  std::optional<size_t> find(const LatticeCoset& C) const;
  const std::vector<LatticeCoset>& representatives() const { return reps_; }
  size_t size() const { return reps_.size(); }

 private:
  struct Key {
    Rational det;
    std::vector<std::pair<Rational, long>> lattice_norms, coset_norms;
    bool operator<(const Key& o) const {
      return std::tie(det, lattice_norms, coset_norms) < std::tie(o.det, o.lattice_norms, o.coset_norms);
    }
  };
  Key key_of(const LatticeCoset& C) const;

  std::optional<Rational> bound_;
  std::vector<LatticeCoset> reps_;
  std::multimap<Key, size_t> index_;
};

struct ClassSet {
  std::vector<LatticeCoset> representatives;  // representatives[0] is the seed
  /// Cells are unions of spinor genera; equal to them once enough primes are walked.
  std::vector<std::vector<size_t>> spinor_partition;
  GenusSymbol genus;
  std::vector<Integer> walk_primes;

  size_t cell_of(size_t i) const;
};

/// Closure of {C} under neighbour steps at several primes, starting with p_walk.
/// Throws BudgetError when the class budget is exceeded.
ClassSet enumerate_genus_classes(const LatticeCoset& C, std::optional<Integer> p_walk = std::nullopt,
                                 size_t prime_count = 4);

}  // namespace quadrep
