#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nilclose/automata.hpp"
#include "nilclose/monoids.hpp"

namespace nilclose {

/// A finite group as an explicit table, with its nilpotency class when known.
struct FiniteGroupTable {
  FiniteMonoid monoid;
  std::optional<std::uint32_t> nilpotency_class;
  std::string name;
};

using GroupPtr = std::shared_ptr<const FiniteGroupTable>;

/// An assignment A → G; extends uniquely to F(A) → G.
struct Homomorphism {
  GroupPtr target;
  std::vector<std::uint32_t> images;  // per alphabet letter
};

/// Finite list of nilpotent groups used as a brute-force verification
/// backend.  Non-exhaustive by design: closure statements are only ever
/// falsified against it, never certified.
struct Catalog {
  std::vector<GroupPtr> groups;
};

/// All cyclic groups of order ≤ max_order, Q8 and D4 from order 8 on, and
/// all direct products of members that stay within the bound.  Duplicates up
/// to isomorphism are allowed (construction signatures are deduplicated,
/// isomorphism is not decided).
Catalog nilpotent_catalog(std::size_t max_order);

/// All |G|^|A| assignments.  Throws LimitError past limits().max_homs.
std::vector<Homomorphism> enum_homs(const Alphabet& alphabet,
                                    const GroupPtr& group);

/// φ(π(w)).
std::uint32_t hom_eval(const Homomorphism& hom, const Word& w);

/// φ(π(L(a))) as an element subset of the target, by a fixpoint over
/// (state, element) pairs; exact even though L is infinite.
ElementSubset image_of_language(const WordAutomaton& a, const Homomorphism& hom);

/// true iff φ(w) ∈ φ(π(L)) for every enumerated homomorphism into every
/// catalog group.  Words in the true nil-closure of π(L) always pass.
bool approx_closure_check(const WordAutomaton& lang, const ReducedWord& w,
                          const Catalog& catalog);

/// Precomputed variant for checking many words against one language.
class ClosureOracle {
 public:
  ClosureOracle(const WordAutomaton& lang, const Catalog& catalog);
  bool admits(const ReducedWord& w) const;

 private:
  std::vector<std::pair<Homomorphism, ElementSubset>> images_;
};

// group builders
FiniteMonoid cyclic_group(std::size_t n);
FiniteMonoid quaternion_q8();
FiniteMonoid dihedral_d4();

/// Lower-central-series length for a group monoid; nullopt when the series
/// stalls above the trivial subgroup (not nilpotent).
std::optional<std::uint32_t> nilpotency_class_of(const FiniteMonoid& g);

/// Smallest normal subgroup with nilpotent quotient, by enumerating the
/// subgroup lattice; intended for |G| ≤ 24.
ElementSubset nilpotent_residual_brute(const FiniteMonoid& g);

}  // namespace nilclose
