#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nilclose/automata.hpp"
#include "nilclose/freegroup.hpp"

namespace nilclose {

using ElementSubset = std::vector<bool>;

/// Finite monoid given by its multiplication table (row = left factor) with
/// a distinguished generating map from an alphabet.  Associativity, the
/// identity law and generation are checked at construction.
class FiniteMonoid {
 public:
  FiniteMonoid(std::vector<std::uint32_t> table, std::uint32_t identity,
               Alphabet alphabet, std::vector<std::uint32_t> gen_images,
               std::vector<std::string> names = {});

  /// Every element becomes a generator over a synthesized alphabet
  /// ('a', 'b', ...; at most 26 elements).
  static FiniteMonoid with_all_generators(std::vector<std::uint32_t> table,
                                          std::uint32_t identity,
                                          std::vector<std::string> names = {});

  std::size_t size() const { return size_; }
  std::uint32_t identity() const { return identity_; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    return table_[static_cast<std::size_t>(a) * size_ + b];
  }
  const std::vector<std::uint32_t>& table() const { return table_; }
  const Alphabet& alphabet() const { return alphabet_; }
  const std::vector<std::uint32_t>& gen_images() const { return gen_images_; }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name_of(std::uint32_t m) const { return names_[m]; }

 private:
  std::size_t size_;
  std::vector<std::uint32_t> table_;
  std::uint32_t identity_;
  Alphabet alphabet_;
  std::vector<std::uint32_t> gen_images_;
  std::vector<std::string> names_;
};

struct StructureReport {
  std::vector<std::uint32_t> j_class_of;
  std::vector<std::vector<std::uint32_t>> j_classes;
  bool is_j_trivial = false;
  ElementSubset regular;
  /// Defined exactly on elements with a unique generalized inverse.
  std::vector<std::optional<std::uint32_t>> inverse_of;
  bool is_block_group = false;
  bool is_group = false;
  bool is_nilpotent_group = false;
};

/// J-classes from principal two-sided ideals, regular elements, generalized
/// inverses, and the block-group / group / nilpotent-group flags.
StructureReport analyze_structure(const FiniteMonoid& m);

/// Deterministic automaton accepting L_m = { u ∈ A* : [u]_M = m }: states
/// are elements, the identity is initial, right multiplication by
/// generators drives the transitions.  Positive letters only, hence the
/// reduced flag holds.
WordAutomaton cayley_language(const FiniteMonoid& m, std::uint32_t element);

/// Whether the tuple lifts to the identity under every relational morphism
/// to a finite nilpotent group; decided as 1 ∈ Cl_nil(L_{m1}···L_{mk}) via
/// the rational-closure pipeline.
bool liftable(const FiniteMonoid& m, const std::vector<std::uint32_t>& tuple);

/// K_Gnil(M) = { m : (m) is liftable }; a submonoid containing every
/// idempotent.
ElementSubset gnil_kernel(const FiniteMonoid& m);

/// For regular α, β with unique generalized inverses: whether {α, β} is a
/// nilpotent-pointlike pair, i.e. (α, β') is a liftable 2-tuple.
bool pointlike_pair(const FiniteMonoid& m, std::uint32_t alpha,
                    std::uint32_t beta);

struct JStarGnilResult {
  bool member = false;
  std::string reason;  // human-readable certificate
  std::optional<std::pair<std::uint32_t, std::uint32_t>> failing_pair;
};

/// Membership in J ∗ G_nil.  Monoids outside BG are rejected outright;
/// block groups are checked pairwise: every nilpotent-pointlike pair of
/// regular elements must satisfy αα'ββ' = αβ'.
JStarGnilResult in_J_star_Gnil(const FiniteMonoid& m);

/// Membership in J ⓜ G_nil: J-triviality of the G_nil-kernel.
bool in_J_malcev_Gnil(const FiniteMonoid& m);

/// Componentwise product; generators are generator pairs padded with
/// identities.  Throws LimitError past limits().max_monoid elements.
FiniteMonoid direct_product(const FiniteMonoid& a, const FiniteMonoid& b);

/// Restriction of the table to a subset closed under multiplication and
/// containing the identity, with all retained elements as generators.
FiniteMonoid submonoid(const FiniteMonoid& m, const ElementSubset& keep);

/// Two-sided inverse in a group monoid.
std::uint32_t group_inverse(const FiniteMonoid& g, std::uint32_t x);

}  // namespace nilclose
