#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "nilclose/automata.hpp"
#include "nilclose/freegroup.hpp"

namespace nilclose {

/// Folded, cored, based inverse automaton: the subgroup graph.  Vertex 0 is
/// the base; the transition map is deterministic and involutive
/// (trans(p,x) = q iff trans(q,x⁻¹) = p); every non-base vertex has degree
/// at least 2; vertices are numbered breadth-first from the base in letter
/// order, which makes the representation canonical.
struct SubgroupGraph {
  std::uint32_t num_vertices = 1;
  std::uint32_t num_codes = 0;
  std::vector<std::int32_t> trans;  // v * num_codes + c -> target, -1 undefined

  std::int32_t step(std::uint32_t v, LetterCode c) const {
    return trans[static_cast<std::size_t>(v) * num_codes + c];
  }
};

/// A finitely generated subgroup of F(A), represented by its subgroup graph.
/// Immutable; equality is graph identity, which coincides with subgroup
/// equality thanks to the canonical numbering.
class Subgroup {
 public:
  Subgroup(Alphabet alphabet, std::shared_ptr<const SubgroupGraph> graph);

  const Alphabet& alphabet() const { return alphabet_; }
  const SubgroupGraph& graph() const { return *graph_; }
  std::shared_ptr<const SubgroupGraph> graph_ptr() const { return graph_; }
  std::uint32_t num_vertices() const { return graph_->num_vertices; }
  bool is_trivial() const;

  /// Canonical serialization; equal keys iff equal subgroups.
  const std::string& key() const { return key_; }

  bool operator==(const Subgroup& o) const {
    return alphabet_ == o.alphabet_ && key_ == o.key_;
  }
  bool operator<(const Subgroup& o) const { return key_ < o.key_; }

 private:
  Alphabet alphabet_;
  std::shared_ptr<const SubgroupGraph> graph_;
  std::string key_;
};

/// Stallings folding: bouquet of generator loops, folded to determinism,
/// then cored.  The folding order does not affect the result; a seed may be
/// supplied to randomize it (used to exercise confluence).
Subgroup fold(const Alphabet& alphabet, const std::vector<ReducedWord>& generators,
              std::optional<std::uint64_t> shuffle_seed = std::nullopt);

/// The whole group F(A): one vertex with a loop for every letter.
Subgroup full_group(const Alphabet& alphabet);
Subgroup trivial_subgroup(const Alphabet& alphabet);

/// Rebuilds a subgroup from an explicit edge list (vertex, letter, vertex),
/// folding, coring and canonicalizing as needed; vertex `base` becomes the
/// base point.
Subgroup subgroup_from_edges(
    const Alphabet& alphabet, std::uint32_t num_vertices,
    const std::vector<std::tuple<std::uint32_t, LetterCode, std::uint32_t>>& edges,
    std::uint32_t base = 0);

/// w ∈ H iff w labels a base-to-base path.
bool member(const Subgroup& h, const ReducedWord& w);

struct SubgroupReport {
  std::vector<ReducedWord> basis;
  std::size_t rank = 0;
  std::optional<std::size_t> index;  // nullopt = infinite
  WordAutomaton language;            // benois-reduced graph language
};

/// Basis from a spanning tree, rank, index (finite iff the transition map is
/// total) and the reduced-word language of the subgroup.
SubgroupReport subgroup_report(const Subgroup& h);

/// Spanning-tree basis only (cached).
const std::vector<ReducedWord>& basis(const Subgroup& h);
std::size_t rank(const Subgroup& h);
std::optional<std::size_t> subgroup_index(const Subgroup& h);
/// Benois-reduced automaton of the subgroup language (cached).
WordAutomaton subgroup_language(const Subgroup& h);

/// H ∩ K via the product graph (Howson).
Subgroup intersect(const Subgroup& h, const Subgroup& k);

/// g⁻¹ H g.
Subgroup conjugate(const Subgroup& h, const ReducedWord& g);

/// Subgroup generated by all the given subgroups and words together.
Subgroup join(const std::vector<Subgroup>& parts,
              const std::vector<ReducedWord>& words = {});

/// K ⊆ H, by running K's basis through H's graph.
bool contains(const Subgroup& h, const Subgroup& k);

/// All subgroups whose graph is an onto quotient of H's graph, H included.
/// Breadth-first pairwise merging with memoized canonical forms; ordered by
/// discovery.  Throws LimitError past limits().max_overgroups.
std::vector<Subgroup> overgroups(const Subgroup& h);

/// Signed traversal counts of w (which must lie in H) over the non-tree
/// edges of H's graph: the coordinates of w in the abelianization of H with
/// respect to the spanning-tree basis, aligned with basis(H).
std::vector<std::int64_t> abelianized_coordinates(const Subgroup& h,
                                                  const ReducedWord& w);

/// Splits H as u·C·u⁻¹ where C's graph has no stem at the base (base degree
/// ≥ 2, or C trivial) and u spells the stem.  Closure computations are
/// conjugation-equivariant, so they may be done on C and conjugated back.
std::pair<ReducedWord, Subgroup> detach_stem(const Subgroup& h);

}  // namespace nilclose
