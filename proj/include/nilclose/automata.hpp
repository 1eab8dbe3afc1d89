#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nilclose/freegroup.hpp"

namespace nilclose {

using State = std::uint32_t;

struct Edge {
  State src;
  LetterCode label;
  State dst;
  auto operator<=>(const Edge&) const = default;
};

/// Nondeterministic finite automaton over the doubled alphabet Ã.
/// When reduced() is true, every accepted word is freely reduced, so the
/// language is a set of canonical representatives of elements of F(A).
class WordAutomaton {
 public:
  WordAutomaton(Alphabet alphabet, State num_states, std::vector<Edge> edges,
                std::vector<State> initials, std::vector<State> finals,
                bool reduced = false);

  const Alphabet& alphabet() const { return alphabet_; }
  State num_states() const { return num_states_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<State>& initials() const { return initials_; }
  const std::vector<State>& finals() const { return finals_; }
  bool reduced() const { return reduced_; }

  /// Structural fingerprint (not language-canonical).
  std::string key() const;

 private:
  Alphabet alphabet_;
  State num_states_;
  std::vector<Edge> edges_;
  std::vector<State> initials_;
  std::vector<State> finals_;
  bool reduced_;
};

/// Rational expression over F(A): empty set, reduced-word literal,
/// union, concatenation, star (generated submonoid).
class RationalExpression {
 public:
  enum class Kind { Empty, Literal, Union, Concat, Star };

  static RationalExpression empty(Alphabet alphabet);
  static RationalExpression literal(ReducedWord w);
  static RationalExpression alt(RationalExpression a, RationalExpression b);
  static RationalExpression seq(RationalExpression a, RationalExpression b);
  static RationalExpression star(RationalExpression a);

  Kind kind() const;
  const Alphabet& alphabet() const;
  const ReducedWord& literal_word() const;
  RationalExpression left() const;
  RationalExpression right() const;
  RationalExpression child() const;

  /// Grammar-compatible text: letters, juxtaposition, '|', '*', '(...)',
  /// '1' = empty word, '0' = empty set.
  std::string str() const;

 private:
  struct Node;
  explicit RationalExpression(std::shared_ptr<const Node> node)
      : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Parses the expression grammar above.
RationalExpression parse_expression(const Alphabet& alphabet,
                                    std::string_view text);

/// Kleene construction; output accepts a language L ⊆ Ã* with
/// π(L) = the rational subset denoted by e.
WordAutomaton compile_expression(const RationalExpression& e);

/// Benois construction: saturates with silent transitions (p→q whenever
/// p —x→ r ⇝ s —x⁻¹→ q for some silent path r ⇝ s), eliminates them and
/// intersects with the reduced-word filter.  The result accepts exactly
/// { reduced form of π(w) : w ∈ L(a) } and carries the reduced flag.
WordAutomaton benois_reduce(const WordAutomaton& a);

/// benois_reduce plus instrumentation for effectiveness checks: the depth of
/// the deepest cancellation dip discovered during saturation and enough
/// provenance to rebuild, for an accepted reduced word u, a witness
/// v ∈ L(original) with reduce(v) = u.
struct BenoisResult {
  WordAutomaton automaton;
  std::size_t saturation_depth;

  struct Debug;
  std::shared_ptr<const Debug> debug;
};
BenoisResult benois_reduce_stats(const WordAutomaton& a);
std::optional<Word> benois_witness(const BenoisResult& r, const ReducedWord& u);

// Language algebra.  The *_reduced operations work inside the universe of
// all reduced words and require (and preserve) the reduced flag.
WordAutomaton automaton_union(const WordAutomaton& a, const WordAutomaton& b);
WordAutomaton automaton_concat(const WordAutomaton& a, const WordAutomaton& b);
WordAutomaton automaton_star(const WordAutomaton& a);
WordAutomaton intersect_reduced(const WordAutomaton& a, const WordAutomaton& b);
WordAutomaton complement_reduced(const WordAutomaton& a);
WordAutomaton difference_reduced(const WordAutomaton& a, const WordAutomaton& b);

/// Literal membership: no free reduction is applied to w.
bool accepts(const WordAutomaton& a, const Word& w);

enum class Relation { Equal, StrictSubset, StrictSuperset, Incomparable };
std::string relation_name(Relation r);

/// Language comparison of two reduced-word automata, by determinization
/// and product; canonical minimal DFAs are cached per structure.
Relation compare(const WordAutomaton& a, const WordAutomaton& b);

bool is_empty(const WordAutomaton& a);
/// Equal to the all-reduced-words automaton (requires reduced flag).
bool is_universal(const WordAutomaton& a);

/// Accepts every freely reduced word over the alphabet; reduced flag set.
WordAutomaton universal_reduced(const Alphabet& alphabet);
/// Accepts nothing.
WordAutomaton empty_automaton(const Alphabet& alphabet);
/// Accepts exactly the given reduced word.
WordAutomaton word_automaton(const ReducedWord& w);

/// Language-canonical form: minimal trimmed DFA with breadth-first state
/// numbering.  Two reduced automata have equal languages iff their canonical
/// forms are identical.
WordAutomaton canonical_automaton(const WordAutomaton& a);

/// State elimination (lowest degree first); π(L(result)) = π(L(a)),
/// and L(result) = L(a) exactly as languages over Ã.
RationalExpression extract_expression(const WordAutomaton& a);

/// Debug check for the reduced flag: no accepted word may contain a
/// cancelling pair.
bool reduced_flag_consistent(const WordAutomaton& a);

}  // namespace nilclose
