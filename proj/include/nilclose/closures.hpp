#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nilclose/automata.hpp"
#include "nilclose/oracle.hpp"
#include "nilclose/stallings.hpp"

namespace nilclose {

/// Finite or cofinite set of primes, kept symbolic: no prime is ever
/// enumerated except divisors of elementary divisors.
class PrimeSet {
 public:
  static PrimeSet finite(std::vector<std::uint64_t> primes);
  static PrimeSet cofinite(std::vector<std::uint64_t> excluded);
  static PrimeSet all() { return cofinite({}); }
  static PrimeSet none() { return finite({}); }

  bool is_finite() const { return finite_; }
  /// The members when finite, the non-members when cofinite; sorted.
  const std::vector<std::uint64_t>& listed() const { return listed_; }

  bool empty() const { return finite_ && listed_.empty(); }
  bool contains(std::uint64_t p) const;
  PrimeSet intersect(const PrimeSet& o) const;
  PrimeSet unite(const PrimeSet& o) const;
  PrimeSet complement() const;

  std::string str() const;
  bool operator==(const PrimeSet&) const = default;

 private:
  PrimeSet(bool finite, std::vector<std::uint64_t> listed);
  bool finite_ = true;
  std::vector<std::uint64_t> listed_;
};

/// Dense matrix of arbitrary-precision integers.
class IntegerMatrix {
 public:
  IntegerMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  mpz_class& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const mpz_class& at(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  static IntegerMatrix from_rows(const std::vector<std::vector<long>>& rows);

 private:
  std::size_t rows_, cols_;
  std::vector<mpz_class> data_;
};

/// Nonzero diagonal of the Smith normal form, d₁ | d₂ | ... | d_r.
struct ElementaryDivisors {
  std::vector<mpz_class> divisors;
  std::size_t rank() const { return divisors.size(); }
};

/// Exact Smith normal form over Z.
ElementaryDivisors smith_normal_form(IntegerMatrix m);

/// The set of primes p for which K is p-dense in L (both finitely
/// generated, K ≤ L required).  K is p-dense in L iff it surjects onto the
/// Frattini quotient L/[L,L]Lᵖ, i.e. iff the matrix of K's basis in L's
/// abelianized basis has full column rank mod p; so the answer is empty when
/// the integer rank is deficient and otherwise cofinite, excluding the
/// primes dividing the last elementary divisor.
PrimeSet dense_primes(const Subgroup& k, const Subgroup& l);

/// ℙ(K): the primes p for which K is p-closed.  K is p-closed iff no proper
/// overgroup contains K p-densely, so ℙ(K) is the complement of the union of
/// dense_primes(K, L) over proper overgroups L; always finite or cofinite.
PrimeSet primes_closed(const Subgroup& k);

/// Cl_p(K): the unique maximal overgroup in which K is p-dense.  Maximality
/// is asserted at runtime (the candidates must have a greatest element).
Subgroup p_closure(const Subgroup& k, std::uint64_t p);

/// Reduced-word automaton of Cl_p(H₁)Cl_p(H₂)···Cl_p(Hₙ), which equals
/// Cl_p(H₁···Hₙ) since products of p-closed subgroups are p-closed.
WordAutomaton p_closure_product(const std::vector<Subgroup>& hs, std::uint64_t p);

/// Nil-closure of a subgroup: intersection of the overgroups S with
/// ℙ(S) ≠ ∅.
Subgroup nil_closure_subgroup(const Subgroup& h);

/// Nil-closure of H₁···Hₙ = ∩_p Cl_p(H₁)···Cl_p(Hₙ).  Only finitely many
/// primes yield distinct tuples of p-closures: the ones listed in some
/// dense_primes(Hᵢ, L) over the overgroup lattices; all remaining primes
/// share one generic tuple.  The intersection runs over those
/// representative tuples, with pointwise-dominating tuples dropped.
WordAutomaton nil_closure_product(const std::vector<Subgroup>& hs);

/// Reference route for nil_closure_product: materializes the collection
/// ℂ = { S₁···Sₙ : Sᵢ an overgroup of Hᵢ, ℙ(S₁) ∩ ... ∩ ℙ(Sₙ) ≠ ∅ } by a
/// cartesian walk with early pruning on empty prime-set intersections and
/// intersects the member languages.  Same result, exponentially more tuples;
/// kept as an independent cross-check for small inputs.
WordAutomaton nil_closure_product_by_enumeration(const std::vector<Subgroup>& hs);

/// One term g·H₁···Hₙ of a closure normal form.
struct ClosureTerm {
  ReducedWord translation;
  std::vector<Subgroup> factors;
};

/// Finite union of translated products of finitely generated subgroups: the
/// shape of pro-G closures of rational subsets.  Terms are normalized
/// (trivial factors dropped, adjacent equal factors collapsed) and
/// deduplicated.
class ClosureNormalForm {
 public:
  explicit ClosureNormalForm(Alphabet alphabet)
      : alphabet_(std::move(alphabet)) {}
  ClosureNormalForm(Alphabet alphabet, std::vector<ClosureTerm> terms);

  const Alphabet& alphabet() const { return alphabet_; }
  const std::vector<ClosureTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

 private:
  Alphabet alphabet_;
  std::vector<ClosureTerm> terms_;  // sorted by key, unique
};

/// Profinite closure of a rational subset, by structural recursion:
/// Cl(X ∪ Y) = Cl(X) ∪ Cl(Y), Cl(XY) = Cl(X)Cl(Y), and Cl(X*) = ⟨X⟩, the
/// finitely generated subgroup generated by X (closed, as are products of
/// finitely generated subgroups).
ClosureNormalForm pro_g_closure(const RationalExpression& e);

/// Reduced-word automaton of the union of the terms.
WordAutomaton nf_to_automaton(const ClosureNormalForm& nf);

/// Nil-closure of a rational subset: Cl_nil(L) = Cl_nil(Cl_G(L)); each
/// normal-form term g·H₁···Hₙ contributes g·Cl_nil(H₁···Hₙ) (translations
/// are homeomorphisms).  Returns a reduced-word automaton.
WordAutomaton nil_closure_rational(const RationalExpression& e);
WordAutomaton nil_closure_rational(const WordAutomaton& a);

/// Whether Cl_p(H₁) ∪ ... ∪ Cl_p(Hₙ) = F, which equals Cl_p(H₁ ∪ ... ∪ Hₙ)
/// since finite unions of closed sets are closed.
bool union_p_dense(const std::vector<Subgroup>& hs, std::uint64_t p);

/// A value 2^(−r) with r ≥ 1, or 0.
struct DyadicNorm {
  std::optional<std::uint64_t> exponent;  // nullopt encodes 0
  bool is_zero() const { return !exponent.has_value(); }
  double value() const;
  std::string str() const;
  bool operator==(const DyadicNorm&) const = default;
};

struct PseudonormResult {
  DyadicNorm norm;
  std::optional<std::size_t> witness_group;  // catalog index
  std::optional<Homomorphism> witness;
};

/// Catalog-bounded pro-nil pseudonorm: 2^(−r̂) with r̂ the least image size
/// over catalog homomorphisms separating g from 1, or 0 if none does.  A
/// lower bound on the true pseudonorm |g| (the catalog sees only finitely
/// many quotients).
PseudonormResult pseudonorm(const ReducedWord& g, const Catalog& catalog);

/// d(g₁, g₂) = |g₁ g₂⁻¹|.
PseudonormResult pseudodistance(const ReducedWord& g1, const ReducedWord& g2,
                                const Catalog& catalog);

}  // namespace nilclose
