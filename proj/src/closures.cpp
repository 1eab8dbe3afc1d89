#include "nilclose/closures.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

#include "nilclose/primes.hpp"

namespace nilclose {

// ---------------------------------------------------------------------------
// prime sets

PrimeSet::PrimeSet(bool finite, std::vector<std::uint64_t> listed)
    : finite_(finite), listed_(std::move(listed)) {
  std::sort(listed_.begin(), listed_.end());
  listed_.erase(std::unique(listed_.begin(), listed_.end()), listed_.end());
  for (std::uint64_t p : listed_) {
    if (!is_prime_u64(p)) {
      throw ValidationError("prime set entry is not prime: " + std::to_string(p));
    }
  }
}

PrimeSet PrimeSet::finite(std::vector<std::uint64_t> primes) {
  return PrimeSet(true, std::move(primes));
}

PrimeSet PrimeSet::cofinite(std::vector<std::uint64_t> excluded) {
  return PrimeSet(false, std::move(excluded));
}

bool PrimeSet::contains(std::uint64_t p) const {
  bool in_list = std::binary_search(listed_.begin(), listed_.end(), p);
  return finite_ ? in_list : !in_list;
}

namespace {

std::vector<std::uint64_t> set_and(const std::vector<std::uint64_t>& a,
                                   const std::vector<std::uint64_t>& b) {
  std::vector<std::uint64_t> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

std::vector<std::uint64_t> set_or(const std::vector<std::uint64_t>& a,
                                  const std::vector<std::uint64_t>& b) {
  std::vector<std::uint64_t> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                 std::back_inserter(out));
  return out;
}

std::vector<std::uint64_t> set_minus(const std::vector<std::uint64_t>& a,
                                     const std::vector<std::uint64_t>& b) {
  std::vector<std::uint64_t> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(out));
  return out;
}

}  // namespace

PrimeSet PrimeSet::intersect(const PrimeSet& o) const {
  if (finite_ && o.finite_) return PrimeSet(true, set_and(listed_, o.listed_));
  if (finite_) return PrimeSet(true, set_minus(listed_, o.listed_));
  if (o.finite_) return PrimeSet(true, set_minus(o.listed_, listed_));
  return PrimeSet(false, set_or(listed_, o.listed_));
}

PrimeSet PrimeSet::unite(const PrimeSet& o) const {
  if (finite_ && o.finite_) return PrimeSet(true, set_or(listed_, o.listed_));
  if (finite_) return PrimeSet(false, set_minus(o.listed_, listed_));
  if (o.finite_) return PrimeSet(false, set_minus(listed_, o.listed_));
  return PrimeSet(false, set_and(listed_, o.listed_));
}

PrimeSet PrimeSet::complement() const { return PrimeSet(!finite_, listed_); }

std::string PrimeSet::str() const {
  std::ostringstream os;
  if (!finite_ && listed_.empty()) return "all primes";
  if (!finite_) os << "all primes except ";
  os << '{';
  for (std::size_t i = 0; i < listed_.size(); ++i) {
    if (i) os << ", ";
    os << listed_[i];
  }
  os << '}';
  return os.str();
}

// ---------------------------------------------------------------------------
// Smith normal form

IntegerMatrix IntegerMatrix::from_rows(
    const std::vector<std::vector<long>>& rows) {
  std::size_t r = rows.size();
  std::size_t c = r == 0 ? 0 : rows.front().size();
  IntegerMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw ValidationError("ragged matrix rows");
    for (std::size_t j = 0; j < c; ++j) m.at(i, j) = rows[i][j];
  }
  return m;
}

ElementaryDivisors smith_normal_form(IntegerMatrix m) {
  std::size_t rows = m.rows(), cols = m.cols();
  std::vector<mpz_class> divisors;
  std::size_t t = 0;
  while (t < rows && t < cols) {
    // pivot: entry of least absolute value in the remaining submatrix
    std::size_t pi = t, pj = t;
    bool found = false;
    for (std::size_t i = t; i < rows; ++i) {
      for (std::size_t j = t; j < cols; ++j) {
        if (m.at(i, j) == 0) continue;
        if (!found || cmp(abs(m.at(i, j)), abs(m.at(pi, pj))) < 0) {
          pi = i;
          pj = j;
          found = true;
        }
      }
    }
    if (!found) break;
    for (std::size_t j = 0; j < cols; ++j) swap(m.at(t, j), m.at(pi, j));
    for (std::size_t i = 0; i < rows; ++i) swap(m.at(i, t), m.at(i, pj));

    bool dirty = false;
    for (std::size_t i = t + 1; i < rows; ++i) {
      if (m.at(i, t) == 0) continue;
      mpz_class q;
      mpz_tdiv_q(q.get_mpz_t(), m.at(i, t).get_mpz_t(), m.at(t, t).get_mpz_t());
      for (std::size_t j = t; j < cols; ++j) m.at(i, j) -= q * m.at(t, j);
      if (m.at(i, t) != 0) dirty = true;
    }
    for (std::size_t j = t + 1; j < cols; ++j) {
      if (m.at(t, j) == 0) continue;
      mpz_class q;
      mpz_tdiv_q(q.get_mpz_t(), m.at(t, j).get_mpz_t(), m.at(t, t).get_mpz_t());
      for (std::size_t i = t; i < rows; ++i) m.at(i, j) -= q * m.at(i, t);
      if (m.at(t, j) != 0) dirty = true;
    }
    if (dirty) continue;  // smaller remainders exist: re-pick the pivot

    // the pivot must divide every remaining entry for the divisor chain
    bool fixed = false;
    for (std::size_t i = t + 1; i < rows && !fixed; ++i) {
      for (std::size_t j = t + 1; j < cols && !fixed; ++j) {
        if (m.at(i, j) % m.at(t, t) != 0) {
          for (std::size_t jj = t; jj < cols; ++jj) m.at(t, jj) += m.at(i, jj);
          fixed = true;
        }
      }
    }
    if (fixed) continue;

    divisors.push_back(abs(m.at(t, t)));
    ++t;
  }
  return ElementaryDivisors{std::move(divisors)};
}

// ---------------------------------------------------------------------------
// density and closure of subgroups

namespace {

std::mutex closure_mutex;

std::map<std::string, PrimeSet>& primes_closed_cache() {
  static std::map<std::string, PrimeSet> cache;
  return cache;
}

std::map<std::pair<std::string, std::string>, PrimeSet>& dense_cache() {
  static std::map<std::pair<std::string, std::string>, PrimeSet> cache;
  return cache;
}

std::map<std::string, WordAutomaton>& product_closure_cache() {
  static std::map<std::string, WordAutomaton> cache;
  return cache;
}

}  // namespace

PrimeSet dense_primes(const Subgroup& k, const Subgroup& l) {
  require_same_alphabet(k.alphabet(), l.alphabet(), "dense_primes");
  if (!contains(l, k)) {
    throw ValidationError("dense_primes requires K to be contained in L");
  }
  {
    std::lock_guard<std::mutex> lock(closure_mutex);
    auto it = dense_cache().find({k.key(), l.key()});
    if (it != dense_cache().end()) return it->second;
  }

  std::size_t rank_l = rank(l);
  PrimeSet result = PrimeSet::all();
  if (rank_l > 0) {
    const auto& gens = basis(k);
    IntegerMatrix m(gens.size(), rank_l);
    for (std::size_t i = 0; i < gens.size(); ++i) {
      auto coords = abelianized_coordinates(l, gens[i]);
      for (std::size_t j = 0; j < rank_l; ++j) m.at(i, j) = coords[j];
    }
    ElementaryDivisors ed = smith_normal_form(std::move(m));
    if (ed.rank() < rank_l) {
      result = PrimeSet::none();
    } else {
      const mpz_class& last = ed.divisors.back();
      if (!last.fits_ulong_p()) {
        throw LimitError("elementary divisor too large to factor");
      }
      result = PrimeSet::cofinite(
          distinct_prime_factors(mpz_get_ui(last.get_mpz_t())));
    }
  }

  std::lock_guard<std::mutex> lock(closure_mutex);
  dense_cache().try_emplace({k.key(), l.key()}, result);
  return result;
}

namespace {

// primitive-root decomposition c = r^e of a cyclically reduced word
std::pair<ReducedWord, std::uint64_t> primitive_root(const ReducedWord& c) {
  const auto& letters = c.letters();
  std::size_t n = letters.size();
  for (std::size_t d = 1; d <= n; ++d) {
    if (n % d != 0) continue;
    bool periodic = true;
    for (std::size_t i = d; i < n && periodic; ++i) {
      periodic = letters[i] == letters[i - d];
    }
    if (periodic) {
      std::vector<LetterCode> root(letters.begin(), letters.begin() + d);
      return {ReducedWord::checked(Word(c.alphabet(), std::move(root))), n / d};
    }
  }
  throw InternalError("a word is always periodic with its own length");
}

ReducedWord word_power(const ReducedWord& r, std::uint64_t e) {
  std::vector<LetterCode> letters;
  letters.reserve(r.size() * e);
  for (std::uint64_t i = 0; i < e; ++i) {
    letters.insert(letters.end(), r.letters().begin(), r.letters().end());
  }
  return ReducedWord::checked(Word(r.alphabet(), std::move(letters)));
}

// the cycle word of a stemless rank-one subgroup graph, with its
// primitive-root decomposition; the graph is a single labeled cycle
std::pair<ReducedWord, std::uint64_t> cycle_decomposition(const Subgroup& k) {
  const ReducedWord& cycle = basis(k).front();
  return primitive_root(cycle);
}

}  // namespace

PrimeSet primes_closed(const Subgroup& k) {
  {
    std::lock_guard<std::mutex> lock(closure_mutex);
    auto it = primes_closed_cache().find(k.key());
    if (it != primes_closed_cache().end()) return it->second;
  }

  auto [stem, core] = detach_stem(k);
  PrimeSet result = PrimeSet::all();
  if (!stem.empty()) {
    result = primes_closed(core);  // conjugation preserves ℙ
  } else if (rank(k) == 1) {
    // Cl_p(⟨r^e⟩) = ⟨r^(p^v_p(e))⟩, so ⟨r^e⟩ is p-closed iff e is a p-power
    auto [root, exponent] = cycle_decomposition(k);
    if (exponent == 1) {
      result = PrimeSet::all();
    } else {
      auto primes = distinct_prime_factors(exponent);
      result = primes.size() == 1 ? PrimeSet::finite({primes.front()})
                                  : PrimeSet::none();
    }
  } else if (rank(k) > 1) {
    PrimeSet densely_contained = PrimeSet::none();
    for (const Subgroup& l : overgroups(k)) {
      if (l == k) continue;
      densely_contained = densely_contained.unite(dense_primes(k, l));
    }
    result = densely_contained.complement();
  }

  std::lock_guard<std::mutex> lock(closure_mutex);
  primes_closed_cache().try_emplace(k.key(), result);
  return result;
}

Subgroup p_closure(const Subgroup& k, std::uint64_t p) {
  if (!is_prime_u64(p)) {
    throw ValidationError("p_closure requires a prime, got " + std::to_string(p));
  }
  auto [stem, core] = detach_stem(k);
  if (!stem.empty()) {
    // Cl_p(u·C·u⁻¹) = u·Cl_p(C)·u⁻¹: conjugation is a homeomorphism
    return conjugate(p_closure(core, p), invert(stem));
  }
  if (rank(k) == 0) return k;
  if (rank(k) == 1) {
    // only rank-≤1 overgroups admit a p-dense containment, and they are the
    // ⟨r^d⟩ with d dividing the exponent; the greatest p-dense one keeps
    // exactly the p-part of the exponent
    auto [root, exponent] = cycle_decomposition(k);
    std::uint64_t p_part = 1;
    while (exponent % p == 0) {
      exponent /= p;
      p_part *= p;
    }
    Subgroup closure = fold(k.alphabet(), {word_power(root, p_part)});
    if (!contains(closure, k) || !dense_primes(k, closure).contains(p)) {
      throw InternalError("rank-one p-closure fails its density check");
    }
    return closure;
  }

  std::vector<Subgroup> candidates;
  for (const Subgroup& l : overgroups(k)) {
    if (dense_primes(k, l).contains(p)) candidates.push_back(l);
  }
  // K itself is always a candidate; theory guarantees a greatest one, which
  // a single max-propagation pass finds
  Subgroup best = candidates.front();
  for (const Subgroup& candidate : candidates) {
    if (contains(candidate, best)) best = candidate;
  }
  for (const Subgroup& candidate : candidates) {
    if (!contains(best, candidate)) {
      throw InternalError(
          "p-dense overgroups have no greatest element; closure theory violated");
    }
  }
  return best;
}

WordAutomaton p_closure_product(const std::vector<Subgroup>& hs,
                                std::uint64_t p) {
  if (hs.empty()) {
    throw ValidationError("p_closure_product requires at least one factor");
  }
  std::optional<WordAutomaton> product;
  for (const Subgroup& h : hs) {
    WordAutomaton lang = subgroup_language(p_closure(h, p));
    product = product ? automaton_concat(*product, lang) : lang;
  }
  return canonical_automaton(benois_reduce(*product));
}

Subgroup nil_closure_subgroup(const Subgroup& h) {
  std::optional<Subgroup> result;
  for (const Subgroup& s : overgroups(h)) {
    if (primes_closed(s).empty()) continue;
    result = result ? intersect(*result, s) : s;
  }
  if (!result) {
    throw InternalError("no overgroup is p-closed for any prime");
  }
  return *result;
}

namespace {

std::string tuple_key(const std::vector<Subgroup>& tuple) {
  std::string key;
  for (const Subgroup& s : tuple) {
    key += s.key();
    key += '|';
  }
  return key;
}

}  // namespace

namespace {

void require_product_factors(const std::vector<Subgroup>& hs,
                             const char* where) {
  if (hs.empty()) {
    throw ValidationError(std::string(where) +
                          " requires at least one factor");
  }
  for (const Subgroup& h : hs) {
    require_same_alphabet(hs.front().alphabet(), h.alphabet(), where);
  }
}

// intersection of the concatenation languages of the given tuples, after
// dropping tuples that dominate another one componentwise (their product
// language contains the dominated one, so the intersection is unchanged)
WordAutomaton intersect_tuple_languages(std::vector<std::vector<Subgroup>> tuples) {
  std::sort(tuples.begin(), tuples.end(),
            [](const auto& a, const auto& b) { return tuple_key(a) < tuple_key(b); });
  tuples.erase(std::unique(tuples.begin(), tuples.end(),
                           [](const auto& a, const auto& b) {
                             return tuple_key(a) == tuple_key(b);
                           }),
               tuples.end());
  std::vector<char> redundant(tuples.size(), 0);
  for (std::size_t a = 0; a < tuples.size(); ++a) {
    for (std::size_t b = 0; b < tuples.size() && !redundant[a]; ++b) {
      if (a == b || redundant[b]) continue;
      bool dominates = true;
      for (std::size_t i = 0; i < tuples[a].size(); ++i) {
        if (!contains(tuples[a][i], tuples[b][i])) {
          dominates = false;
          break;
        }
      }
      if (dominates && tuples[a] != tuples[b]) redundant[a] = 1;
    }
  }

  std::optional<WordAutomaton> result;
  for (std::size_t a = 0; a < tuples.size(); ++a) {
    if (redundant[a]) continue;
    std::optional<WordAutomaton> product;
    for (const Subgroup& s : tuples[a]) {
      WordAutomaton lang = subgroup_language(s);
      product = product ? automaton_concat(*product, lang) : lang;
    }
    WordAutomaton lang = canonical_automaton(benois_reduce(*product));
    result = result ? canonical_automaton(intersect_reduced(*result, lang))
                    : lang;
  }
  return *result;
}

}  // namespace

WordAutomaton nil_closure_product(const std::vector<Subgroup>& hs) {
  require_product_factors(hs, "nil_closure_product");
  std::string memo_key = tuple_key(hs);
  {
    std::lock_guard<std::mutex> lock(closure_mutex);
    auto it = product_closure_cache().find(memo_key);
    if (it != product_closure_cache().end()) return it->second;
  }

  // primes that can change some p-closure: the listed exceptions of the
  // density sets over each factor's lattice (for a rank-one factor ⟨r^e⟩
  // those are just the prime divisors of e)
  std::set<std::uint64_t> exceptional;
  for (const Subgroup& h : hs) {
    auto [stem, core] = detach_stem(h);
    if (rank(core) == 0) continue;
    if (rank(core) == 1) {
      auto [root, exponent] = cycle_decomposition(core);
      for (std::uint64_t p : distinct_prime_factors(exponent)) {
        exceptional.insert(p);
      }
      continue;
    }
    for (const Subgroup& l : overgroups(core)) {
      PrimeSet dense = dense_primes(core, l);
      for (std::uint64_t p : dense.listed()) exceptional.insert(p);
    }
  }
  std::vector<std::uint64_t> representatives(exceptional.begin(),
                                             exceptional.end());
  std::uint64_t generic = 2;
  while (exceptional.count(generic)) {
    ++generic;
    while (!is_prime_u64(generic)) ++generic;
  }
  representatives.push_back(generic);

  std::vector<std::vector<Subgroup>> tuples;
  for (std::uint64_t p : representatives) {
    std::vector<Subgroup> tuple;
    for (const Subgroup& h : hs) tuple.push_back(p_closure(h, p));
    tuples.push_back(std::move(tuple));
  }
  WordAutomaton result = intersect_tuple_languages(std::move(tuples));

  std::lock_guard<std::mutex> lock(closure_mutex);
  product_closure_cache().try_emplace(memo_key, result);
  return result;
}

WordAutomaton nil_closure_product_by_enumeration(const std::vector<Subgroup>& hs) {
  require_product_factors(hs, "nil_closure_product_by_enumeration");
  std::vector<std::vector<Subgroup>> lattices;
  for (const Subgroup& h : hs) lattices.push_back(overgroups(h));

  std::vector<std::vector<Subgroup>> tuples;
  std::vector<Subgroup> current;
  auto enumerate = [&](auto&& self, std::size_t i, const PrimeSet& acc) -> void {
    if (acc.empty()) return;
    if (i == lattices.size()) {
      tuples.push_back(current);
      return;
    }
    for (const Subgroup& s : lattices[i]) {
      current.push_back(s);
      self(self, i + 1, acc.intersect(primes_closed(s)));
      current.pop_back();
    }
  };
  enumerate(enumerate, 0, PrimeSet::all());
  if (tuples.empty()) {
    throw InternalError("no overgroup tuple shares a prime");
  }
  return intersect_tuple_languages(std::move(tuples));
}

// ---------------------------------------------------------------------------
// closure normal forms and rational closures

namespace {

std::string term_key(const ClosureTerm& t) {
  std::string key = t.translation.str();
  for (const Subgroup& f : t.factors) {
    key += "\x1f";
    key += f.key();
  }
  return key;
}

ClosureTerm normalize_term(ClosureTerm t) {
  std::vector<Subgroup> factors;
  for (Subgroup& f : t.factors) {
    if (f.is_trivial()) continue;
    if (!factors.empty() && factors.back() == f) continue;
    factors.push_back(std::move(f));
  }
  t.factors = std::move(factors);
  return t;
}

using TermMap = std::map<std::string, ClosureTerm>;

void add_term(TermMap& terms, ClosureTerm t) {
  ClosureTerm normalized = normalize_term(std::move(t));
  std::string key = term_key(normalized);
  terms.try_emplace(std::move(key), std::move(normalized));
}

TermMap closure_terms(const RationalExpression& e);

// (g·H₁⋯Hₙ)(f·K₁⋯Kₘ) = (gf)·(f⁻¹H₁f)⋯(f⁻¹Hₙf)·K₁⋯Kₘ
ClosureTerm term_product(const ClosureTerm& lhs, const ClosureTerm& rhs) {
  ClosureTerm out{multiply(lhs.translation, rhs.translation), {}};
  for (const Subgroup& h : lhs.factors) {
    out.factors.push_back(conjugate(h, rhs.translation));
  }
  out.factors.insert(out.factors.end(), rhs.factors.begin(), rhs.factors.end());
  return out;
}

TermMap closure_terms(const RationalExpression& e) {
  using Kind = RationalExpression::Kind;
  TermMap terms;
  switch (e.kind()) {
    case Kind::Empty:
      return terms;
    case Kind::Literal:
      add_term(terms, ClosureTerm{e.literal_word(), {}});
      return terms;
    case Kind::Union: {
      terms = closure_terms(e.left());
      for (auto& [key, term] : closure_terms(e.right())) {
        terms.try_emplace(key, std::move(term));
      }
      return terms;
    }
    case Kind::Concat: {
      TermMap lhs = closure_terms(e.left());
      TermMap rhs = closure_terms(e.right());
      for (const auto& [kl, tl] : lhs) {
        for (const auto& [kr, tr] : rhs) {
          add_term(terms, term_product(tl, tr));
        }
      }
      return terms;
    }
    case Kind::Star: {
      TermMap inner = closure_terms(e.child());
      if (inner.empty()) {
        add_term(terms, ClosureTerm{ReducedWord(e.alphabet()), {}});
        return terms;
      }
      // Cl(X*) = ⟨X⟩, generated by every translation g together with the
      // conjugates g Hᵢ g⁻¹ of the factors of each term
      std::vector<Subgroup> parts;
      std::vector<ReducedWord> words;
      for (const auto& [key, term] : inner) {
        words.push_back(term.translation);
        ReducedWord ginv = invert(term.translation);
        for (const Subgroup& h : term.factors) {
          parts.push_back(conjugate(h, ginv));
        }
      }
      Subgroup generated = join(parts, words);
      add_term(terms, ClosureTerm{ReducedWord(e.alphabet()), {generated}});
      return terms;
    }
  }
  throw InternalError("unreachable expression kind");
}

}  // namespace

ClosureNormalForm::ClosureNormalForm(Alphabet alphabet,
                                     std::vector<ClosureTerm> terms)
    : alphabet_(std::move(alphabet)) {
  TermMap map;
  for (ClosureTerm& t : terms) {
    require_same_alphabet(alphabet_, t.translation.alphabet(),
                          "closure normal form");
    add_term(map, std::move(t));
  }
  for (auto& [key, term] : map) terms_.push_back(std::move(term));
}

ClosureNormalForm pro_g_closure(const RationalExpression& e) {
  TermMap terms = closure_terms(e);
  std::vector<ClosureTerm> list;
  list.reserve(terms.size());
  for (auto& [key, term] : terms) list.push_back(std::move(term));
  return ClosureNormalForm(e.alphabet(), std::move(list));
}

WordAutomaton nf_to_automaton(const ClosureNormalForm& nf) {
  if (nf.empty()) return empty_automaton(nf.alphabet());
  std::optional<WordAutomaton> result;
  for (const ClosureTerm& term : nf.terms()) {
    WordAutomaton piece = word_automaton(term.translation);
    for (const Subgroup& f : term.factors) {
      piece = automaton_concat(piece, subgroup_language(f));
    }
    piece = canonical_automaton(benois_reduce(piece));
    result = result ? automaton_union(*result, piece) : piece;
  }
  return canonical_automaton(*result);
}

WordAutomaton nil_closure_rational(const RationalExpression& e) {
  ClosureNormalForm nf = pro_g_closure(e);
  if (nf.empty()) return empty_automaton(e.alphabet());
  std::optional<WordAutomaton> result;
  std::set<std::string> seen;
  for (const ClosureTerm& term : nf.terms()) {
    WordAutomaton piece =
        term.factors.empty()
            ? word_automaton(term.translation)
            : canonical_automaton(benois_reduce(automaton_concat(
                  word_automaton(term.translation),
                  nil_closure_product(term.factors))));
    if (!seen.insert(piece.key()).second) continue;
    result = result ? automaton_union(*result, piece) : piece;
  }
  return canonical_automaton(*result);
}

WordAutomaton nil_closure_rational(const WordAutomaton& a) {
  return nil_closure_rational(extract_expression(a));
}

bool union_p_dense(const std::vector<Subgroup>& hs, std::uint64_t p) {
  if (hs.empty()) {
    throw ValidationError("union_p_dense requires at least one subgroup");
  }
  std::optional<WordAutomaton> united;
  for (const Subgroup& h : hs) {
    WordAutomaton lang = subgroup_language(p_closure(h, p));
    united = united ? automaton_union(*united, lang) : lang;
  }
  return is_universal(*united);
}

// ---------------------------------------------------------------------------
// pseudonorm

double DyadicNorm::value() const {
  if (!exponent) return 0.0;
  return std::ldexp(1.0, -static_cast<int>(std::min<std::uint64_t>(*exponent, 4096)));
}

std::string DyadicNorm::str() const {
  if (!exponent) return "0";
  return "2^-" + std::to_string(*exponent);
}

PseudonormResult pseudonorm(const ReducedWord& g, const Catalog& catalog) {
  if (catalog.groups.empty()) {
    throw ValidationError("pseudonorm requires a nonempty catalog");
  }
  PseudonormResult best;
  for (std::size_t gi = 0; gi < catalog.groups.size(); ++gi) {
    const GroupPtr& group = catalog.groups[gi];
    const FiniteMonoid& table = group->monoid;
    for (const Homomorphism& hom : enum_homs(g.alphabet(), group)) {
      if (hom_eval(hom, g.word()) == table.identity()) continue;
      // |image| = size of the subgroup generated by the letter images
      std::vector<char> seen(table.size(), 0);
      seen[table.identity()] = 1;
      std::vector<std::uint32_t> frontier{table.identity()};
      std::size_t image_size = 1;
      while (!frontier.empty()) {
        std::uint32_t x = frontier.back();
        frontier.pop_back();
        for (std::uint32_t im : hom.images) {
          std::uint32_t y = table.mul(x, im);
          if (!seen[y]) {
            seen[y] = 1;
            ++image_size;
            frontier.push_back(y);
          }
        }
      }
      if (!best.norm.exponent || image_size < *best.norm.exponent) {
        best.norm.exponent = image_size;
        best.witness_group = gi;
        best.witness = hom;
      }
    }
  }
  return best;
}

PseudonormResult pseudodistance(const ReducedWord& g1, const ReducedWord& g2,
                                const Catalog& catalog) {
  return pseudonorm(multiply(g1, invert(g2)), catalog);
}

}  // namespace nilclose
