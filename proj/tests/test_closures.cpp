#include <doctest.h>

#include <algorithm>
#include <functional>
#include <thread>

#include "test_support.hpp"

using namespace nilclose;
using namespace nilclose::test;

namespace {

std::vector<long> divisors_as_long(const ElementaryDivisors& ed) {
  std::vector<long> out;
  for (const mpz_class& d : ed.divisors) out.push_back(d.get_si());
  return out;
}

// rank of an integer matrix over F_p by Gaussian elimination
std::size_t rank_mod_p(std::vector<std::vector<std::int64_t>> m, std::int64_t p) {
  std::size_t rows = m.size();
  std::size_t cols = rows == 0 ? 0 : m.front().size();
  auto norm = [&](std::int64_t x) { return ((x % p) + p) % p; };
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t pivot = r;
    while (pivot < rows && norm(m[pivot][c]) == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(m[pivot], m[r]);
    std::int64_t inv = 1;
    for (std::int64_t x = 1; x < p; ++x) {
      if (norm(m[r][c] * x) == 1) inv = x;
    }
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || norm(m[i][c]) == 0) continue;
      std::int64_t factor = norm(m[i][c] * inv);
      for (std::size_t j = 0; j < cols; ++j) {
        m[i][j] = norm(m[i][j] - factor * m[r][j]);
      }
    }
    ++r;
  }
  return r;
}

}  // namespace

TEST_SUITE_BEGIN("closures");

TEST_CASE("smith normal form examples") {
  CHECK(divisors_as_long(smith_normal_form(
            IntegerMatrix::from_rows({{2, 0}, {0, 1}}))) ==
        std::vector<long>{1, 2});
  CHECK(divisors_as_long(smith_normal_form(
            IntegerMatrix::from_rows({{2, 4}, {6, 8}}))) ==
        std::vector<long>{2, 4});
  CHECK(smith_normal_form(IntegerMatrix(0, 0)).rank() == 0);
}

TEST_CASE("smith normal form determinantal property") {
  std::mt19937 rng(101);
  std::uniform_int_distribution<long> entry(-9, 9);
  for (int trial = 0; trial < 100; ++trial) {
    IntegerMatrix m(3, 3);
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) m.at(i, j) = entry(rng);
    }
    ElementaryDivisors ed = smith_normal_form(m);
    for (std::size_t i = 0; i + 1 < ed.divisors.size(); ++i) {
      CHECK(ed.divisors[i + 1] % ed.divisors[i] == 0);
      CHECK(ed.divisors[i] > 0);
    }
    mpz_class product = 1;
    for (std::size_t k = 1; k <= ed.rank(); ++k) {
      product *= ed.divisors[k - 1];
      CHECK(product == minor_gcd(m, k));
    }
    if (ed.rank() < 3) CHECK(minor_gcd(m, ed.rank() + 1) == 0);
  }
}

TEST_CASE("dense primes") {
  Alphabet a = ab();
  Subgroup h = fixture_h();
  Subgroup k = fixture_k();
  Subgroup f = full_group(a);
  CHECK(dense_primes(h, f) == PrimeSet::cofinite({2}));
  CHECK(dense_primes(k, f) == PrimeSet::cofinite({3}));
  CHECK(dense_primes(h, h) == PrimeSet::all());
  CHECK_THROWS_AS(dense_primes(f, h), ValidationError);
}

TEST_CASE("dense primes against mod-p elimination") {
  Alphabet a = ab();
  Subgroup f = full_group(a);
  std::mt19937 rng(103);
  for (int i = 0; i < 15; ++i) {
    Subgroup k = random_subgroup(rng, a, 2, 4);
    std::vector<std::vector<std::int64_t>> matrix;
    for (const ReducedWord& b : basis(k)) {
      matrix.push_back(abelianized_coordinates(f, b));
    }
    PrimeSet dense = dense_primes(k, f);
    for (std::int64_t p : {2, 3, 5}) {
      bool full_rank = rank_mod_p(matrix, p) == rank(f);
      CHECK(dense.contains(p) == full_rank);
    }
  }
}

TEST_CASE("primes closed") {
  Alphabet a = ab();
  CHECK(primes_closed(fixture_h()) == PrimeSet::finite({2}));
  CHECK(primes_closed(fixture_k()) == PrimeSet::finite({3}));
  // no proper overgroups: closed for every prime (a free factor)
  CHECK(primes_closed(sub(a, {"a"})) == PrimeSet::all());
}

TEST_CASE("p-closure") {
  Alphabet a = ab();
  Subgroup h = fixture_h();
  CHECK(p_closure(h, 2) == h);
  CHECK(p_closure(h, 3) == full_group(a));
  for (std::uint64_t p : {2ull, 3ull, 5ull}) {
    CHECK(p_closure(fold(a, {}), p).is_trivial());
  }
  CHECK_THROWS_AS(p_closure(h, 4), ValidationError);
}

TEST_CASE("p-closure of products") {
  Alphabet a = ab();
  Subgroup h = fixture_h();
  Subgroup k = fixture_k();
  CHECK(compare(p_closure_product({h}, 2), subgroup_language(h)) ==
        Relation::Equal);
  CHECK(compare(p_closure_product({h}, 3), universal_reduced(a)) ==
        Relation::Equal);
  CHECK(is_universal(p_closure_product({h, k}, 5)));

  // <a><b> is p-closed for every p: both factors have no proper overgroups
  WordAutomaton amn = p_closure_product({sub(a, {"a"}), sub(a, {"b"})}, 3);
  CHECK(accepts(amn, parse_word(a, "aab")));
  CHECK(!accepts(amn, parse_word(a, "ba")));
}

TEST_CASE("nil-closure of subgroups") {
  Alphabet a = ab();
  Subgroup h = fixture_h();
  CHECK(nil_closure_subgroup(h) == h);
  CHECK(nil_closure_subgroup(fixture_k()) == fixture_k());
  CHECK(nil_closure_subgroup(full_group(a)) == full_group(a));
  Alphabet single("a");
  Subgroup squares = sub(single, {"aa"});
  CHECK(nil_closure_subgroup(squares) == squares);
  CHECK(primes_closed(squares).contains(2));
}

TEST_CASE("nil-closure of products") {
  Alphabet a = ab();
  Subgroup h = fixture_h();
  Subgroup k = fixture_k();

  // the headline counterexample: HK is nil-dense but a proper subset
  WordAutomaton hk = nil_closure_product({h, k});
  CHECK(is_universal(hk));
  WordAutomaton product_language = canonical_automaton(benois_reduce(
      automaton_concat(subgroup_language(h), subgroup_language(k))));
  CHECK(compare(product_language, universal_reduced(a)) ==
        Relation::StrictSubset);

  // a single factor agrees with the subgroup closure
  CHECK(compare(nil_closure_product({h}),
                subgroup_language(nil_closure_subgroup(h))) == Relation::Equal);

  // <a><b> stays closed
  WordAutomaton amn = nil_closure_product({sub(a, {"a"}), sub(a, {"b"})});
  CHECK(accepts(amn, parse_word(a, "ab")));
  CHECK(accepts(amn, parse_word(a, "AAbb")));
  CHECK(!accepts(amn, parse_word(a, "ba")));
  CHECK(!accepts(amn, parse_word(a, "aba")));

  CHECK_THROWS_AS(nil_closure_product({}), ValidationError);
}

TEST_CASE("rank-one closed forms agree with the lattice route") {
  Alphabet a = ab();
  std::mt19937 rng(131);
  for (int i = 0; i < 12; ++i) {
    ReducedWord w = random_reduced_word(rng, a, 6, 1);
    Subgroup k = fold(a, {w});

    // general route, inlined: union of density sets over proper overgroups
    PrimeSet densely = PrimeSet::none();
    for (const Subgroup& l : overgroups(k)) {
      if (l == k) continue;
      densely = densely.unite(dense_primes(k, l));
    }
    CHECK(primes_closed(k) == densely.complement());

    for (std::uint64_t p : {2ull, 3ull}) {
      // general route, inlined: greatest overgroup with a p-dense containment
      std::optional<Subgroup> best;
      for (const Subgroup& l : overgroups(k)) {
        if (!dense_primes(k, l).contains(p)) continue;
        if (!best || contains(l, *best)) best = l;
      }
      REQUIRE(best.has_value());
      CHECK(p_closure(k, p) == *best);
    }
  }
}

TEST_CASE("nil-closure lies below every p-closure product on fixtures") {
  Alphabet a = ab();
  std::vector<std::vector<Subgroup>> fixtures = {
      {fixture_h(), fixture_k()},
      {sub(a, {"a"}), sub(a, {"b"})},
  };
  for (const auto& hs : fixtures) {
    WordAutomaton nil = nil_closure_product(hs);
    std::optional<WordAutomaton> meet;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull}) {
      WordAutomaton pc = p_closure_product(hs, p);
      Relation rel = compare(nil, pc);
      CHECK((rel == Relation::Equal || rel == Relation::StrictSubset));
      meet = meet ? canonical_automaton(intersect_reduced(*meet, pc)) : pc;
    }
    // on these fixtures the intersection over small primes is already exact
    CHECK(compare(nil, *meet) == Relation::Equal);
  }
}

TEST_CASE("representative primes agree with the full tuple enumeration") {
  Alphabet a = ab();
  std::vector<std::vector<Subgroup>> inputs = {
      {fixture_h(), fixture_k()},
      {fixture_h()},
      {sub(a, {"a"}), sub(a, {"b"})},
      {sub(a, {"ab"}), sub(a, {"aa", "bb"})},
  };
  std::mt19937 rng(113);
  for (int i = 0; i < 4; ++i) {
    inputs.push_back({random_subgroup(rng, a, 2, 3), random_subgroup(rng, a, 2, 3)});
  }
  for (const auto& hs : inputs) {
    CHECK(compare(nil_closure_product(hs),
                  nil_closure_product_by_enumeration(hs)) == Relation::Equal);
  }
}

TEST_CASE("profinite closure normal forms") {
  Alphabet a = ab();
  ClosureNormalForm star = pro_g_closure(parse_expression(a, "(ab)*"));
  REQUIRE(star.terms().size() == 1);
  CHECK(star.terms()[0].translation.empty());
  REQUIRE(star.terms()[0].factors.size() == 1);
  CHECK(star.terms()[0].factors[0] == sub(a, {"ab"}));
  WordAutomaton lang = nf_to_automaton(star);
  CHECK(accepts(lang, parse_word(a, "")));
  CHECK(accepts(lang, parse_word(a, "ab")));
  CHECK(accepts(lang, parse_word(a, "BA")));

  ClosureNormalForm lit = pro_g_closure(parse_expression(a, "a"));
  REQUIRE(lit.terms().size() == 1);
  CHECK(lit.terms()[0].translation == w(a, "a"));
  CHECK(lit.terms()[0].factors.empty());

  ClosureNormalForm uni = pro_g_closure(parse_expression(a, "a*|b"));
  REQUIRE(uni.terms().size() == 2);
  bool saw_star = false, saw_b = false;
  for (const ClosureTerm& t : uni.terms()) {
    if (t.translation.empty() && t.factors.size() == 1 &&
        t.factors[0] == sub(a, {"a"})) {
      saw_star = true;
    }
    if (t.translation == w(a, "b") && t.factors.empty()) saw_b = true;
  }
  CHECK(saw_star);
  CHECK(saw_b);
}

TEST_CASE("normal form to automaton") {
  Alphabet a = ab();
  CHECK(is_empty(nf_to_automaton(ClosureNormalForm(a))));

  ClosureNormalForm circle(a, {ClosureTerm{ReducedWord(a), {sub(a, {"a"})}}});
  WordAutomaton ak = nf_to_automaton(circle);
  CHECK(compare(ak, subgroup_language(sub(a, {"a"}))) == Relation::Equal);

  ClosureNormalForm coset(a, {ClosureTerm{w(a, "b"), {sub(a, {"a"})}}});
  WordAutomaton bak = nf_to_automaton(coset);
  CHECK(accepts(bak, parse_word(a, "b")));
  CHECK(accepts(bak, parse_word(a, "baa")));
  CHECK(accepts(bak, parse_word(a, "bA")));
  CHECK(!accepts(bak, parse_word(a, "ab")));
}

TEST_CASE("nil-closure of rational subsets") {
  Alphabet a = ab();
  Subgroup h = fixture_h();
  Subgroup k = fixture_k();

  RationalExpression hk_union = RationalExpression::alt(
      subgroup_expression(h), subgroup_expression(k));
  WordAutomaton closure = nil_closure_rational(hk_union);
  WordAutomaton expected =
      automaton_union(subgroup_language(h), subgroup_language(k));
  CHECK(compare(closure, expected) == Relation::Equal);
  CHECK(!accepts(closure, parse_word(a, "ab")));

  // {a^n : n ≥ 1} is nil-dense in <a>
  Alphabet single("a");
  WordAutomaton positive =
      nil_closure_rational(parse_expression(single, "aa*"));
  CHECK(accepts(positive, parse_word(single, "")));
  CHECK(compare(positive, universal_reduced(single)) == Relation::Equal);

  CHECK(is_empty(nil_closure_rational(parse_expression(a, "0"))));
}

TEST_CASE("p-dense unions") {
  Alphabet a = ab();
  Subgroup h = fixture_h();
  Subgroup k = fixture_k();
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull}) {
    CHECK(union_p_dense({h, k}, p));
  }
  CHECK(!union_p_dense({h}, 2));
  CHECK(union_p_dense({full_group(a)}, 2));
  CHECK(union_p_dense({full_group(a)}, 13));
}

TEST_CASE("pseudonorm") {
  Alphabet a = ab();
  Catalog small = nilpotent_catalog(2);  // trivial group and Z/2
  PseudonormResult eps = pseudonorm(ReducedWord(a), small);
  CHECK(eps.norm.is_zero());
  CHECK(!eps.witness.has_value());
  CHECK(eps.norm.str() == "0");

  PseudonormResult na = pseudonorm(w(a, "a"), small);
  CHECK(na.norm == DyadicNorm{2});
  CHECK(na.norm.str() == "2^-2");
  CHECK(na.norm.value() == 0.25);
  REQUIRE(na.witness.has_value());
  CHECK(na.witness->target->monoid.size() == 2);

  // commutators vanish in every abelian group
  Catalog abelian = nilpotent_catalog(7);
  PseudonormResult comm = pseudonorm(w(a, "abAB"), abelian);
  CHECK(comm.norm.is_zero());

  // distance: d(g, g) = 0, d(a, b) > 0
  CHECK(pseudodistance(w(a, "a"), w(a, "a"), small).norm.is_zero());
  CHECK(!pseudodistance(w(a, "a"), w(a, "b"), small).norm.is_zero());

  CHECK_THROWS_AS(pseudonorm(w(a, "a"), Catalog{}), ValidationError);
}

TEST_CASE("closure properties on random subgroup pairs") {
  Alphabet a = ab();
  std::mt19937 rng(107);
  Subgroup f = full_group(a);
  for (int i = 0; i < 10; ++i) {
    Subgroup h1 = random_subgroup(rng, a, 2, 4);
    Subgroup h2 = random_subgroup(rng, a, 2, 4);
    RationalExpression concat_expr = RationalExpression::seq(
        subgroup_expression(h1), subgroup_expression(h2));
    WordAutomaton input =
        canonical_automaton(benois_reduce(compile_expression(concat_expr)));
    WordAutomaton closure = nil_closure_rational(concat_expr);

    // extensivity
    Relation ext = compare(input, closure);
    CHECK((ext == Relation::Equal || ext == Relation::StrictSubset));
    // idempotence
    CHECK(compare(nil_closure_rational(closure), closure) == Relation::Equal);
    // monotonicity: L ⊆ L ∪ L' gives Cl(L) ⊆ Cl(L ∪ L')
    RationalExpression bigger = RationalExpression::alt(
        concat_expr, RationalExpression::literal(random_reduced_word(rng, a, 3)));
    Relation mono = compare(closure, nil_closure_rational(bigger));
    CHECK((mono == Relation::Equal || mono == Relation::StrictSubset));
    // ordering: Cl_G ⊆ Cl_nil ⊆ every p-closure product
    Relation lower = compare(nf_to_automaton(pro_g_closure(concat_expr)), closure);
    CHECK((lower == Relation::Equal || lower == Relation::StrictSubset));
    for (std::uint64_t p : {2ull, 3ull}) {
      Relation upper = compare(closure, p_closure_product({h1, h2}, p));
      CHECK((upper == Relation::Equal || upper == Relation::StrictSubset));
    }
    // translation equivariance
    ReducedWord g = random_reduced_word(rng, a, 2);
    WordAutomaton lhs = nil_closure_rational(RationalExpression::seq(
        RationalExpression::literal(g), concat_expr));
    WordAutomaton rhs = canonical_automaton(
        benois_reduce(automaton_concat(word_automaton(g), closure)));
    CHECK(compare(lhs, rhs) == Relation::Equal);
    // union proposition: p ≥ n = 2 and p-dense union forces a p-dense factor
    for (std::uint64_t p : {2ull, 3ull, 5ull}) {
      if (union_p_dense({h1, h2}, p)) {
        CHECK((dense_primes(h1, f).contains(p) || dense_primes(h2, f).contains(p)));
      }
    }
  }
}

TEST_CASE("hall: subgroups are profinitely closed") {
  Alphabet a = ab();
  std::mt19937 rng(109);
  for (int i = 0; i < 10; ++i) {
    Subgroup h = random_subgroup(rng, a, 3, 4);
    WordAutomaton closed = nf_to_automaton(pro_g_closure(subgroup_expression(h)));
    CHECK(compare(closed, subgroup_language(h)) == Relation::Equal);
  }
}

TEST_CASE("independent closure computations are safe in parallel") {
  Alphabet a = ab();
  std::mt19937 rng(127);
  std::vector<Subgroup> inputs;
  for (int i = 0; i < 8; ++i) inputs.push_back(random_subgroup(rng, a, 2, 4));

  std::vector<PrimeSet> serial;
  for (const Subgroup& h : inputs) serial.push_back(primes_closed(h));
  std::vector<Subgroup> serial_closures;
  for (const Subgroup& h : inputs) serial_closures.push_back(nil_closure_subgroup(h));

  std::vector<std::optional<PrimeSet>> parallel(inputs.size());
  std::vector<std::optional<Subgroup>> parallel_closures(inputs.size());
  std::vector<std::thread> workers;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    workers.emplace_back([&, i]() {
      parallel[i] = primes_closed(inputs[i]);
      parallel_closures[i] = nil_closure_subgroup(inputs[i]);
    });
  }
  for (std::thread& w : workers) w.join();
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    CHECK(*parallel[i] == serial[i]);
    CHECK(*parallel_closures[i] == serial_closures[i]);
  }
}

TEST_CASE("oracle never contradicts a nil-closure") {
  Alphabet a = ab();
  Subgroup h = fixture_h();
  Subgroup k = fixture_k();
  Catalog catalog = nilpotent_catalog(8);

  RationalExpression expr = RationalExpression::seq(subgroup_expression(h),
                                                    subgroup_expression(k));
  WordAutomaton input = benois_reduce(compile_expression(expr));
  WordAutomaton closure = nil_closure_rational(expr);
  ClosureOracle oracle(input, catalog);
  for (const ReducedWord& u : reduced_words_up_to(a, 5)) {
    if (accepts(closure, u.word())) CHECK(oracle.admits(u));
  }
}

TEST_SUITE_END();
