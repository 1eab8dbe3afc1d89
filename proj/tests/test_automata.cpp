#include <doctest.h>

#include "test_support.hpp"

using namespace nilclose;
using namespace nilclose::test;

TEST_SUITE_BEGIN("automata");

TEST_CASE("compile literals and star") {
  Alphabet a = ab();
  WordAutomaton lit = compile_expression(parse_expression(a, "a"));
  CHECK(accepts(lit, parse_word(a, "a")));
  CHECK(!accepts(lit, parse_word(a, "aa")));
  CHECK(!accepts(lit, parse_word(a, "A")));
  CHECK(!accepts(lit, parse_word(a, "")));

  WordAutomaton star = compile_expression(parse_expression(a, "(ab)*"));
  CHECK(accepts(star, parse_word(a, "")));
  CHECK(accepts(star, parse_word(a, "abab")));
  CHECK(!accepts(star, parse_word(a, "aabb")));

  WordAutomaton eps = compile_expression(parse_expression(a, "0|1"));
  auto words = accepted_words_up_to(eps, 3);
  REQUIRE(words.size() == 1);
  CHECK(words.front().empty());
}

TEST_CASE("benois reduction") {
  Alphabet a = ab();
  WordAutomaton cancel = benois_reduce(compile_expression(parse_expression(a, "aA")));
  CHECK(accepts(cancel, parse_word(a, "")));
  CHECK(compare(cancel, word_automaton(ReducedWord(a))) == Relation::Equal);

  WordAutomaton pair = benois_reduce(
      compile_expression(parse_expression(a, "abB|a")));
  CHECK(compare(pair, word_automaton(w(a, "a"))) == Relation::Equal);
}

TEST_CASE("benois of a subgroup expression matches the folded graph") {
  Alphabet a = ab();
  Subgroup h = fixture_h();
  WordAutomaton reduced =
      benois_reduce(compile_expression(parse_expression(a, "(aa|AA|b|B)*")));
  // membership of every reduced word up to length 8 agrees with the graph
  for (const ReducedWord& u : reduced_words_up_to(a, 8)) {
    CHECK(accepts(reduced, u.word()) == member(h, u));
  }
  CHECK(compare(reduced, subgroup_language(h)) == Relation::Equal);

  // the plain star without inverses is the submonoid, a strict subset
  WordAutomaton positive =
      benois_reduce(compile_expression(parse_expression(a, "(aa|b)*")));
  CHECK(compare(positive, subgroup_language(h)) == Relation::StrictSubset);
}

TEST_CASE("boolean combinations of reduced languages") {
  Alphabet a = ab();
  Subgroup h = fixture_h();
  Subgroup k = fixture_k();
  WordAutomaton hl = subgroup_language(h);
  WordAutomaton kl = subgroup_language(k);

  CHECK(compare(intersect_reduced(universal_reduced(a), hl), hl) ==
        Relation::Equal);
  CHECK(compare(complement_reduced(complement_reduced(hl)), hl) ==
        Relation::Equal);
  // oracle for the intersection: the product graph
  CHECK(compare(intersect_reduced(hl, kl), subgroup_language(intersect(h, k))) ==
        Relation::Equal);

  WordAutomaton unreduced = compile_expression(parse_expression(a, "aA"));
  CHECK_THROWS_AS(intersect_reduced(unreduced, hl), FlagError);
  CHECK_THROWS_AS(complement_reduced(unreduced), FlagError);
  CHECK_THROWS_AS(compare(unreduced, hl), FlagError);

  WordAutomaton diff = difference_reduced(universal_reduced(a), hl);
  CHECK(!accepts(diff, parse_word(a, "aa")));
  CHECK(accepts(diff, parse_word(a, "a")));
}

TEST_CASE("literal acceptance") {
  Alphabet a = ab();
  WordAutomaton lit = word_automaton(w(a, "a"));
  CHECK(accepts(lit, parse_word(a, "a")));
  CHECK(!accepts(lit, Word(a, {0, 1, 0})));  // a a⁻¹ a, literally
  CHECK(accepts(benois_reduce(compile_expression(parse_expression(a, "aA"))),
                parse_word(a, "")));
}

TEST_CASE("compare relations") {
  Alphabet a = ab();
  WordAutomaton hl = subgroup_language(fixture_h());
  CHECK(compare(hl, hl) == Relation::Equal);
  CHECK(compare(empty_automaton(a), universal_reduced(a)) ==
        Relation::StrictSubset);
  CHECK(compare(hl, universal_reduced(a)) == Relation::StrictSubset);
  CHECK(compare(universal_reduced(a), hl) == Relation::StrictSuperset);
  CHECK(compare(hl, subgroup_language(fixture_k())) == Relation::Incomparable);
  CHECK(is_empty(empty_automaton(a)));
  CHECK(!is_empty(hl));
  CHECK(is_universal(universal_reduced(a)));
  CHECK(!is_universal(hl));
}

TEST_CASE("expression extraction") {
  Alphabet a = ab();
  // {ε}
  RationalExpression eps = extract_expression(word_automaton(ReducedWord(a)));
  CHECK(compare(benois_reduce(compile_expression(eps)),
                word_automaton(ReducedWord(a))) == Relation::Equal);
  // {a}*
  WordAutomaton astar = compile_expression(parse_expression(a, "a*"));
  RationalExpression back = extract_expression(astar);
  CHECK(compare(benois_reduce(compile_expression(back)),
                benois_reduce(astar)) == Relation::Equal);
  // Cayley automaton of U1 at the zero element: words a·a*
  WordAutomaton cayley = cayley_language(u1(), 1);
  RationalExpression ext = extract_expression(cayley);
  WordAutomaton recompiled = benois_reduce(compile_expression(ext));
  WordAutomaton expected = benois_reduce(
      compile_expression(parse_expression(Alphabet("a"), "aa*")));
  CHECK(compare(recompiled, expected) == Relation::Equal);
}

TEST_CASE("round trip through extraction preserves the language") {
  Alphabet a = ab();
  std::mt19937 rng(23);
  for (int i = 0; i < 30; ++i) {
    RationalExpression e = random_expression(rng, a, 3);
    WordAutomaton compiled = benois_reduce(compile_expression(e));
    WordAutomaton roundtrip =
        benois_reduce(compile_expression(extract_expression(compiled)));
    CHECK(compare(compiled, roundtrip) == Relation::Equal);
  }
}

TEST_CASE("rational operations commute with images in finite groups") {
  Alphabet a = ab();
  Catalog catalog = nilpotent_catalog(6);
  std::mt19937 rng(31);
  GroupPtr z6;
  for (const GroupPtr& g : catalog.groups) {
    if (g->name == "Z/6") z6 = g;
  }
  REQUIRE(z6);
  auto homs = enum_homs(a, z6);

  for (int i = 0; i < 10; ++i) {
    WordAutomaton x = compile_expression(random_expression(rng, a, 2));
    WordAutomaton y = compile_expression(random_expression(rng, a, 2));
    for (std::size_t hi : {std::size_t(1), homs.size() - 2}) {
      const Homomorphism& hom = homs[hi];
      ElementSubset ix = image_of_language(x, hom);
      ElementSubset iy = image_of_language(y, hom);
      ElementSubset iu = image_of_language(automaton_union(x, y), hom);
      ElementSubset ic = image_of_language(automaton_concat(x, y), hom);
      const FiniteMonoid& g = z6->monoid;
      for (std::uint32_t e = 0; e < g.size(); ++e) {
        CHECK(iu[e] == (ix[e] || iy[e]));
      }
      ElementSubset prod(g.size(), false);
      for (std::uint32_t p = 0; p < g.size(); ++p) {
        for (std::uint32_t q = 0; q < g.size(); ++q) {
          if (ix[p] && iy[q]) prod[g.mul(p, q)] = true;
        }
      }
      CHECK(ic == prod);
    }
  }
}

TEST_CASE("benois bounded soundness and completeness") {
  Alphabet a = ab();
  std::mt19937 rng(47);
  for (int i = 0; i < 25; ++i) {
    RationalExpression e = random_expression(rng, a, 4);
    WordAutomaton compiled = compile_expression(e);
    BenoisResult r = benois_reduce_stats(compiled);

    std::set<std::string> output_words;
    std::vector<ReducedWord> output_reduced;
    for (const Word& uw : accepted_words_up_to(r.automaton, 8)) {
      output_words.insert(uw.str());
      if (uw.size() <= 6) output_reduced.push_back(ReducedWord::checked(uw));
    }
    // soundness: every accepted word of length up to 8 has its reduction
    // accepted
    for (const Word& v : accepted_words_up_to(compiled, 8)) {
      CHECK(output_words.count(reduce(v).str()) == 1);
    }
    // completeness: every short accepted reduced word is witnessed
    for (const ReducedWord& u : output_reduced) {
      auto v = benois_witness(r, u);
      REQUIRE(v.has_value());
      CHECK(accepts(compiled, *v));
      CHECK(reduce(*v) == u);
      CHECK(v->size() <= u.size() + 2 * r.saturation_depth * (u.size() + 2));
    }
  }
}

TEST_CASE("compare is consistent with sampled acceptance") {
  Alphabet a = ab();
  std::mt19937 rng(53);
  for (int i = 0; i < 10; ++i) {
    WordAutomaton x = benois_reduce(compile_expression(random_expression(rng, a, 3)));
    WordAutomaton y = benois_reduce(compile_expression(random_expression(rng, a, 3)));
    Relation rel = compare(x, y);
    for (const ReducedWord& u : reduced_words_up_to(a, 4)) {
      bool in_x = accepts(x, u.word());
      bool in_y = accepts(y, u.word());
      if (rel == Relation::Equal) CHECK(in_x == in_y);
      if (rel == Relation::StrictSubset) CHECK((!in_x || in_y));
      if (rel == Relation::StrictSuperset) CHECK((!in_y || in_x));
    }
  }
}

TEST_CASE("state budget produces a limit error") {
  Alphabet a = ab();
  std::size_t saved = limits().max_states;
  limits().max_states = 2;
  CHECK_THROWS_AS(
      benois_reduce(compile_expression(parse_expression(a, "(ab|ba)*"))),
      LimitError);
  limits().max_states = saved;
}

TEST_SUITE_END();
