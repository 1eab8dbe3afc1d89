#include <doctest.h>

#include "test_support.hpp"

using namespace nilclose;
using namespace nilclose::test;

TEST_SUITE_BEGIN("freegroup");

TEST_CASE("free reduction") {
  Alphabet a = ab();
  CHECK(parse_reduced(a, "aAb").str() == "b");
  CHECK(parse_reduced(a, "").str() == "1");
  CHECK(parse_reduced(a, "1").str() == "1");
  CHECK(parse_reduced(a, "abBa").str() == "aa");
  CHECK(parse_reduced(a, "a A b B a A").str() == "1");
}

TEST_CASE("group operations") {
  Alphabet a = ab();
  CHECK(multiply(w(a, "a"), w(a, "A")).empty());
  CHECK(invert(w(a, "aB")).str() == "bA");
  CHECK(multiply(w(a, "ab"), w(a, "Ba")).str() == "aa");
}

TEST_CASE("alphabet errors") {
  Alphabet a = ab();
  CHECK_THROWS_AS(parse_word(a, "ac"), AlphabetError);
  CHECK_THROWS_AS(multiply(w(a, "a"), w(Alphabet("abc"), "a")), AlphabetError);
  CHECK_THROWS_AS(Alphabet(""), ValidationError);
  CHECK_THROWS_AS(Alphabet("aa"), ValidationError);
  CHECK_THROWS_AS(Alphabet("aB"), ValidationError);
}

TEST_CASE("reduction invariants on random words") {
  Alphabet a = ab();
  std::mt19937 rng(7);
  Catalog catalog = nilpotent_catalog(6);
  std::vector<Homomorphism> homs;
  for (const GroupPtr& g : catalog.groups) {
    if (g->monoid.size() < 2) continue;
    auto all = enum_homs(a, g);
    homs.push_back(all[all.size() / 3]);
    homs.push_back(all.back());
  }

  for (int i = 0; i < 200; ++i) {
    std::uniform_int_distribution<std::size_t> len(0, 12);
    std::vector<LetterCode> letters;
    std::uniform_int_distribution<LetterCode> code(0, 3);
    std::size_t n = len(rng);
    for (std::size_t k = 0; k < n; ++k) letters.push_back(code(rng));
    Word word(a, letters);
    ReducedWord r = reduce(word);

    CHECK(reduce(r.word()) == r);               // idempotent
    CHECK(r.size() <= word.size());
    CHECK((word.size() - r.size()) % 2 == 0);   // cancellation removes pairs
    CHECK(multiply(r, invert(r)).empty());
    for (const Homomorphism& hom : homs) {
      CHECK(hom_eval(hom, word) == hom_eval(hom, r.word()));
    }
  }
}

TEST_CASE("parse and print round trip") {
  Alphabet a = ab();
  std::mt19937 rng(11);
  for (int i = 0; i < 50; ++i) {
    ReducedWord r = random_reduced_word(rng, a, 10);
    CHECK(parse_reduced(a, r.str()) == r);
  }
}

TEST_SUITE_END();
