#pragma once

#include <algorithm>
#include <functional>
#include <random>
#include <set>
#include <vector>

#include "nilclose/closures.hpp"
#include "nilclose/json_io.hpp"
#include "nilclose/monoids.hpp"
#include "nilclose/oracle.hpp"
#include "nilclose/stallings.hpp"

namespace nilclose::test {

inline Alphabet ab() { return Alphabet("ab"); }

inline ReducedWord w(const Alphabet& alphabet, std::string_view text) {
  return parse_reduced(alphabet, text);
}

inline Subgroup sub(const Alphabet& alphabet,
                    const std::vector<std::string>& gens) {
  std::vector<ReducedWord> words;
  for (const auto& g : gens) words.push_back(parse_reduced(alphabet, g));
  return fold(alphabet, words);
}

inline Subgroup fixture_h() { return sub(ab(), {"aa", "b"}); }
inline Subgroup fixture_k() { return sub(ab(), {"a", "bbb"}); }

// ---------------------------------------------------------------------------
// monoid fixtures

inline FiniteMonoid u1() {
  return FiniteMonoid({0, 1, 1, 1}, 0, Alphabet("a"), {1}, {"1", "0"});
}

inline std::vector<std::uint32_t> s3_table() {
  int perms[6][3] = {{0, 1, 2}, {1, 0, 2}, {2, 1, 0},
                     {0, 2, 1}, {1, 2, 0}, {2, 0, 1}};
  auto compose = [&](int p, int q) {
    int r[3];
    for (int i = 0; i < 3; ++i) r[i] = perms[p][perms[q][i]];
    for (int k = 0; k < 6; ++k) {
      if (r[0] == perms[k][0] && r[1] == perms[k][1] && r[2] == perms[k][2]) {
        return k;
      }
    }
    return -1;
  };
  std::vector<std::uint32_t> table(36);
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      table[i * 6 + j] = static_cast<std::uint32_t>(compose(i, j));
    }
  }
  return table;
}

inline std::vector<std::string> s3_names() {
  return {"e", "(01)", "(02)", "(12)", "(012)", "(021)"};
}

// generators: transposition (01) and 3-cycle (012)
inline FiniteMonoid s3() {
  return FiniteMonoid(s3_table(), 0, Alphabet("ab"), {1, 4}, s3_names());
}

// {1, r1, r2} with xy = y on {r1, r2}
inline FiniteMonoid right_zero() {
  return FiniteMonoid({0, 1, 2, 1, 1, 2, 2, 1, 2}, 0, Alphabet("ab"), {1, 2},
                      {"1", "r1", "r2"});
}

// Brandt monoid B2 with adjoined identity: 1, e11, e12, e21, e22, 0
inline FiniteMonoid brandt_b2() {
  auto row = [](std::uint32_t i, std::uint32_t j) {
    return std::pair<std::uint32_t, std::uint32_t>{i, j};
  };
  std::pair<std::uint32_t, std::uint32_t> units[4] = {row(1, 1), row(1, 2),
                                                      row(2, 1), row(2, 2)};
  auto mul = [&](std::uint32_t x, std::uint32_t y) -> std::uint32_t {
    if (x == 0) return y;
    if (y == 0) return x;
    if (x == 5 || y == 5) return 5;
    auto [i, j] = units[x - 1];
    auto [k, l] = units[y - 1];
    if (j != k) return 5;
    for (std::uint32_t t = 0; t < 4; ++t) {
      if (units[t] == row(i, l)) return t + 1;
    }
    return 5;
  };
  std::vector<std::uint32_t> table(36);
  for (std::uint32_t i = 0; i < 6; ++i) {
    for (std::uint32_t j = 0; j < 6; ++j) table[i * 6 + j] = mul(i, j);
  }
  return FiniteMonoid(table, 0, Alphabet("ab"), {2, 3},
                      {"1", "e11", "e12", "e21", "e22", "0"});
}

// ---------------------------------------------------------------------------
// enumeration oracles

inline void enum_reduced_rec(const Alphabet& alphabet, std::size_t maxlen,
                             std::vector<LetterCode>& current,
                             std::vector<ReducedWord>& out) {
  out.push_back(ReducedWord::checked(Word(alphabet, current)));
  if (current.size() == maxlen) return;
  for (LetterCode c = 0; c < alphabet.num_codes(); ++c) {
    if (!current.empty() && current.back() == inverse_code(c)) continue;
    current.push_back(c);
    enum_reduced_rec(alphabet, maxlen, current, out);
    current.pop_back();
  }
}

/// All freely reduced words of length ≤ maxlen.
inline std::vector<ReducedWord> reduced_words_up_to(const Alphabet& alphabet,
                                                    std::size_t maxlen) {
  std::vector<ReducedWord> out;
  std::vector<LetterCode> current;
  enum_reduced_rec(alphabet, maxlen, current, out);
  return out;
}

/// Brute-force subgroup closure: products of generators and inverses whose
/// reduced length never exceeds the slack bound; every returned word lies in
/// ⟨gens⟩ and has length ≤ maxlen.
inline std::set<ReducedWord> brute_subgroup_closure(
    const Alphabet& alphabet, const std::vector<ReducedWord>& gens,
    std::size_t maxlen) {
  std::size_t slack = maxlen;
  for (const auto& g : gens) slack = std::max(slack, maxlen + g.size());
  std::set<ReducedWord> seen;
  std::vector<ReducedWord> frontier{ReducedWord(alphabet)};
  seen.insert(frontier.front());
  while (!frontier.empty()) {
    ReducedWord cur = frontier.back();
    frontier.pop_back();
    for (const ReducedWord& g : gens) {
      for (const ReducedWord& step : {g, invert(g)}) {
        ReducedWord next = multiply(cur, step);
        if (next.size() > slack) continue;
        if (seen.insert(next).second) frontier.push_back(next);
      }
    }
  }
  std::set<ReducedWord> out;
  for (const ReducedWord& x : seen) {
    if (x.size() <= maxlen) out.insert(x);
  }
  return out;
}

/// Words of length ≤ maxlen accepted literally by the automaton.
inline std::vector<Word> accepted_words_up_to(const WordAutomaton& a,
                                              std::size_t maxlen) {
  std::vector<std::vector<std::pair<LetterCode, State>>> out_edges(a.num_states());
  for (const Edge& e : a.edges()) out_edges[e.src].emplace_back(e.label, e.dst);
  std::vector<char> is_final(a.num_states(), 0);
  for (State f : a.finals()) is_final[f] = 1;

  std::vector<Word> result;
  std::vector<LetterCode> current;
  auto rec = [&](auto&& self, const std::vector<State>& states) -> void {
    for (State s : states) {
      if (is_final[s]) {
        result.push_back(Word(a.alphabet(), current));
        break;
      }
    }
    if (current.size() == maxlen) return;
    for (LetterCode c = 0; c < a.alphabet().num_codes(); ++c) {
      std::vector<State> next;
      for (State s : states) {
        for (auto [label, dst] : out_edges[s]) {
          if (label == c) next.push_back(dst);
        }
      }
      std::sort(next.begin(), next.end());
      next.erase(std::unique(next.begin(), next.end()), next.end());
      if (next.empty()) continue;
      current.push_back(c);
      self(self, next);
      current.pop_back();
    }
  };
  std::vector<State> initials = a.initials();
  std::sort(initials.begin(), initials.end());
  if (!initials.empty()) rec(rec, initials);
  return result;
}

// ---------------------------------------------------------------------------
// random generators (seeded, deterministic per platform)

inline ReducedWord random_reduced_word(std::mt19937& rng,
                                       const Alphabet& alphabet,
                                       std::size_t maxlen,
                                       std::size_t minlen = 0) {
  std::uniform_int_distribution<std::size_t> len_dist(minlen, maxlen);
  std::size_t len = len_dist(rng);
  std::vector<LetterCode> letters;
  for (std::size_t i = 0; i < len; ++i) {
    std::uniform_int_distribution<LetterCode> code_dist(
        0, static_cast<LetterCode>(alphabet.num_codes() - 1));
    LetterCode c = code_dist(rng);
    if (!letters.empty() && letters.back() == inverse_code(c)) {
      c = inverse_code(c);  // flip instead of cancelling
    }
    letters.push_back(c);
  }
  return ReducedWord::checked(Word(alphabet, std::move(letters)));
}

inline Subgroup random_subgroup(std::mt19937& rng, const Alphabet& alphabet,
                                std::size_t max_rank, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> count_dist(1, max_rank);
  std::vector<ReducedWord> gens;
  std::size_t count = count_dist(rng);
  for (std::size_t i = 0; i < count; ++i) {
    gens.push_back(random_reduced_word(rng, alphabet, max_len, 1));
  }
  return fold(alphabet, gens);
}

inline RationalExpression random_expression(std::mt19937& rng,
                                            const Alphabet& alphabet,
                                            std::size_t depth) {
  std::uniform_int_distribution<int> kind_dist(0, depth == 0 ? 1 : 5);
  switch (kind_dist(rng)) {
    case 0:
      return RationalExpression::empty(alphabet);
    case 1:
      return RationalExpression::literal(
          random_reduced_word(rng, alphabet, 3));
    case 2:
    case 3:
      return RationalExpression::alt(
          random_expression(rng, alphabet, depth - 1),
          random_expression(rng, alphabet, depth - 1));
    case 4:
      return RationalExpression::seq(
          random_expression(rng, alphabet, depth - 1),
          random_expression(rng, alphabet, depth - 1));
    default:
      return RationalExpression::star(
          random_expression(rng, alphabet, depth - 1));
  }
}

/// Expression whose image is the subgroup itself: star of the basis
/// elements and their inverses.
inline RationalExpression subgroup_expression(const Subgroup& h) {
  std::optional<RationalExpression> inner;
  for (const ReducedWord& b : basis(h)) {
    for (const ReducedWord& lit : {b, invert(b)}) {
      auto piece = RationalExpression::literal(lit);
      inner = inner ? RationalExpression::alt(std::move(*inner), std::move(piece))
                    : std::move(piece);
    }
  }
  if (!inner) inner = RationalExpression::literal(ReducedWord(h.alphabet()));
  return RationalExpression::star(std::move(*inner));
}

/// gcd of the absolute values of all k×k minors, by brute expansion
inline mpz_class minor_gcd(const IntegerMatrix& m, std::size_t k) {
  std::vector<std::size_t> rows(k), cols(k);
  mpz_class acc = 0;

  auto det = [&]() {
    std::vector<std::size_t> perm(k);
    for (std::size_t i = 0; i < k; ++i) perm[i] = i;
    mpz_class result = 0;
    do {
      int sign = 1;
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
          if (perm[i] > perm[j]) sign = -sign;
        }
      }
      mpz_class prod = sign;
      for (std::size_t i = 0; i < k; ++i) prod *= m.at(rows[i], cols[perm[i]]);
      result += prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return result;
  };

  std::function<void(std::size_t, std::size_t)> pick_cols =
      [&](std::size_t idx, std::size_t start) {
        if (idx == k) {
          mpz_class d = det();
          mpz_gcd(acc.get_mpz_t(), acc.get_mpz_t(), d.get_mpz_t());
          return;
        }
        for (std::size_t c = start; c < m.cols(); ++c) {
          cols[idx] = c;
          pick_cols(idx + 1, c + 1);
        }
      };
  std::function<void(std::size_t, std::size_t)> pick_rows =
      [&](std::size_t idx, std::size_t start) {
        if (idx == k) {
          pick_cols(0, 0);
          return;
        }
        for (std::size_t r = start; r < m.rows(); ++r) {
          rows[idx] = r;
          pick_rows(idx + 1, r + 1);
        }
      };
  pick_rows(0, 0);
  return abs(acc);
}

}  // namespace nilclose::test
