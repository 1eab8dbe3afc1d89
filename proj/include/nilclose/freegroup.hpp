#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nilclose/errors.hpp"

namespace nilclose {

/// A signed letter of the doubled alphabet A ∪ A⁻¹, encoded as
/// 2*index + (1 if inverse).  The inverse of a code is code ^ 1.
using LetterCode = unsigned;

constexpr LetterCode make_code(std::size_t index, bool inverse) {
  return static_cast<LetterCode>(2 * index + (inverse ? 1 : 0));
}
constexpr LetterCode inverse_code(LetterCode c) { return c ^ 1u; }
constexpr std::size_t code_index(LetterCode c) { return c >> 1; }
constexpr bool code_is_inverse(LetterCode c) { return (c & 1u) != 0; }

/// Ordered set of generator names.  Text syntax everywhere: a lowercase
/// letter is a generator, the same letter uppercase is its inverse,
/// whitespace is ignored and "1" denotes the empty word.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::string_view letters);

  std::size_t size() const { return letters_.size(); }
  std::size_t num_codes() const { return 2 * letters_.size(); }
  const std::string& letters() const { return letters_; }
  char letter(std::size_t index) const { return letters_.at(index); }

  std::optional<std::size_t> index_of(char letter) const;
  /// Symbol for a code: 'a' for a generator, 'A' for its inverse.
  char code_name(LetterCode c) const;
  /// Code for a symbol, or nullopt if the symbol is not in this alphabet.
  std::optional<LetterCode> code_of(char symbol) const;

  bool operator==(const Alphabet&) const = default;

 private:
  std::string letters_;
};

/// A word over the doubled alphabet, not necessarily freely reduced.
class Word {
 public:
  explicit Word(Alphabet alphabet) : alphabet_(std::move(alphabet)) {}
  Word(Alphabet alphabet, std::vector<LetterCode> letters);

  const Alphabet& alphabet() const { return alphabet_; }
  const std::vector<LetterCode>& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }

  std::string str() const;

  bool operator==(const Word&) const = default;

 private:
  Alphabet alphabet_;
  std::vector<LetterCode> letters_;
};

/// A freely reduced word; the canonical representative of an element of F(A).
class ReducedWord {
 public:
  /// The identity element.
  explicit ReducedWord(Alphabet alphabet) : word_(std::move(alphabet)) {}

  /// Validates that w carries no cancelling pair.
  static ReducedWord checked(Word w);

  const Word& word() const { return word_; }
  const Alphabet& alphabet() const { return word_.alphabet(); }
  const std::vector<LetterCode>& letters() const { return word_.letters(); }
  std::size_t size() const { return word_.size(); }
  bool empty() const { return word_.empty(); }
  std::string str() const { return word_.str(); }

  bool operator==(const ReducedWord&) const = default;
  bool operator<(const ReducedWord& o) const;

 private:
  friend ReducedWord reduce(const Word&);
  struct Unchecked {};
  ReducedWord(Unchecked, Word w) : word_(std::move(w)) {}

  Word word_;
};

/// Free reduction: cancels adjacent x·x⁻¹ pairs until none remain.
/// Idempotent; the result equals w in F(A).
ReducedWord reduce(const Word& w);

/// reduce(u·v).  Throws AlphabetError on mixed alphabets.
ReducedWord multiply(const ReducedWord& u, const ReducedWord& v);

/// The reversed, sign-flipped word; always reduced.
ReducedWord invert(const ReducedWord& u);

/// Parses the text syntax.  Unknown symbols raise AlphabetError.
Word parse_word(const Alphabet& alphabet, std::string_view text);

/// parse then reduce.
ReducedWord parse_reduced(const Alphabet& alphabet, std::string_view text);

void require_same_alphabet(const Alphabet& a, const Alphabet& b,
                           const char* where);

}  // namespace nilclose
