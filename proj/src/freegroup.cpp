#include "nilclose/freegroup.hpp"

#include <algorithm>
#include <cctype>

namespace nilclose {

Limits& limits() {
  static Limits instance;
  return instance;
}

Alphabet::Alphabet(std::string_view letters) : letters_(letters) {
  if (letters_.empty()) {
    throw ValidationError("alphabet must contain at least one letter");
  }
  for (char c : letters_) {
    if (!std::islower(static_cast<unsigned char>(c))) {
      throw ValidationError(std::string("alphabet letter must be lowercase: '") +
                            c + "'");
    }
  }
  auto sorted = letters_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ValidationError("alphabet letters must be distinct: " + letters_);
  }
}

std::optional<std::size_t> Alphabet::index_of(char letter) const {
  auto pos = letters_.find(letter);
  if (pos == std::string::npos) return std::nullopt;
  return pos;
}

char Alphabet::code_name(LetterCode c) const {
  char base = letter(code_index(c));
  return code_is_inverse(c) ? static_cast<char>(std::toupper(base)) : base;
}

std::optional<LetterCode> Alphabet::code_of(char symbol) const {
  bool inverse = std::isupper(static_cast<unsigned char>(symbol)) != 0;
  char base = inverse ? static_cast<char>(std::tolower(symbol)) : symbol;
  auto idx = index_of(base);
  if (!idx) return std::nullopt;
  return make_code(*idx, inverse);
}

Word::Word(Alphabet alphabet, std::vector<LetterCode> letters)
    : alphabet_(std::move(alphabet)), letters_(std::move(letters)) {
  for (LetterCode c : letters_) {
    if (code_index(c) >= alphabet_.size()) {
      throw AlphabetError("letter code out of range for alphabet " +
                          alphabet_.letters());
    }
  }
}

std::string Word::str() const {
  if (letters_.empty()) return "1";
  std::string out;
  out.reserve(letters_.size());
  for (LetterCode c : letters_) out.push_back(alphabet_.code_name(c));
  return out;
}

ReducedWord ReducedWord::checked(Word w) {
  const auto& ls = w.letters();
  for (std::size_t i = 0; i + 1 < ls.size(); ++i) {
    if (ls[i] == inverse_code(ls[i + 1])) {
      throw ValidationError("word is not freely reduced: " + w.str());
    }
  }
  return ReducedWord(Unchecked{}, std::move(w));
}

bool ReducedWord::operator<(const ReducedWord& o) const {
  if (size() != o.size()) return size() < o.size();
  return letters() < o.letters();
}

ReducedWord reduce(const Word& w) {
  std::vector<LetterCode> stack;
  stack.reserve(w.size());
  for (LetterCode c : w.letters()) {
    if (!stack.empty() && stack.back() == inverse_code(c)) {
      stack.pop_back();
    } else {
      stack.push_back(c);
    }
  }
  return ReducedWord(ReducedWord::Unchecked{},
                     Word(w.alphabet(), std::move(stack)));
}

ReducedWord multiply(const ReducedWord& u, const ReducedWord& v) {
  require_same_alphabet(u.alphabet(), v.alphabet(), "multiply");
  std::vector<LetterCode> joined = u.letters();
  joined.insert(joined.end(), v.letters().begin(), v.letters().end());
  return reduce(Word(u.alphabet(), std::move(joined)));
}

ReducedWord invert(const ReducedWord& u) {
  std::vector<LetterCode> out;
  out.reserve(u.size());
  for (auto it = u.letters().rbegin(); it != u.letters().rend(); ++it) {
    out.push_back(inverse_code(*it));
  }
  return ReducedWord::checked(Word(u.alphabet(), std::move(out)));
}

Word parse_word(const Alphabet& alphabet, std::string_view text) {
  std::vector<LetterCode> letters;
  for (char ch : text) {
    if (std::isspace(static_cast<unsigned char>(ch)) || ch == '1') continue;
    auto code = alphabet.code_of(ch);
    if (!code) {
      throw AlphabetError(std::string("unknown letter '") + ch +
                          "' for alphabet " + alphabet.letters());
    }
    letters.push_back(*code);
  }
  return Word(alphabet, std::move(letters));
}

ReducedWord parse_reduced(const Alphabet& alphabet, std::string_view text) {
  return reduce(parse_word(alphabet, text));
}

void require_same_alphabet(const Alphabet& a, const Alphabet& b,
                           const char* where) {
  if (a != b) {
    throw AlphabetError(std::string(where) + ": alphabet mismatch (" +
                        a.letters() + " vs " + b.letters() + ")");
  }
}

}  // namespace nilclose
