#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nilclose {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A word, automaton or subgroup was used with letters outside its alphabet,
/// or two objects over different alphabets were combined.
struct AlphabetError : Error {
  using Error::Error;
};

/// A *_reduced operation received an automaton without the reduced flag,
/// or an operation mode does not match its arguments.
struct FlagError : Error {
  using Error::Error;
};

/// A configurable resource budget (states, lattice size, homomorphism count)
/// was exceeded.  Callers can retry with larger limits.
struct LimitError : Error {
  using Error::Error;
};

/// Malformed input data: bad word syntax, non-associative table, broken JSON.
struct ValidationError : Error {
  using Error::Error;
};

/// A theory-guaranteed invariant failed at runtime; indicates a bug.
struct InternalError : Error {
  using Error::Error;
};

/// Resource budgets for the potentially explosive steps.
struct Limits {
  std::size_t max_states = 200'000;      // states in any determinization / product
  std::size_t max_overgroups = 100'000;  // size of an overgroup lattice
  std::size_t max_homs = 1'000'000;      // enumerated homomorphisms per group
  std::size_t max_monoid = 4096;         // elements in a direct product
};

/// Process-wide limits, read by the library, written by the CLI at startup.
Limits& limits();

}  // namespace nilclose
