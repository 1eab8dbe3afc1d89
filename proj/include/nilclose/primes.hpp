#pragma once

#include <cstdint>
#include <vector>

namespace nilclose {

/// Deterministic Miller–Rabin for 64-bit integers.
bool is_prime_u64(std::uint64_t n);

/// Sorted distinct prime factors (Pollard rho backed); factor(1) = {}.
std::vector<std::uint64_t> distinct_prime_factors(std::uint64_t n);

}  // namespace nilclose
