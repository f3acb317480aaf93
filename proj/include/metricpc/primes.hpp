#pragma once

#include <cstdint>
#include <vector>

namespace metricpc {

// Deterministic Miller-Rabin, exact for every 64-bit n.
bool is_prime_u64(std::uint64_t n);

// All primes in [lo, hi] via a segmented sieve of Eratosthenes.
std::vector<std::uint64_t> primes_in_range(std::uint64_t lo, std::uint64_t hi);

// The first n primes (2, 3, 5, ...).
std::vector<std::uint64_t> first_primes(std::size_t n);

}  // namespace metricpc
