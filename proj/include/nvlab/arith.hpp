#pragma once
// Elementary multiplicative number theory on 64-bit integers: trial-division
// factorization (intended range n <= 1e9 or so), the usual arithmetic
// functions derived from it, and modular inverses singly or in bulk.

#include <cstdint>
#include <utility>
#include <vector>

#include "nvlab/errors.hpp"

namespace nvlab {

struct Factorization {
    std::uint64_t n = 1;
    // (prime, exponent), primes strictly increasing.
    std::vector<std::pair<std::uint64_t, unsigned>> primes;
};

// Trial division. Throws UsageError for n = 0.
Factorization factorize(std::uint64_t n);

int mobius(std::uint64_t n);
std::uint64_t euler_phi(std::uint64_t n);
std::uint64_t divisor_count(std::uint64_t n);
// Largest prime factor; by convention 1 for n = 1.
std::uint64_t largest_prime_factor(std::uint64_t n);
bool is_squarefree(std::uint64_t n);

// All positive divisors, ascending.
std::vector<std::uint64_t> divisors(std::uint64_t n);

// Canonical inverse of a mod m in [0, m); a may be any signed value and is
// reduced first. Throws NonInvertible when gcd(a, m) != 1, UsageError for
// m = 0. inv_mod(anything, 1) = 0.
std::uint64_t inv_mod(std::int64_t a, std::uint64_t m);

// table[u] = inverse of u mod m for units, and the sentinel value m for
// non-units (gcd(u, m) > 1). Index 0 is a unit only when m = 1. O(m) for
// prime m via the sieve recurrence inv[u] = -(m/u) * inv[m % u]; extended
// gcd per unit otherwise.
std::vector<std::uint64_t> inverse_table(std::uint64_t m);

// (a * b) mod m without overflow for m < 2^63.
std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m);

} // namespace nvlab
