#include "nvlab/arith.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace nvlab {

Factorization factorize(std::uint64_t n) {
    if (n == 0) throw UsageError("factorize: n must be positive");
    Factorization f;
    f.n = n;
    for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p) continue;
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        f.primes.emplace_back(p, e);
    }
    if (n > 1) f.primes.emplace_back(n, 1);
    return f;
}

int mobius(std::uint64_t n) {
    const auto f = factorize(n);
    for (const auto& [p, e] : f.primes)
        if (e > 1) return 0;
    return (f.primes.size() % 2) ? -1 : 1;
}

std::uint64_t euler_phi(std::uint64_t n) {
    std::uint64_t r = n;
    for (const auto& [p, e] : factorize(n).primes) r -= r / p;
    return r;
}

std::uint64_t divisor_count(std::uint64_t n) {
    std::uint64_t r = 1;
    for (const auto& [p, e] : factorize(n).primes) r *= e + 1;
    return r;
}

std::uint64_t largest_prime_factor(std::uint64_t n) {
    const auto f = factorize(n);
    return f.primes.empty() ? 1 : f.primes.back().first;
}

bool is_squarefree(std::uint64_t n) {
    if (n == 0) return false;
    for (const auto& [p, e] : factorize(n).primes)
        if (e > 1) return false;
    return true;
}

std::vector<std::uint64_t> divisors(std::uint64_t n) {
    std::vector<std::uint64_t> ds{1};
    for (const auto& [p, e] : factorize(n).primes) {
        const std::size_t base = ds.size();
        std::uint64_t pk = 1;
        for (unsigned k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < base; ++i) ds.push_back(ds[i] * pk);
        }
    }
    std::sort(ds.begin(), ds.end());
    return ds;
}

std::uint64_t inv_mod(std::int64_t a, std::uint64_t m) {
    if (m == 0) throw UsageError("inv_mod: modulus must be positive");
    if (m == 1) return 0;
    std::int64_t mm = static_cast<std::int64_t>(m);
    std::int64_t r = a % mm;
    if (r < 0) r += mm;
    // Extended Euclid on (r, m), tracking only the coefficient of r.
    std::int64_t old_r = r, cur_r = mm, old_s = 1, cur_s = 0;
    while (cur_r != 0) {
        const std::int64_t q = old_r / cur_r;
        old_r -= q * cur_r;
        std::swap(old_r, cur_r);
        old_s -= q * cur_s;
        std::swap(old_s, cur_s);
    }
    if (old_r != 1)
        throw NonInvertible("inv_mod: " + std::to_string(a) + " not invertible mod " +
                            std::to_string(m));
    if (old_s < 0) old_s += mm;
    return static_cast<std::uint64_t>(old_s);
}

std::vector<std::uint64_t> inverse_table(std::uint64_t m) {
    if (m == 0) throw UsageError("inverse_table: modulus must be positive");
    if (m == 1) return {0};
    std::vector<std::uint64_t> t(m, m); // sentinel m = "not a unit"
    // Prime m: the classic O(m) recurrence. Detect primality from the
    // factorization we need anyway.
    const auto f = factorize(m);
    if (f.primes.size() == 1 && f.primes[0].second == 1) {
        t[1] = 1;
        for (std::uint64_t u = 2; u < m; ++u)
            t[u] = m - mul_mod(m / u, t[m % u], m);
        return t;
    }
    for (std::uint64_t u = 1; u < m; ++u) {
        if (std::gcd(u, m) != 1) continue;
        t[u] = inv_mod(static_cast<std::int64_t>(u), m);
    }
    return t;
}

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<__uint128_t>(a) * b) % m);
}

} // namespace nvlab
