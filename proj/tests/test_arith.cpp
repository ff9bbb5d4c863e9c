#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <random>

#include "nvlab/arith.hpp"
#include "nvlab/errors.hpp"

using namespace nvlab;

TEST_CASE("factorize basic shapes") {
    CHECK(factorize(1).primes.empty());
    const auto f = factorize(1155);
    REQUIRE(f.primes.size() == 4);
    CHECK(f.primes[0] == std::pair<std::uint64_t, unsigned>{3, 1});
    CHECK(f.primes[1] == std::pair<std::uint64_t, unsigned>{5, 1});
    CHECK(f.primes[2] == std::pair<std::uint64_t, unsigned>{7, 1});
    CHECK(f.primes[3] == std::pair<std::uint64_t, unsigned>{11, 1});
    const auto g = factorize(720); // 2^4 3^2 5
    REQUIRE(g.primes.size() == 3);
    CHECK(g.primes[0].second == 4);
    CHECK(g.primes[1].second == 2);
    CHECK_THROWS_AS(factorize(0), UsageError);
}

TEST_CASE("arithmetic functions agree with known values") {
    CHECK(mobius(1) == 1);
    CHECK(mobius(2) == -1);
    CHECK(mobius(4) == 0);
    CHECK(mobius(6) == 1);
    CHECK(mobius(30) == -1);
    CHECK(mobius(1155) == 1);

    CHECK(euler_phi(1) == 1);
    CHECK(euler_phi(15) == 8);
    CHECK(euler_phi(105) == 48);
    CHECK(euler_phi(1155) == 480);

    CHECK(divisor_count(1) == 1);
    CHECK(divisor_count(12) == 6);
    CHECK(divisor_count(1155) == 16);

    CHECK(largest_prime_factor(1) == 1);
    CHECK(largest_prime_factor(2) == 2);
    CHECK(largest_prime_factor(1155) == 11);
    CHECK(largest_prime_factor(1 << 20) == 2);

    CHECK(is_squarefree(1));
    CHECK(is_squarefree(105));
    CHECK_FALSE(is_squarefree(12));
    CHECK_FALSE(is_squarefree(49));
}

TEST_CASE("mobius and phi are multiplicative on coprime splits") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        const std::uint64_t a = 1 + rng() % 500, b = 1 + rng() % 500;
        if (std::gcd(a, b) != 1) continue;
        CHECK(mobius(a * b) == mobius(a) * mobius(b));
        CHECK(euler_phi(a * b) == euler_phi(a) * euler_phi(b));
        CHECK(divisor_count(a * b) == divisor_count(a) * divisor_count(b));
    }
}

TEST_CASE("divisors are ascending, complete, and sum correctly") {
    const auto d = divisors(60);
    CHECK(d == std::vector<std::uint64_t>{1, 2, 3, 4, 5, 6, 10, 12, 15, 20, 30, 60});
    // sigma(60) = 168
    CHECK(std::accumulate(d.begin(), d.end(), std::uint64_t{0}) == 168);
    CHECK(divisors(1) == std::vector<std::uint64_t>{1});
}

TEST_CASE("inv_mod inverts 1000 random coprime pairs") {
    std::mt19937_64 rng(7);
    int done = 0;
    while (done < 1000) {
        const std::uint64_t m = 2 + rng() % 1000000;
        const std::uint64_t a = rng() % m;
        if (std::gcd(a, m) != 1) continue;
        const std::uint64_t inv = inv_mod(static_cast<std::int64_t>(a), m);
        CHECK(inv < m);
        CHECK(mul_mod(a, inv, m) == 1);
        ++done;
    }
}

TEST_CASE("inv_mod edge cases") {
    CHECK(inv_mod(5, 1) == 0);
    CHECK(inv_mod(-1, 7) == 6);      // reduced before inversion
    CHECK(inv_mod(-3, 10) == 3);     // -3 = 7 mod 10, 7*3 = 21 = 1
    CHECK_THROWS_AS(inv_mod(6, 9), NonInvertible);
    CHECK_THROWS_AS(inv_mod(0, 5), NonInvertible);
    CHECK_THROWS_AS(inv_mod(3, 0), UsageError);
}

TEST_CASE("inverse_table marks non-units with the sentinel") {
    CHECK(inverse_table(5) == std::vector<std::uint64_t>{5, 1, 3, 2, 4});
    const auto t = inverse_table(12);
    for (std::uint64_t u = 0; u < 12; ++u) {
        if (std::gcd(u, std::uint64_t{12}) == 1) {
            CHECK(mul_mod(u, t[u], 12) == 1);
        } else {
            CHECK(t[u] == 12);
        }
    }
    // prime path and generic path must agree
    for (const std::uint64_t m : {97u, 98u, 1155u}) {
        const auto tab = inverse_table(m);
        for (std::uint64_t u = 0; u < m; ++u) {
            if (std::gcd(u, m) == 1)
                CHECK(tab[u] == inv_mod(static_cast<std::int64_t>(u), m));
            else
                CHECK(tab[u] == m);
        }
    }
}

TEST_CASE("mul_mod survives 63-bit operands") {
    const std::uint64_t m = (std::uint64_t{1} << 62) + 11;
    const std::uint64_t a = m - 1, b = m - 2;
    // (m-1)(m-2) = 2 mod m
    CHECK(mul_mod(a, b, m) == 2);
    CHECK(mul_mod(0, 123, 7) == 0);
}
