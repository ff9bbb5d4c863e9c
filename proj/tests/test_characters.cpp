#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "nvlab/characters.hpp"
#include "nvlab/errors.hpp"

using namespace nvlab;

namespace {
constexpr double kTight = 1e-12;

double abs_err(Complex a, Complex b) { return std::abs(a - b); }
} // namespace

TEST_CASE("modulus construction") {
    CHECK_THROWS_AS(Modulus::make(12), SquarefreeRequired);
    CHECK_THROWS_AS(Modulus::make(45), SquarefreeRequired);
    const auto m = Modulus::make(15);
    CHECK(m->odd_primes == std::vector<std::uint32_t>{3, 5});
    CHECK(m->generators[0] == 2); // least primitive roots
    CHECK(m->generators[1] == 2);
    const auto one = Modulus::make(1);
    CHECK(one->odd_primes.empty());
    const auto even = Modulus::make(6); // allowed, but no primitive characters
    CHECK(even->odd_primes == std::vector<std::uint32_t>{3});
}

TEST_CASE("character values are multiplicative and vanish off units") {
    CharacterSet set = CharacterSet::enumerate(105);
    std::mt19937_64 rng(3);
    for (int t = 0; t < 50; ++t) {
        const auto& chi = set[rng() % set.size()];
        const std::uint64_t m = rng() % 500, n = rng() % 500;
        if (std::gcd(m, std::uint64_t{105}) > 1 || std::gcd(n, std::uint64_t{105}) > 1) {
            if (std::gcd(m * n, std::uint64_t{105}) > 1)
                CHECK(abs_err(chi.value(m * n), {0.0, 0.0}) == 0.0);
            continue;
        }
        CHECK(abs_err(chi.value(m * n), chi.value(m) * chi.value(n)) < kTight);
        CHECK(std::abs(std::abs(chi.value(m)) - 1.0) < kTight);
    }
    // periodicity
    const auto& chi = set[7];
    for (std::uint64_t n = 0; n < 105; ++n)
        CHECK(abs_err(chi.value(n), chi.value(n + 105)) < kTight);
}

TEST_CASE("table path agrees with the dlog path") {
    CharacterSet lazy = CharacterSet::enumerate(1155, 0); // cap 0: no tables
    CHECK_FALSE(lazy[5].has_table());
    DirichletCharacter chi = lazy[5];
    const auto tab = chi.make_table();
    CHECK_FALSE(chi.has_table());
    chi.build_table();
    CHECK(chi.has_table());
    for (std::uint64_t n = 0; n < 1155; ++n) {
        CHECK(abs_err(tab[n], lazy[5].value(n)) == 0.0);
        CHECK(abs_err(chi.value(n), lazy[5].value(n)) == 0.0);
    }
}

TEST_CASE("principal, primitivity, parity bookkeeping at q = 15") {
    CharacterSet set = CharacterSet::enumerate(15);
    REQUIRE(set.size() == 8);
    CHECK(set[set.principal_index()].is_principal());
    std::vector<std::size_t> prim;
    for (std::size_t i = 0; i < set.size(); ++i)
        if (set[i].is_primitive()) prim.push_back(i);
    CHECK(prim == std::vector<std::size_t>{3, 5, 7});
    CHECK(phi_star(set) == 3);
    CHECK(phi_plus(set) == 2);
    // parity via chi(-1) = chi(q-1)
    for (std::size_t i = 0; i < set.size(); ++i) {
        const double sign = set[i].is_even() ? 1.0 : -1.0;
        CHECK(abs_err(set[i].value(14), {sign, 0.0}) < kTight);
    }
}

TEST_CASE("primitive counts factor as prod (p - 2)") {
    CHECK(phi_star(3) == 1);
    CHECK(phi_star(33) == 9);
    CHECK(phi_star(35) == 15);
    CHECK(phi_star(105) == 15);
    CHECK(phi_star(1155) == 135);
    CHECK(phi_plus(15) + /* odd primitives */ 1 == phi_star(15));
    // even square-free moduli have no primitive character
    CHECK(phi_star(6) == 0);
    CHECK(phi_plus(6) == 0);
    // q = 1: the trivial character is primitive and even
    CHECK(phi_star(1) == 1);
    CHECK(phi_plus(1) == 1);
    CHECK_THROWS_AS(phi_star(9), SquarefreeRequired);
}

TEST_CASE("conjugate index is an involution matching conjugate values") {
    CharacterSet set = CharacterSet::enumerate(105);
    for (std::size_t i = 0; i < set.size(); ++i) {
        const std::size_t j = set.conjugate_index(i);
        CHECK(set.conjugate_index(j) == i);
        for (std::uint64_t n : {1ull, 2ull, 11ull, 104ull})
            CHECK(abs_err(set[j].value(n), std::conj(set[i].value(n))) < kTight);
    }
}

TEST_CASE("gauss sums: modulus, conjugation, principal value") {
    for (const std::uint64_t q : {3ull, 5ull, 15ull, 35ull, 105ull}) {
        CharacterSet set = CharacterSet::enumerate(q);
        // principal character: tau = mu(q)
        CHECK(abs_err(gauss_sum(set[0]), {static_cast<double>(mobius(q)), 0.0}) < 1e-9);
        for (std::size_t i = 0; i < set.size(); ++i) {
            if (!set[i].is_primitive()) continue;
            const Complex tau = gauss_sum(set[i]);
            CHECK(std::abs(std::abs(tau) - std::sqrt(static_cast<double>(q))) < 1e-9);
            // tau(conj chi) = chi(-1) conj(tau(chi))
            const Complex sign = set[i].value(q - 1);
            CHECK(abs_err(gauss_sum(set[set.conjugate_index(i)]), sign * std::conj(tau)) < 1e-9);
            const Complex eps = root_number(set[i]);
            CHECK(std::abs(std::abs(eps) - 1.0) < 1e-9);
        }
        CHECK_THROWS_AS(root_number(set[0]), RootNumberUndefined);
    }
}

TEST_CASE("even-primitive orthogonality against the divisor-sum form") {
    CharacterSet set = CharacterSet::enumerate(15);
    // m = n = 1: lhs counts the even primitive characters
    const auto [lhs, rhs] = orthogonality_check(set, 1, 1);
    CHECK(abs_err(lhs, {2.0, 0.0}) < 1e-9);
    CHECK(abs_err(lhs, rhs) < 1e-9);

    std::mt19937_64 rng(77);
    for (const std::uint64_t q : {15ull, 33ull, 105ull}) {
        CharacterSet s = CharacterSet::enumerate(q);
        int done = 0;
        while (done < 60) {
            const std::uint64_t m = 1 + rng() % (3 * q), n = 1 + rng() % (3 * q);
            if (std::gcd(m, q) != 1 || std::gcd(n, q) != 1) continue;
            const auto [l, r] = orthogonality_check(s, m, n);
            CHECK(abs_err(l, r) < 1e-8);
            ++done;
        }
    }
}

TEST_CASE("root-number-twisted sums match the exponential divisor form") {
    CharacterSet set = CharacterSet::enumerate(15);
    const auto [l11, r11] = twisted_sum_check(set, 1, 1);
    CHECK(std::abs(r11 - 1.0514622242) < 1e-9);
    CHECK(abs_err(l11, {r11, 0.0}) < 1e-9);
    const auto [l21, r21] = twisted_sum_check(set, 2, 1);
    CHECK(std::abs(r21 - (-1.70130161670408)) < 1e-9);
    CHECK(abs_err(l21, {r21, 0.0}) < 1e-9);
    const auto [l42, r42] = twisted_sum_check(set, 4, 2);
    CHECK(std::abs(r42 - (-1.70130161670408)) < 1e-9);
    CHECK(abs_err(l42, {r42, 0.0}) < 1e-9);
    const auto [l81, r81] = twisted_sum_check(set, 8, 1);
    CHECK(std::abs(r81 - 1.70130161670408) < 1e-9);
    CHECK(abs_err(l81, {r81, 0.0}) < 1e-9);

    std::mt19937_64 rng(78);
    for (const std::uint64_t q : {15ull, 35ull, 105ull}) {
        CharacterSet s = CharacterSet::enumerate(q);
        int done = 0;
        while (done < 60) {
            const std::uint64_t m = 1 + rng() % (2 * q), n = 1 + rng() % (2 * q);
            if (std::gcd(m, q) != 1 || std::gcd(n, q) != 1) continue;
            const auto [l, r] = twisted_sum_check(s, m, n);
            CHECK(std::abs(l.imag()) < 1e-8);
            CHECK(std::abs(l.real() - r) < 1e-8);
            ++done;
        }
    }
}
