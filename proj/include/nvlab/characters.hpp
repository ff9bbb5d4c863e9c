#pragma once
// Dirichlet characters to square-free modulus q, built by CRT from the odd
// prime factors. Each odd prime p gets a fixed generator (least primitive
// root) and a discrete-log table; a character is the vector of local
// exponents e_p in [0, p-1), with
//
//   chi(n) = prod_p e( e_p * dlog_p(n) / (p-1) ),   gcd(n, q) = 1.
//
// chi is primitive iff every e_p is nonzero (so even q = 2*odd has no
// primitive characters at all), and even iff sum_p e_p is even.
//
// Value tables are cached per character only while q * phi(q) stays small;
// above that cap, chi(n) is computed on demand from the dlog tables and
// workers can request a private table for hot loops.

#include <complex>
#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "nvlab/arith.hpp"

namespace nvlab {

using Complex = std::complex<double>;

// Shared per-q structure: factorization, generators, dlog tables, and the
// (p-1)-th roots of unity for each odd prime factor.
struct Modulus {
    std::uint64_t q = 1;
    Factorization fac;
    std::vector<std::uint32_t> odd_primes;
    std::vector<std::uint32_t> generators; // least primitive root per odd prime
    // dlog[i][n % p] = discrete log base generators[i], with an out-of-range
    // sentinel (p-1 is never a valid dlog of a unit... the table stores p-1
    // entries; index 0 holds the sentinel value p-1).
    std::vector<std::vector<std::uint32_t>> dlog;
    // roots[i][j] = e(j / (p_i - 1)).
    std::vector<std::vector<Complex>> roots;

    // Throws SquarefreeRequired when q is not square-free. q = 1 and even
    // square-free q are both allowed (the latter simply has no primitive
    // characters).
    static std::shared_ptr<const Modulus> make(std::uint64_t q);
};

class DirichletCharacter {
  public:
    DirichletCharacter(std::shared_ptr<const Modulus> mod, std::vector<std::uint32_t> local);

    std::uint64_t q() const { return mod_->q; }
    const Modulus& modulus() const { return *mod_; }
    const std::vector<std::uint32_t>& local_indices() const { return local_; }

    // chi(n); 0 when gcd(n, q) > 1. Uses the cached table when present.
    Complex value(std::uint64_t n) const;

    bool is_principal() const;
    bool is_primitive() const; // every local index nonzero, and q odd
    bool is_even() const;      // chi(-1) = +1

    bool has_table() const { return !table_.empty(); }
    void build_table();                       // fills the cache in place
    std::vector<Complex> make_table() const;  // caller-owned copy, cache untouched

  private:
    std::shared_ptr<const Modulus> mod_;
    std::vector<std::uint32_t> local_;
    std::vector<Complex> table_; // size q when built
};

class CharacterSet {
  public:
    // All phi(q) characters mod q, indexed by mixed radix over the odd prime
    // factors (ascending primes, least-significant first): index 0 is the
    // principal character. Value tables are pre-built only when
    // q * phi(q) <= table_cap (default keeps the footprint ~100 MB).
    static CharacterSet enumerate(std::uint64_t q,
                                  std::uint64_t table_cap = std::uint64_t(1) << 23);

    std::uint64_t q() const { return mod_->q; }
    const Modulus& modulus() const { return *mod_; }
    std::size_t size() const { return chars_.size(); }
    const DirichletCharacter& operator[](std::size_t i) const { return chars_[i]; }
    DirichletCharacter& operator[](std::size_t i) { return chars_[i]; }

    std::size_t principal_index() const { return 0; }
    // Index of the complex conjugate character.
    std::size_t conjugate_index(std::size_t i) const;

  private:
    std::shared_ptr<const Modulus> mod_;
    std::vector<DirichletCharacter> chars_;
};

// tau(chi) = sum_{a mod q} chi(a) e(a/q).
Complex gauss_sum(const DirichletCharacter& chi);

// tau(chi)/sqrt(q); unit modulus for primitive chi. Throws
// RootNumberUndefined for imprimitive characters.
Complex root_number(const DirichletCharacter& chi);

// Number of primitive characters mod q (enumeration cross-checked against
// prod_{p | q} (p - 2)); throws SquarefreeRequired off the square-free
// domain. phi_plus counts the even primitive ones.
std::uint64_t phi_star(const CharacterSet& set);
std::uint64_t phi_plus(const CharacterSet& set);
std::uint64_t phi_star(std::uint64_t q);
std::uint64_t phi_plus(std::uint64_t q);

// Both sides of the averaged orthogonality identity for gcd(mn, q) = 1:
//   sum_{chi primitive even} chi(m) conj(chi(n))
//     = (1/2) sum_{q = cd} mu(d) [ phi(c) 1{c | m-n} + phi(c) 1{c | m+n} ].
// Returned as (lhs, rhs); both are real up to rounding but kept complex.
std::pair<Complex, Complex> orthogonality_check(const CharacterSet& set, std::uint64_t m,
                                                std::uint64_t n);

// Both sides of the root-number-twisted identity for gcd(mn, q) = 1:
//   sum_{chi primitive even} eps_chi chi(m) conj(chi(n))
//     = Re (1/sqrt(q)) sum_{q = cd} phi(c) e( n * inv(dm, c) / c )
// (the c = 1 divisor contributes phi(1) e(0) = 1 to the inner sum).
// Returned as (lhs, rhs) with rhs real.
std::pair<Complex, double> twisted_sum_check(const CharacterSet& set, std::uint64_t m,
                                             std::uint64_t n);

} // namespace nvlab
