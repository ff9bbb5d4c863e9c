#pragma once
// Kloosterman-sum engine for square-free moduli:
//
//   Kl2(a; c) = c^{-1/2} sum_{(u,c)=1} e( (a u + u^{-1}) / c ),
//
// real by the u -> -u symmetry (imaginary residue checked <= 1e-12, then
// discarded). Bulk tables come from one length-c DFT of g(u) = e(u^{-1}/c)
// on units; the direct route stays available as the independent cross-check.
// On top of the tables: the Weil-bound scan, the CRT factorization identity,
// short-interval cancellation scans, and the bilinear-form diagnostic.

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nvlab/arith.hpp"
#include "nvlab/exppair.hpp"

namespace nvlab {

using Complex = std::complex<double>;

struct KloostermanTable {
    std::uint64_t c = 1;
    std::vector<double> values;  // [a] = Kl2(a; c)
    double max_abs_imag = 0.0;   // largest imaginary residue seen before truncation
};

// Direct summation for one shift. Throws SquarefreeRequired.
double kloosterman(std::uint64_t a, std::uint64_t c);

// All shifts via DFT, O(c log c); c <= 1e6. Throws SquarefreeRequired.
KloostermanTable kloosterman_bulk(std::uint64_t c);

// All shifts by direct summation (the slow dual route used to validate the
// bulk path); parallel over a.
KloostermanTable kloosterman_table_direct(std::uint64_t c, unsigned threads = 0);

// max over a of |Kl2(a;c)| / (tau(c) sqrt(gcd(a,c))).
double weil_check(const KloostermanTable& table);

// |Kl2(a; c1 c2) - Kl2(inv(c2^2, c1) a; c1) * Kl2(inv(c1^2, c2) a; c2)|,
// all three factors by direct summation. Rejects non-coprime moduli.
double crt_check(std::uint64_t a, std::uint64_t c1, std::uint64_t c2);

// sum_a (sqrt(c) Kl2(a;c))^2 vs c * phi(c): returns relative deviation.
double parseval_deviation(const KloostermanTable& table);

// A delta-periodic weight tabulated on one period.
struct PeriodicWeight {
    std::uint64_t delta = 1;
    std::vector<Complex> values; // size delta
    double sup_norm = 1.0;

    static PeriodicWeight ones(); // W == 1, delta = 1
    Complex at(std::uint64_t n) const { return values[n % delta]; }
};

// Cancellation scan of S(I) = sum_{n in I} Kl2(a n; q) W(n) over random
// interval starts, for each requested length |I|. Ratios normalize |S| by
// (q/|I|)^kappa |I|^lambda delta^nu ||W||_inf at two exponent triples: the
// classical (1/2, 1/2, 1) and the conjectural (0, 1/2, 0).
struct ShortSumLengthReport {
    std::uint64_t length = 0;
    double max_abs = 0.0;
    double max_ratio_classical = 0.0;
    double max_ratio_conjecture = 0.0;
};

struct ShortSumScanReport {
    std::uint64_t q = 0, a = 1, delta = 1;
    std::uint64_t trials = 0, seed = 0;
    std::vector<ShortSumLengthReport> per_length;
    std::string to_csv() const;
};

// Interval starts are drawn uniformly from [0, q*delta). Each |I| must be
// < q*delta (ProvisoViolated otherwise). q square-free <= 1e5.
ShortSumScanReport short_sum_scan(std::uint64_t q, std::uint64_t a, const PeriodicWeight& W,
                                  const std::vector<std::uint64_t>& lengths,
                                  std::uint64_t trials, std::uint64_t seed);

struct BilinearResult {
    Complex value{0.0, 0.0};
    double bound = 0.0;       // the reference RHS with epsilon-factor 1
    double bound_ratio = 0.0; // |value| / bound
};

// B = sum_{M<m<=2M, (m,q)=1} sum_{N<n<=2N, (n,q)=1} alpha_m beta_n
//       Kl2(a m^{-1} n; q) W(m^{-1} n mod q),
// alpha indexed by m - M - 1, beta by n - N - 1. The reference bound uses
// the exponent triple `pair`:
//   sqrt(MN) ||alpha||_2 ||beta||_2 ( q^{k/2} N^{-(1-l+k)/2} delta^{n/2}
//                                     + q^{-1/4} + M^{-1/2} ).
// Throws TooLarge when M*N > 1e7.
BilinearResult bilinear_form(std::span<const Complex> alpha, std::span<const Complex> beta,
                             std::uint64_t M, std::uint64_t N, std::uint64_t q, std::uint64_t a,
                             const PeriodicWeight& W, const ExponentPair& pair);

} // namespace nvlab
