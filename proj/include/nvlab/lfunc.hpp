#pragma once
// Central L-values by two independent routes, plus the smooth-cutoff /
// dyadic-partition / Poisson-summation toolkit used by the progression
// verifier.
//
// Route 1 (hurwitz): L(1/2, chi) = q^{-1/2} sum_{a=1..q} chi(a) zeta(1/2, a/q)
// with Euler-Maclaurin Hurwitz zeta.
//
// Route 2 (afe): the smoothed approximate functional equation at the center,
//   L(1/2, chi) = sum_n chi(n) n^{-1/2} V_a(n/sqrt(q/pi))
//               + W(chi) sum_n conj(chi(n)) n^{-1/2} V_a(n/sqrt(q/pi)),
// where a = 0 for even chi, 1 for odd,
//   V_a(x) = Gamma(a/2 + 1/4, pi x^2) / Gamma(a/2 + 1/4)   (regularized
//            upper incomplete gamma; V_a(0) = 1, rapid decay),
//   W(chi) = tau(chi) / (i^a sqrt(q)),
// and the tails are cut at n <= 10 sqrt(q) log q. Both routes target
// absolute error well under 1e-8 at desk scale; they cross-check each other.

#include <complex>
#include <cstdint>
#include <vector>

#include "nvlab/characters.hpp"

namespace nvlab {

// zeta(s, a) for s < 1 (s != 1 in general), a > 0, by Euler-Maclaurin with
// `direct_terms` initial terms and Bernoulli corrections through B_12. The
// correction terms must shrink monotonically or NonConvergence is thrown.
double hurwitz_zeta(double s, double a, int direct_terms = 50);

// Regularized upper incomplete gamma Q(s, x) = Gamma(s, x)/Gamma(s) for
// s > 0, x >= 0; series for x < s + 1, continued fraction beyond.
double regularized_gamma_q(double s, double x);

enum class LMethod : std::uint8_t { hurwitz = 0, afe = 1 };

struct LValue {
    std::uint64_t q = 0;
    std::uint32_t char_index = 0; // index within CharacterSet::enumerate(q)
    LMethod method = LMethod::hurwitz;
    Complex value{0.0, 0.0};
    double est_error = 0.0;
};

// Shared per-q table of zeta(1/2, a/q), a = 1..q. Building it costs O(q)
// Euler-Maclaurin evaluations and serves every character mod q.
struct HurwitzTable {
    std::uint64_t q = 0;
    std::vector<double> zeta_half; // [a-1] = zeta(1/2, a/q)
    static HurwitzTable make(std::uint64_t q);
};

// Shared per-(q, parity) cutoff table V_a(n / sqrt(q/pi)) for n = 1..nmax
// with nmax = ceil(10 sqrt(q) log q); serves every character of that parity.
struct AfeContext {
    std::uint64_t q = 0;
    int parity_a = 0; // 0 even, 1 odd
    std::vector<double> v; // [n-1] = V_a(n / sqrt(q/pi))
    static AfeContext make(std::uint64_t q, int parity_a);
};

// Primitive chi only (the root number must exist). `shared` may be null, in
// which case the table is built on the fly.
LValue l_value_hurwitz(const DirichletCharacter& chi, std::uint32_t char_index,
                       const HurwitzTable* shared = nullptr);
LValue l_value_afe(const DirichletCharacter& chi, std::uint32_t char_index,
                   const AfeContext* shared = nullptr);

// ---- smooth cutoffs -------------------------------------------------------

enum class CutoffKind : std::uint8_t { gamma_afe, exp_decay, bump };

// A weight V(x) on [0, inf): the AFE gamma cutoff (parameter a), exp(-x),
// or the compactly supported dyadic bump.
struct SmoothCutoff {
    CutoffKind kind = CutoffKind::exp_decay;
    int parity_a = 0; // only for gamma_afe
    double operator()(double x) const;
};

// C^infty partition of unity from the glue s(t) = exp(-1/t):
//   u(x) = 1 for x <= 1, 0 for x >= 2, s(2-x)/(s(2-x)+s(x-1)) between;
//   Phi(x) = u(x) - u(2x), supported on [1/2, 2], Phi >= 0;
//   sum_{|j| <= J} Phi(x / 2^j) telescopes to 1 on [2^{1-J}, 2^{J-1}].
struct DyadicPartition {
    int levels; // J
    static double smooth_step(double x); // u
    static double bump(double x);        // Phi
    double partition_sum(double x) const;
};

// Residual of Poisson summation over the progression n = a (mod c) for the
// test function g(x) = x^{-1/2} Phi(x/N) exp(-x * scale):
//   | sum_{n = a (c)} g(n)  -  (1/c) sum_{|h| <= H} ghat(h/c) e(ah/c) |
// with ghat evaluated by adaptive quadrature (target 1e-10) and H extended
// until the spectral tail is negligible. Throws NonConvergence if the
// quadrature cannot reach tolerance.
double poisson_progression_check(double N, std::uint64_t c, std::uint64_t a, double scale);

// Self-duality residual of the Gaussian theta function at the reflection
// point: |theta(1) - theta(1)| literal form is trivial, so the diagnostic
// compares sum_n exp(-pi n^2 / t) against sqrt(t) sum_n exp(-pi n^2 t) at
// t = 2 and returns the absolute difference.
double gaussian_theta_residual(double t = 2.0);

} // namespace nvlab
