#pragma once
// The unbalanced two-piece mollifier: dampened Moebius coefficients
//   y_m = mu(m) (1 - log m / ((theta - eps) log q)),   m <= q^{theta - eps},
// the pieces
//   M_IS(chi) = sum y_m chi(m)/sqrt(m),
//   M_MV(chi) = conj(eps_chi) sum y_m conj(chi(m))/sqrt(m),
// and the theta-weighted total
//   M = (theta1 M_IS + theta2 M_MV) / (theta1 + theta2).

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "nvlab/characters.hpp"
#include "nvlab/exppair.hpp"

namespace nvlab {

struct MollifierParams {
    double theta1 = 0.275;
    double theta2 = 0.275;
    double eps = 0.02;
    bool enforce_window = false;
    // When enforce_window is set, theta1 + theta2 must lie in
    // (1/2, theta_budget(window_pair)) and each theta_i in (0, 1/2].
    std::optional<ExponentPair> window_pair;

    // Throws ProvisoViolated on violations (including eps >= min theta).
    void validate() const;
};

// q^{theta-eps} truncation length: floor of the real power with a 1e-12
// relative guard so boundary integers are classified stably.
std::uint64_t mollifier_length(std::uint64_t q, double theta, double eps);

// y_m as above; 0 beyond the truncation length. Throws ProvisoViolated for
// eps >= theta, UsageError for q < 3.
double y_coeff(std::uint64_t m, double theta, std::uint64_t q, double eps);

// Precomputed y_m / sqrt(m), shared read-only across characters.
struct MollifierCoeffs {
    std::uint64_t q = 0;
    double theta = 0.0, eps = 0.0;
    std::uint64_t length = 0;
    std::vector<double> y_over_sqrt; // [m-1] = y_m / sqrt(m), m = 1..length
    static MollifierCoeffs make(std::uint64_t q, double theta, double eps);
};

// chi primitive for m_mv/m_total (the root number must exist); the *_with
// variants take precomputed pieces for hot loops.
Complex m_is(const DirichletCharacter& chi, const MollifierParams& params);
Complex m_mv(const DirichletCharacter& chi, const MollifierParams& params);
Complex m_total(const DirichletCharacter& chi, const MollifierParams& params);

Complex m_is_with(const DirichletCharacter& chi, const MollifierCoeffs& c1);
Complex m_mv_with(const DirichletCharacter& chi, const MollifierCoeffs& c2, Complex eps_chi);
Complex m_total_from_pieces(Complex is, Complex mv, const MollifierParams& params);

} // namespace nvlab
