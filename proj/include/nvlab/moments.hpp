#pragma once
// Brute-force mollified moments over primitive characters, the predicted
// main terms, the Cauchy-Schwarz non-vanishing bound, and the census.
//
// Per primitive chi the engine computes L(1/2, chi) by the AFE route (and
// the Hurwitz route where needed), the mollifier pieces, and reduces
//   first  = sum L * M            vs  scope_count
//   second = sum |L M|^2          vs  (1 + 1/(theta1+theta2)) * scope_count
//   sigma_is = sum |L M_IS|^2     vs  (1 + 1/theta1) * scope_count
//   sigma_mv = sum |L M_MV|^2     vs  (1 + 1/theta2) * scope_count
// over the requested parity scope, plus (both parities, as in the
// Cauchy-Schwarz ratio) cs = |sum L M|^2 / (phi_star * sum |L M|^2).
// All reductions are deterministic pairwise sums in character-index order.

#include <complex>
#include <cstdint>
#include <string>

#include "nvlab/cache.hpp"
#include "nvlab/mollifier.hpp"

namespace nvlab {

enum class ParityScope : std::uint8_t { even, odd, all };

ParityScope parse_parity(const std::string& s); // "even" | "odd" | "all"

struct CensusResult {
    double tau0 = 1e-8;
    std::uint64_t total = 0;         // primitive characters
    std::uint64_t nonvanishing = 0;  // both routes above tau0
    std::uint64_t vanishing = 0;     // both routes at or below tau0
    std::uint64_t indeterminate = 0; // routes straddle tau0
    double fraction = 0.0;           // nonvanishing / total
};

struct MomentReport {
    std::uint64_t q = 0;
    MollifierParams params;
    ParityScope scope = ParityScope::even;
    std::uint64_t phi_star_count = 0;
    std::uint64_t phi_plus_count = 0;
    std::uint64_t scope_count = 0;
    Complex first_moment{0.0, 0.0};
    double second_moment = 0.0;
    double predicted_first = 0.0;
    double predicted_second = 0.0;
    double sigma_is = 0.0;
    double sigma_mv = 0.0;
    double cs_bound = 0.0;
    CensusResult census;
    double wall_seconds = 0.0;

    std::string to_csv() const;  // header + one row
    std::string to_json() const;

    // The type's hard invariants; throws InvariantError on violation.
    void check_invariants() const;
};

Complex first_moment(std::uint64_t q, const MollifierParams& params, ParityScope scope,
                     unsigned threads = 0);
double second_moment(std::uint64_t q, const MollifierParams& params, ParityScope scope,
                     unsigned threads = 0);
std::pair<double, double> piece_moments(std::uint64_t q, const MollifierParams& params,
                                        ParityScope scope, unsigned threads = 0);
// Both parities (the full primitive sum). Throws DegenerateDenominator when
// the second moment underflows 1e-300.
double cs_lower_bound(std::uint64_t q, const MollifierParams& params, unsigned threads = 0);
CensusResult nonvanishing_census(std::uint64_t q, double tau0 = 1e-8, unsigned threads = 0);

MomentReport moment_report(std::uint64_t q, const MollifierParams& params, ParityScope scope,
                           unsigned threads = 0, const LValueCache* cache = nullptr);

} // namespace nvlab
