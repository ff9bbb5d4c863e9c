#include "nvlab/mollifier.hpp"

#include <cmath>
#include <string>

namespace nvlab {

void MollifierParams::validate() const {
    if (!(theta1 > 0.0 && theta1 < 1.0 && theta2 > 0.0 && theta2 < 1.0))
        throw ProvisoViolated("theta1, theta2 must lie in (0, 1)");
    if (!(eps > 0.0) || eps >= std::min(theta1, theta2))
        throw ProvisoViolated("need 0 < eps < min(theta1, theta2)");
    if (!enforce_window) return;
    if (theta1 > 0.5 || theta2 > 0.5)
        throw ProvisoViolated("window requires theta_i <= 1/2");
    const double sum = theta1 + theta2;
    if (!(sum > 0.5))
        throw ProvisoViolated("window requires theta1 + theta2 > 1/2");
    if (!window_pair)
        throw ProvisoViolated("enforce_window needs an exponent pair");
    const double budget = to_double(theta_budget(*window_pair));
    if (!is_admissible(*window_pair) || !(sum < budget))
        throw ProvisoViolated("theta1 + theta2 = " + std::to_string(sum) +
                              " is not inside the admissible budget " + std::to_string(budget));
}

std::uint64_t mollifier_length(std::uint64_t q, double theta, double eps) {
    if (q < 3) throw UsageError("mollifier: q >= 3 required");
    if (!(eps > 0.0) || eps >= theta) throw ProvisoViolated("need 0 < eps < theta");
    const double raw = std::pow(static_cast<double>(q), theta - eps);
    // Guard against 3.0000000000001-style boundary misclassification.
    return static_cast<std::uint64_t>(std::floor(raw * (1.0 + 1e-12)));
}

double y_coeff(std::uint64_t m, double theta, std::uint64_t q, double eps) {
    if (m == 0) throw UsageError("y_coeff: m >= 1");
    const std::uint64_t len = mollifier_length(q, theta, eps);
    if (m > len) return 0.0;
    const int mu = mobius(m);
    if (mu == 0) return 0.0;
    const double ratio =
        std::log(static_cast<double>(m)) / ((theta - eps) * std::log(static_cast<double>(q)));
    return mu * (1.0 - ratio);
}

MollifierCoeffs MollifierCoeffs::make(std::uint64_t q, double theta, double eps) {
    MollifierCoeffs c;
    c.q = q;
    c.theta = theta;
    c.eps = eps;
    c.length = mollifier_length(q, theta, eps);
    c.y_over_sqrt.resize(c.length);
    for (std::uint64_t m = 1; m <= c.length; ++m)
        c.y_over_sqrt[m - 1] = y_coeff(m, theta, q, eps) / std::sqrt(static_cast<double>(m));
    return c;
}

Complex m_is_with(const DirichletCharacter& chi, const MollifierCoeffs& c1) {
    Complex sum{0.0, 0.0};
    for (std::uint64_t m = 1; m <= c1.length; ++m) {
        const double w = c1.y_over_sqrt[m - 1];
        if (w == 0.0) continue;
        sum += chi.value(m) * w;
    }
    return sum;
}

Complex m_mv_with(const DirichletCharacter& chi, const MollifierCoeffs& c2, Complex eps_chi) {
    Complex sum{0.0, 0.0};
    for (std::uint64_t m = 1; m <= c2.length; ++m) {
        const double w = c2.y_over_sqrt[m - 1];
        if (w == 0.0) continue;
        sum += std::conj(chi.value(m)) * w;
    }
    return std::conj(eps_chi) * sum;
}

Complex m_total_from_pieces(Complex is, Complex mv, const MollifierParams& params) {
    const double den = params.theta1 + params.theta2;
    return (params.theta1 * is + params.theta2 * mv) / den;
}

Complex m_is(const DirichletCharacter& chi, const MollifierParams& params) {
    params.validate();
    return m_is_with(chi, MollifierCoeffs::make(chi.q(), params.theta1, params.eps));
}

Complex m_mv(const DirichletCharacter& chi, const MollifierParams& params) {
    params.validate();
    return m_mv_with(chi, MollifierCoeffs::make(chi.q(), params.theta2, params.eps),
                     root_number(chi));
}

Complex m_total(const DirichletCharacter& chi, const MollifierParams& params) {
    params.validate();
    const Complex is = m_is_with(chi, MollifierCoeffs::make(chi.q(), params.theta1, params.eps));
    const Complex mv = m_mv_with(chi, MollifierCoeffs::make(chi.q(), params.theta2, params.eps),
                                 root_number(chi));
    return m_total_from_pieces(is, mv, params);
}

} // namespace nvlab
