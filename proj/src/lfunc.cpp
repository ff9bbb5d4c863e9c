#include "nvlab/lfunc.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>

namespace nvlab {

namespace {

constexpr double kPi = std::numbers::pi;

// B_{2j}/(2j)! for 2j = 2..12.
constexpr double kBernoulliOverFact[6] = {
    1.0 / 12.0,           -1.0 / 720.0,          1.0 / 30240.0,
    -1.0 / 1209600.0,     1.0 / 47900160.0,      -691.0 / 1307674368000.0,
};

} // namespace

double hurwitz_zeta(double s, double a, int direct_terms) {
    if (!(a > 0.0)) throw UsageError("hurwitz_zeta: a must be positive");
    if (s == 1.0) throw UsageError("hurwitz_zeta: s = 1 is the pole");
    if (direct_terms < 2) throw UsageError("hurwitz_zeta: too few direct terms");

    const int N = direct_terms;
    double sum = 0.0;
    for (int k = 0; k < N; ++k) sum += std::pow(a + k, -s);
    const double x = a + N;
    sum += std::pow(x, 1.0 - s) / (s - 1.0);
    sum += 0.5 * std::pow(x, -s);

    // Bernoulli corrections: term_j = B_{2j}/(2j)! * (s)_{2j-1} * x^{-s-2j+1}.
    double rising = s;          // (s)_1
    double power = std::pow(x, -s - 1.0);
    double prev_mag = std::numeric_limits<double>::infinity();
    for (int j = 1; j <= 6; ++j) {
        const double term = kBernoulliOverFact[j - 1] * rising * power;
        const double mag = std::fabs(term);
        if (mag > prev_mag)
            throw NonConvergence("hurwitz_zeta: corrections not decreasing at s=" +
                                 std::to_string(s) + ", a=" + std::to_string(a));
        sum += term;
        prev_mag = mag;
        rising *= (s + 2.0 * j - 1.0) * (s + 2.0 * j);
        power /= x * x;
    }
    return sum;
}

double regularized_gamma_q(double s, double x) {
    if (!(s > 0.0) || x < 0.0) throw UsageError("regularized_gamma_q: need s > 0, x >= 0");
    if (x == 0.0) return 1.0;
    const double lg = std::lgamma(s);
    const double prefix = std::exp(-x + s * std::log(x) - lg);
    if (x < s + 1.0) {
        // Lower series: P(s,x) = prefix * sum_{n>=0} x^n / (s(s+1)...(s+n)).
        double term = 1.0 / s, sum = term;
        for (int n = 1; n < 600; ++n) {
            term *= x / (s + n);
            sum += term;
            if (std::fabs(term) < std::fabs(sum) * 1e-17) return 1.0 - prefix * sum;
        }
        throw NonConvergence("regularized_gamma_q: series stalled");
    }
    // Modified Lentz continued fraction for Q(s,x).
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - s, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i < 600; ++i) {
        const double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) return prefix * h;
    }
    throw NonConvergence("regularized_gamma_q: continued fraction stalled");
}

HurwitzTable HurwitzTable::make(std::uint64_t q) {
    HurwitzTable t;
    t.q = q;
    t.zeta_half.resize(q);
    for (std::uint64_t a = 1; a <= q; ++a)
        t.zeta_half[a - 1] = hurwitz_zeta(0.5, static_cast<double>(a) / static_cast<double>(q));
    return t;
}

AfeContext AfeContext::make(std::uint64_t q, int parity_a) {
    if (parity_a != 0 && parity_a != 1) throw UsageError("parity must be 0 or 1");
    AfeContext ctx;
    ctx.q = q;
    ctx.parity_a = parity_a;
    const double qd = static_cast<double>(q);
    const std::uint64_t nmax =
        static_cast<std::uint64_t>(std::ceil(10.0 * std::sqrt(qd) * std::log(qd)));
    const double s = 0.5 * parity_a + 0.25;
    ctx.v.resize(nmax);
    for (std::uint64_t n = 1; n <= nmax; ++n) {
        const double arg = kPi * static_cast<double>(n) * static_cast<double>(n) / qd;
        // Q underflows to 0 far in the tail; that is the correct limit.
        ctx.v[n - 1] = arg > 700.0 ? 0.0 : regularized_gamma_q(s, arg);
    }
    return ctx;
}

LValue l_value_hurwitz(const DirichletCharacter& chi, std::uint32_t char_index,
                       const HurwitzTable* shared) {
    if (chi.is_principal()) throw UsageError("l_value_hurwitz: principal character");
    const std::uint64_t q = chi.q();
    HurwitzTable local;
    if (!shared || shared->q != q) {
        local = HurwitzTable::make(q);
        shared = &local;
    }
    Complex sum{0.0, 0.0};
    for (std::uint64_t a = 1; a <= q; ++a) {
        const Complex cv = chi.value(a);
        if (cv == Complex{0.0, 0.0}) continue;
        sum += cv * shared->zeta_half[a - 1];
    }
    LValue out;
    out.q = q;
    out.char_index = char_index;
    out.method = LMethod::hurwitz;
    out.value = sum / std::sqrt(static_cast<double>(q));
    out.est_error = static_cast<double>(q) * 1e-12;
    return out;
}

LValue l_value_afe(const DirichletCharacter& chi, std::uint32_t char_index,
                   const AfeContext* shared) {
    if (!chi.is_primitive())
        throw RootNumberUndefined("l_value_afe: primitive character required");
    const std::uint64_t q = chi.q();
    const int a = chi.is_even() ? 0 : 1;
    AfeContext local;
    if (!shared || shared->q != q || shared->parity_a != a) {
        local = AfeContext::make(q, a);
        shared = &local;
    }
    Complex s1{0.0, 0.0}, s2{0.0, 0.0};
    const std::uint64_t nmax = shared->v.size();
    for (std::uint64_t n = 1; n <= nmax; ++n) {
        const Complex cv = chi.value(n);
        if (cv == Complex{0.0, 0.0}) continue;
        const double w = shared->v[n - 1] / std::sqrt(static_cast<double>(n));
        if (w == 0.0) break; // V is decreasing; the tail is identically 0
        s1 += cv * w;
        s2 += std::conj(cv) * w;
    }
    const Complex i_pow_a = a == 0 ? Complex{1.0, 0.0} : Complex{0.0, 1.0};
    const Complex W = root_number(chi) / i_pow_a;
    LValue out;
    out.q = q;
    out.char_index = char_index;
    out.method = LMethod::afe;
    out.value = s1 + W * s2;
    out.est_error = 1e-12 + (std::abs(s1) + std::abs(s2)) * 1e-14;
    return out;
}

double SmoothCutoff::operator()(double x) const {
    switch (kind) {
        case CutoffKind::gamma_afe: {
            if (x < 0.0) throw UsageError("cutoff argument must be >= 0");
            const double s = 0.5 * parity_a + 0.25;
            const double arg = kPi * x * x;
            return arg > 700.0 ? 0.0 : regularized_gamma_q(s, arg);
        }
        case CutoffKind::exp_decay:
            return std::exp(-x);
        case CutoffKind::bump:
            return DyadicPartition::bump(x);
    }
    throw UsageError("unknown cutoff kind");
}

double DyadicPartition::smooth_step(double x) {
    if (x <= 1.0) return 1.0;
    if (x >= 2.0) return 0.0;
    const double num = std::exp(-1.0 / (2.0 - x));
    const double den = num + std::exp(-1.0 / (x - 1.0));
    return num / den;
}

double DyadicPartition::bump(double x) {
    if (x <= 0.0) return 0.0;
    return smooth_step(x) - smooth_step(2.0 * x);
}

double DyadicPartition::partition_sum(double x) const {
    if (!(x > 0.0)) throw UsageError("partition_sum: x must be positive");
    double s = 0.0;
    for (int j = -levels; j <= levels; ++j) s += bump(std::ldexp(x, -j));
    return s;
}

namespace {

// Adaptive Simpson on complex integrands with oscillation-aware panels.
struct Quadrature {
    const std::function<Complex(double)>& f;
    double tol;
    int max_depth = 48;

    Complex refine(double a, double b, Complex fa, Complex fm, Complex fb, Complex whole,
                   double tol_here, int depth, double& err_acc) const {
        const double m = 0.5 * (a + b);
        const Complex fl = f(0.5 * (a + m)), fr = f(0.5 * (m + b));
        const Complex left = (m - a) / 6.0 * (fa + 4.0 * fl + fm);
        const Complex right = (b - m) / 6.0 * (fm + 4.0 * fr + fb);
        const Complex diff = left + right - whole;
        if (std::abs(diff) <= 15.0 * tol_here || depth >= max_depth) {
            if (depth >= max_depth && std::abs(diff) > 15.0 * tol_here)
                throw NonConvergence("quadrature: depth exhausted");
            err_acc += std::abs(diff) / 15.0;
            return left + right + diff / 15.0;
        }
        return refine(a, m, fa, fl, fm, left, 0.5 * tol_here, depth + 1, err_acc) +
               refine(m, b, fm, fr, fb, right, 0.5 * tol_here, depth + 1, err_acc);
    }

    Complex run(double a, double b, int panels, double& err_out) const {
        panels = std::max(panels, 1);
        Complex total{0.0, 0.0};
        double err = 0.0;
        const double h = (b - a) / panels;
        for (int i = 0; i < panels; ++i) {
            const double pa = a + i * h, pb = a + (i + 1) * h, pm = 0.5 * (pa + pb);
            const Complex fa = f(pa), fm = f(pm), fb = f(pb);
            const Complex whole = (pb - pa) / 6.0 * (fa + 4.0 * fm + fb);
            total += refine(pa, pb, fa, fm, fb, whole, tol / panels, 0, err);
        }
        err_out = err;
        return total;
    }
};

} // namespace

double poisson_progression_check(double N, std::uint64_t c, std::uint64_t a, double scale) {
    if (!(N >= 2.0)) throw UsageError("poisson check: N must be >= 2");
    if (c == 0 || a >= c) throw UsageError("poisson check: need 0 <= a < c");
    const auto g = [N, scale](double x) {
        if (x <= 0.0) return 0.0;
        const double phi = DyadicPartition::bump(x / N);
        if (phi == 0.0) return 0.0;
        return phi * std::exp(-x * scale) / std::sqrt(x);
    };

    // Progression side: support is [N/2, 2N].
    double lhs = 0.0;
    const std::uint64_t lo = static_cast<std::uint64_t>(std::max(1.0, std::floor(N / 2.0)));
    const std::uint64_t hi = static_cast<std::uint64_t>(std::ceil(2.0 * N)) + 1;
    for (std::uint64_t n = lo; n <= hi; ++n)
        if (n % c == a) lhs += g(static_cast<double>(n));

    // Spectral side. ghat(xi) = int g(x) e(-xi x) dx; g real, so the h and
    // -h terms pair into 2 Re[ ghat(h/c) e(ah/c) ].
    const double x0 = N / 2.0, x1 = 2.0 * N;
    const auto ghat = [&](double xi) {
        const std::function<Complex(double)> f = [&](double x) {
            const double ang = -2.0 * kPi * xi * x;
            return g(x) * Complex{std::cos(ang), std::sin(ang)};
        };
        Quadrature quad{f, 1e-11};
        const int oscillations = static_cast<int>(std::ceil(std::fabs(xi) * (x1 - x0)));
        double err = 0.0;
        return quad.run(x0, x1, std::max(8, 4 * oscillations), err);
    };

    double rhs = ghat(0.0).real();
    const double cd = static_cast<double>(c);
    const std::uint64_t h_min = static_cast<std::uint64_t>(std::ceil(8.0 * cd / N)) + 4;
    int consecutive_small = 0;
    for (std::uint64_t h = 1; h <= 200000; ++h) {
        const Complex gh = ghat(static_cast<double>(h) / cd);
        const double ang = 2.0 * kPi * static_cast<double>((a * (h % c)) % c) / cd;
        rhs += 2.0 * (gh * Complex{std::cos(ang), std::sin(ang)}).real();
        if (std::abs(gh) < 1e-13 * cd)
            ++consecutive_small;
        else
            consecutive_small = 0;
        if (h >= h_min && consecutive_small >= 6) break;
        if (h == 200000)
            throw NonConvergence("poisson check: spectral tail did not settle");
    }
    rhs /= cd;
    return std::fabs(lhs - rhs);
}

double gaussian_theta_residual(double t) {
    if (!(t > 0.0)) throw UsageError("theta residual: t must be positive");
    double lhs = 1.0, rhs = 1.0;
    for (int n = 1; n <= 60; ++n) {
        lhs += 2.0 * std::exp(-kPi * n * n / t);
        rhs += 2.0 * std::exp(-kPi * n * n * t);
    }
    return std::fabs(lhs - std::sqrt(t) * rhs);
}

} // namespace nvlab
