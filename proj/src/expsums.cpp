#include "nvlab/expsums.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include <fftw3.h>

#include "nvlab/parallel.hpp"

namespace nvlab {

namespace {

constexpr double kPi = std::numbers::pi;

void require_squarefree(std::uint64_t c, const char* who) {
    if (c == 0 || !is_squarefree(c))
        throw SquarefreeRequired(std::string(who) + ": modulus " + std::to_string(c) +
                                 " must be a positive square-free integer");
}

// e(v/c) for v = 0..c-1.
std::vector<Complex> phase_table(std::uint64_t c) {
    std::vector<Complex> e(c);
    for (std::uint64_t v = 0; v < c; ++v) {
        const double ang = 2.0 * kPi * static_cast<double>(v) / static_cast<double>(c);
        e[v] = {std::cos(ang), std::sin(ang)};
    }
    return e;
}

std::mutex fftw_plan_mutex;

} // namespace

double kloosterman(std::uint64_t a, std::uint64_t c) {
    require_squarefree(c, "kloosterman");
    if (c == 1) return 1.0;
    const auto inv = inverse_table(c);
    const double w = 2.0 * kPi / static_cast<double>(c);
    const std::uint64_t ar = a % c;
    Complex sum{0.0, 0.0};
    for (std::uint64_t u = 1; u < c; ++u) {
        if (inv[u] == c) continue;
        const std::uint64_t v = (ar * u + inv[u]) % c;
        const double ang = w * static_cast<double>(v);
        sum += Complex{std::cos(ang), std::sin(ang)};
    }
    sum /= std::sqrt(static_cast<double>(c));
    if (std::fabs(sum.imag()) > 1e-12)
        throw InvariantError("kloosterman: imaginary residue " + std::to_string(sum.imag()) +
                             " at a=" + std::to_string(a) + ", c=" + std::to_string(c));
    return sum.real();
}

KloostermanTable kloosterman_bulk(std::uint64_t c) {
    require_squarefree(c, "kloosterman_bulk");
    if (c > 1000000) throw TooLarge("kloosterman_bulk: c <= 1e6");
    KloostermanTable t;
    t.c = c;
    if (c == 1) {
        t.values = {1.0};
        return t;
    }
    const auto inv = inverse_table(c);
    std::vector<Complex> in(c, Complex{0.0, 0.0}), out(c);
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lk(fftw_plan_mutex);
        plan = fftw_plan_dft_1d(static_cast<int>(c), reinterpret_cast<fftw_complex*>(in.data()),
                                reinterpret_cast<fftw_complex*>(out.data()), FFTW_BACKWARD,
                                FFTW_ESTIMATE);
    }
    // sqrt(c) Kl2(a;c) = sum_u e(inv(u)/c) e(au/c): a backward DFT of
    // g(u) = e(inv(u)/c) supported on the units.
    const auto e = phase_table(c);
    for (std::uint64_t u = 1; u < c; ++u)
        if (inv[u] != c) in[u] = e[inv[u]];
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lk(fftw_plan_mutex);
        fftw_destroy_plan(plan);
    }
    const double root = std::sqrt(static_cast<double>(c));
    t.values.resize(c);
    for (std::uint64_t a = 0; a < c; ++a) {
        const Complex v = out[a] / root;
        t.max_abs_imag = std::max(t.max_abs_imag, std::fabs(v.imag()));
        t.values[a] = v.real();
    }
    if (t.max_abs_imag > 1e-12)
        throw InvariantError("kloosterman_bulk: imaginary residue " +
                             std::to_string(t.max_abs_imag) + " at c=" + std::to_string(c));
    return t;
}

KloostermanTable kloosterman_table_direct(std::uint64_t c, unsigned threads) {
    require_squarefree(c, "kloosterman_table_direct");
    KloostermanTable t;
    t.c = c;
    if (c == 1) {
        t.values = {1.0};
        return t;
    }
    const auto inv = inverse_table(c);
    const auto e = phase_table(c);
    const double root = std::sqrt(static_cast<double>(c));
    t.values.resize(c);
    std::mutex imag_mutex;
    parallel_for(c, threads, [&](std::size_t b, std::size_t eend) {
        double local_imag = 0.0;
        for (std::size_t a = b; a < eend; ++a) {
            Complex sum{0.0, 0.0};
            for (std::uint64_t u = 1; u < c; ++u) {
                if (inv[u] == c) continue;
                const std::uint64_t v = (static_cast<std::uint64_t>(a) * u + inv[u]) % c;
                sum += e[v];
            }
            sum /= root;
            local_imag = std::max(local_imag, std::fabs(sum.imag()));
            t.values[a] = sum.real();
        }
        std::lock_guard<std::mutex> lk(imag_mutex);
        t.max_abs_imag = std::max(t.max_abs_imag, local_imag);
    });
    if (t.max_abs_imag > 1e-12)
        throw InvariantError("kloosterman_table_direct: imaginary residue " +
                             std::to_string(t.max_abs_imag));
    return t;
}

double weil_check(const KloostermanTable& table) {
    const double tau = static_cast<double>(divisor_count(table.c));
    double worst = 0.0;
    for (std::uint64_t a = 0; a < table.c; ++a) {
        const double g = std::sqrt(static_cast<double>(std::gcd(a, table.c)));
        worst = std::max(worst, std::fabs(table.values[a]) / (tau * g));
    }
    return worst;
}

double crt_check(std::uint64_t a, std::uint64_t c1, std::uint64_t c2) {
    require_squarefree(c1, "crt_check");
    require_squarefree(c2, "crt_check");
    if (std::gcd(c1, c2) != 1) throw UsageError("crt_check: moduli must be coprime");
    const double whole = kloosterman(a % (c1 * c2), c1 * c2);
    const std::uint64_t i2 = inv_mod(static_cast<std::int64_t>(mul_mod(c2 % c1, c2 % c1, c1)), c1);
    const std::uint64_t i1 = inv_mod(static_cast<std::int64_t>(mul_mod(c1 % c2, c1 % c2, c2)), c2);
    const double f1 = kloosterman(mul_mod(i2, a % c1, c1), c1);
    const double f2 = kloosterman(mul_mod(i1, a % c2, c2), c2);
    return std::fabs(whole - f1 * f2);
}

double parseval_deviation(const KloostermanTable& table) {
    const double c = static_cast<double>(table.c);
    double mass = 0.0;
    for (const double v : table.values) mass += c * v * v; // (sqrt(c) Kl)^2
    const double expected = c * static_cast<double>(euler_phi(table.c));
    return std::fabs(mass - expected) / expected;
}

PeriodicWeight PeriodicWeight::ones() {
    PeriodicWeight w;
    w.delta = 1;
    w.values = {Complex{1.0, 0.0}};
    w.sup_norm = 1.0;
    return w;
}

ShortSumScanReport short_sum_scan(std::uint64_t q, std::uint64_t a, const PeriodicWeight& W,
                                  const std::vector<std::uint64_t>& lengths,
                                  std::uint64_t trials, std::uint64_t seed) {
    require_squarefree(q, "short_sum_scan");
    if (q > 100000) throw TooLarge("short_sum_scan: q <= 1e5");
    if (W.values.size() != W.delta || W.delta == 0)
        throw UsageError("short_sum_scan: malformed periodic weight");
    const std::uint64_t period = q * W.delta;
    for (const auto len : lengths)
        if (len >= period)
            throw ProvisoViolated("interval length " + std::to_string(len) +
                                  " must be < q*delta = " + std::to_string(period));

    const KloostermanTable table = kloosterman_bulk(q);
    std::mt19937_64 rng(seed);

    ShortSumScanReport rep;
    rep.q = q;
    rep.a = a;
    rep.delta = W.delta;
    rep.trials = trials;
    rep.seed = seed;
    const std::uint64_t ar = a % q;
    for (const auto len : lengths) {
        ShortSumLengthReport row;
        row.length = len;
        for (std::uint64_t t = 0; t < trials; ++t) {
            const std::uint64_t start = rng() % period;
            Complex s{0.0, 0.0};
            for (std::uint64_t i = 0; i < len; ++i) {
                const std::uint64_t n = start + i;
                s += table.values[mul_mod(ar, n % q, q)] * W.values[n % W.delta];
            }
            row.max_abs = std::max(row.max_abs, std::abs(s));
        }
        const double ld = static_cast<double>(len), qd = static_cast<double>(q);
        const double dd = static_cast<double>(W.delta);
        const double norm_classical = std::sqrt(qd / ld) * std::sqrt(ld) * dd * W.sup_norm;
        const double norm_conjecture = std::sqrt(ld) * W.sup_norm;
        row.max_ratio_classical = row.max_abs / norm_classical;
        row.max_ratio_conjecture = row.max_abs / norm_conjecture;
        rep.per_length.push_back(row);
    }
    return rep;
}

std::string ShortSumScanReport::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "q,a,delta,trials,seed,length,max_abs,max_ratio_classical,max_ratio_conjecture\n";
    for (const auto& row : per_length)
        os << q << ',' << a << ',' << delta << ',' << trials << ',' << seed << ',' << row.length
           << ',' << row.max_abs << ',' << row.max_ratio_classical << ','
           << row.max_ratio_conjecture << '\n';
    return os.str();
}

BilinearResult bilinear_form(std::span<const Complex> alpha, std::span<const Complex> beta,
                             std::uint64_t M, std::uint64_t N, std::uint64_t q, std::uint64_t a,
                             const PeriodicWeight& W, const ExponentPair& pair) {
    require_squarefree(q, "bilinear_form");
    if (alpha.size() != M || beta.size() != N)
        throw UsageError("bilinear_form: alpha must have M entries, beta N");
    if (M * N > 10000000) throw TooLarge("bilinear_form: M*N <= 1e7");
    const KloostermanTable table = kloosterman_bulk(q);
    const auto inv = inverse_table(q);

    std::vector<Complex> inner(M, Complex{0.0, 0.0});
    const std::uint64_t ar = a % q;
    for (std::uint64_t mi = 0; mi < M; ++mi) {
        const std::uint64_t m = M + 1 + mi;
        if (q > 1 && inv[m % q] == q) continue; // gcd(m, q) > 1 zeroed
        const std::uint64_t minv = q == 1 ? 0 : inv[m % q];
        Complex row{0.0, 0.0};
        for (std::uint64_t ni = 0; ni < N; ++ni) {
            const std::uint64_t n = N + 1 + ni;
            if (q > 1 && std::gcd(n % q, q) != 1) continue;
            const std::uint64_t r = mul_mod(minv, n % q, q); // m^{-1} n mod q
            row += beta[ni] * table.values[mul_mod(ar, r, q)] * W.values[r % W.delta];
        }
        inner[mi] = alpha[mi] * row;
    }
    BilinearResult res;
    res.value = pairwise_sum(std::move(inner));

    double a2 = 0.0, b2 = 0.0;
    for (const auto& v : alpha) a2 += std::norm(v);
    for (const auto& v : beta) b2 += std::norm(v);
    const double k = to_double(pair.kappa), l = to_double(pair.lambda), nu = to_double(pair.nu);
    const double qd = static_cast<double>(q), Md = static_cast<double>(M),
                 Nd = static_cast<double>(N), dd = static_cast<double>(W.delta);
    const double envelope = std::pow(qd, k / 2.0) * std::pow(Nd, -(1.0 - l + k) / 2.0) *
                                std::pow(dd, nu / 2.0) +
                            std::pow(qd, -0.25) + std::pow(Md, -0.5);
    res.bound = std::sqrt(Md * Nd) * std::sqrt(a2) * std::sqrt(b2) * envelope;
    res.bound_ratio = res.bound > 0.0 ? std::abs(res.value) / res.bound : 0.0;
    return res;
}

} // namespace nvlab
