#include "nvlab/characters.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace nvlab {

namespace {

// Least primitive root mod an odd prime p.
std::uint32_t least_primitive_root(std::uint32_t p) {
    const auto fac = factorize(p - 1);
    for (std::uint32_t g = 2; g < p; ++g) {
        bool ok = true;
        for (const auto& [r, e] : fac.primes) {
            // g^((p-1)/r) == 1 would disqualify g.
            std::uint64_t base = g, exp = (p - 1) / r, acc = 1;
            while (exp) {
                if (exp & 1) acc = mul_mod(acc, base, p);
                base = mul_mod(base, base, p);
                exp >>= 1;
            }
            if (acc == 1) {
                ok = false;
                break;
            }
        }
        if (ok) return g;
    }
    throw InvariantError("no primitive root mod " + std::to_string(p));
}

Complex unit_root(double num, double den) {
    const double ang = 2.0 * std::numbers::pi * num / den;
    return {std::cos(ang), std::sin(ang)};
}

} // namespace

std::shared_ptr<const Modulus> Modulus::make(std::uint64_t q) {
    auto m = std::make_shared<Modulus>();
    m->q = q;
    m->fac = factorize(q);
    for (const auto& [p, e] : m->fac.primes) {
        if (e > 1)
            throw SquarefreeRequired("modulus " + std::to_string(q) + " is not square-free");
        if (p == 2) continue;
        m->odd_primes.push_back(static_cast<std::uint32_t>(p));
    }
    for (const std::uint32_t p : m->odd_primes) {
        const std::uint32_t g = least_primitive_root(p);
        m->generators.push_back(g);
        std::vector<std::uint32_t> dl(p, p - 1); // sentinel p-1 at the 0 slot
        std::uint64_t acc = 1;
        for (std::uint32_t k = 0; k < p - 1; ++k) {
            dl[acc] = k;
            acc = mul_mod(acc, g, p);
        }
        if (acc != 1) throw InvariantError("generator order mismatch mod " + std::to_string(p));
        m->dlog.push_back(std::move(dl));
        std::vector<Complex> rt(p - 1);
        for (std::uint32_t j = 0; j < p - 1; ++j) rt[j] = unit_root(j, p - 1);
        m->roots.push_back(std::move(rt));
    }
    return m;
}

DirichletCharacter::DirichletCharacter(std::shared_ptr<const Modulus> mod,
                                       std::vector<std::uint32_t> local)
    : mod_(std::move(mod)), local_(std::move(local)) {
    if (local_.size() != mod_->odd_primes.size())
        throw UsageError("local index count does not match modulus");
    for (std::size_t i = 0; i < local_.size(); ++i)
        if (local_[i] >= mod_->odd_primes[i] - 1)
            throw UsageError("local index out of range");
}

Complex DirichletCharacter::value(std::uint64_t n) const {
    const std::uint64_t q = mod_->q;
    const std::uint64_t r = n % q;
    if (has_table()) return table_[r];
    if (q > 1 && std::gcd(r, q) != 1) return {0.0, 0.0};
    Complex v{1.0, 0.0};
    for (std::size_t i = 0; i < local_.size(); ++i) {
        if (local_[i] == 0) continue;
        const std::uint32_t p = mod_->odd_primes[i];
        const std::uint32_t dl = mod_->dlog[i][r % p];
        const std::uint64_t idx =
            (static_cast<std::uint64_t>(local_[i]) * dl) % (p - 1);
        v *= mod_->roots[i][idx];
    }
    return v;
}

bool DirichletCharacter::is_principal() const {
    for (const auto e : local_)
        if (e != 0) return false;
    return true;
}

bool DirichletCharacter::is_primitive() const {
    // An even part of the modulus forces the local character at 2 to be
    // principal, so nothing mod 2*odd is primitive.
    if (mod_->q % 2 == 0 && mod_->q > 1) return false;
    for (const auto e : local_)
        if (e == 0) return false;
    return true; // q = 1: the trivial character has conductor 1, primitive
}

bool DirichletCharacter::is_even() const {
    // chi(-1) = prod_p (-1)^{e_p} since dlog_p(-1) = (p-1)/2.
    std::uint64_t s = 0;
    for (const auto e : local_) s += e;
    return s % 2 == 0;
}

void DirichletCharacter::build_table() {
    if (has_table()) return;
    table_ = make_table();
}

std::vector<Complex> DirichletCharacter::make_table() const {
    const std::uint64_t q = mod_->q;
    std::vector<Complex> t(q, Complex{0.0, 0.0});
    if (q == 1) {
        t[0] = {1.0, 0.0};
        return t;
    }
    for (std::uint64_t n = 0; n < q; ++n) {
        if (std::gcd(n, q) != 1) continue;
        Complex v{1.0, 0.0};
        for (std::size_t i = 0; i < local_.size(); ++i) {
            if (local_[i] == 0) continue;
            const std::uint32_t p = mod_->odd_primes[i];
            const std::uint32_t dl = mod_->dlog[i][n % p];
            const std::uint64_t idx =
                (static_cast<std::uint64_t>(local_[i]) * dl) % (p - 1);
            v *= mod_->roots[i][idx];
        }
        t[n] = v;
    }
    return t;
}

CharacterSet CharacterSet::enumerate(std::uint64_t q, std::uint64_t table_cap) {
    CharacterSet set;
    set.mod_ = Modulus::make(q);
    std::uint64_t count = 1;
    for (const std::uint32_t p : set.mod_->odd_primes) count *= p - 1;
    set.chars_.reserve(count);
    std::vector<std::uint32_t> local(set.mod_->odd_primes.size(), 0);
    for (std::uint64_t idx = 0; idx < count; ++idx) {
        set.chars_.emplace_back(set.mod_, local);
        // Mixed-radix increment, least-significant (smallest prime) first.
        for (std::size_t i = 0; i < local.size(); ++i) {
            if (++local[i] < set.mod_->odd_primes[i] - 1) break;
            local[i] = 0;
        }
    }
    if (q * count <= table_cap)
        for (auto& chi : set.chars_) chi.build_table();
    return set;
}

std::size_t CharacterSet::conjugate_index(std::size_t i) const {
    const auto& local = chars_.at(i).local_indices();
    std::size_t idx = 0, radix = 1;
    for (std::size_t k = 0; k < local.size(); ++k) {
        const std::uint32_t p = mod_->odd_primes[k];
        const std::uint32_t conj = local[k] == 0 ? 0 : (p - 1) - local[k];
        idx += conj * radix;
        radix *= p - 1;
    }
    return idx;
}

Complex gauss_sum(const DirichletCharacter& chi) {
    const std::uint64_t q = chi.q();
    if (q == 1) return {1.0, 0.0};
    Complex acc{0.0, 0.0};
    // e(a/q) by recurrence, reseeded periodically to stop drift.
    const Complex step = unit_root(1.0, static_cast<double>(q));
    Complex eaq{1.0, 0.0};
    for (std::uint64_t a = 0; a < q; ++a) {
        if ((a & 255) == 0) eaq = unit_root(static_cast<double>(a), static_cast<double>(q));
        acc += chi.value(a) * eaq;
        eaq *= step;
    }
    return acc;
}

Complex root_number(const DirichletCharacter& chi) {
    if (!chi.is_primitive())
        throw RootNumberUndefined("root number needs a primitive character (q = " +
                                  std::to_string(chi.q()) + ")");
    return gauss_sum(chi) / std::sqrt(static_cast<double>(chi.q()));
}

namespace {

std::uint64_t count_primitive(const CharacterSet& set, bool even_only) {
    std::uint64_t n = 0;
    for (std::size_t i = 0; i < set.size(); ++i) {
        const auto& chi = set[i];
        if (!chi.is_primitive()) continue;
        if (even_only && !chi.is_even()) continue;
        ++n;
    }
    return n;
}

std::uint64_t phi_star_product(const Modulus& m) {
    if (m.q == 1) return 1;
    std::uint64_t v = 1;
    bool has_two = false;
    for (const auto& [p, e] : m.fac.primes) {
        if (p == 2) {
            has_two = true;
            continue;
        }
        v *= p - 2;
    }
    return has_two ? 0 : v;
}

} // namespace

std::uint64_t phi_star(const CharacterSet& set) {
    const std::uint64_t by_enum = count_primitive(set, false);
    const std::uint64_t by_product = phi_star_product(set.modulus());
    if (by_enum != by_product)
        throw InvariantError("primitive count mismatch: enumerated " + std::to_string(by_enum) +
                             ", product formula " + std::to_string(by_product));
    return by_enum;
}

std::uint64_t phi_plus(const CharacterSet& set) { return count_primitive(set, true); }

std::uint64_t phi_star(std::uint64_t q) {
    // Counting needs no value tables; skip them regardless of q.
    return phi_star(CharacterSet::enumerate(q, 0));
}

std::uint64_t phi_plus(std::uint64_t q) { return phi_plus(CharacterSet::enumerate(q, 0)); }

std::pair<Complex, Complex> orthogonality_check(const CharacterSet& set, std::uint64_t m,
                                                std::uint64_t n) {
    const std::uint64_t q = set.q();
    if (q > 1 && (std::gcd(m, q) != 1 || std::gcd(n, q) != 1))
        throw UsageError("orthogonality check needs gcd(mn, q) = 1");
    Complex lhs{0.0, 0.0};
    for (std::size_t i = 0; i < set.size(); ++i) {
        const auto& chi = set[i];
        if (!chi.is_primitive() || !chi.is_even()) continue;
        lhs += chi.value(m) * std::conj(chi.value(n));
    }
    double rhs = 0.0;
    const std::uint64_t diff = m >= n ? m - n : n - m;
    const std::uint64_t sum = m + n;
    for (const std::uint64_t c : divisors(q)) {
        const std::uint64_t d = q / c;
        const int mu = mobius(d);
        if (mu == 0) continue;
        const double phic = static_cast<double>(euler_phi(c));
        if (diff % c == 0) rhs += 0.5 * mu * phic;
        if (sum % c == 0) rhs += 0.5 * mu * phic;
    }
    return {lhs, Complex{rhs, 0.0}};
}

std::pair<Complex, double> twisted_sum_check(const CharacterSet& set, std::uint64_t m,
                                             std::uint64_t n) {
    const std::uint64_t q = set.q();
    if (q > 1 && (std::gcd(m, q) != 1 || std::gcd(n, q) != 1))
        throw UsageError("twisted sum check needs gcd(mn, q) = 1");
    Complex lhs{0.0, 0.0};
    for (std::size_t i = 0; i < set.size(); ++i) {
        const auto& chi = set[i];
        if (!chi.is_primitive() || !chi.is_even()) continue;
        lhs += root_number(chi) * chi.value(m) * std::conj(chi.value(n));
    }
    Complex inner{0.0, 0.0};
    for (const std::uint64_t c : divisors(q)) {
        const std::uint64_t d = q / c;
        const std::uint64_t dm = mul_mod(d % c, m % c, c);
        const std::uint64_t binv = inv_mod(static_cast<std::int64_t>(dm), c); // 0 when c = 1
        const double num = static_cast<double>(mul_mod(binv, n % c, c));
        inner += static_cast<double>(euler_phi(c)) *
                 unit_root(num, static_cast<double>(c));
    }
    const double rhs = (inner / std::sqrt(static_cast<double>(q))).real();
    return {lhs, rhs};
}

} // namespace nvlab
