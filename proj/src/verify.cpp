#include "nvlab/verify.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "nvlab/expsums.hpp"
#include "nvlab/lfunc.hpp"
#include "nvlab/moments.hpp"

namespace nvlab {

namespace {

using CheckFn = std::function<std::string()>; // returns "" on pass, reason on fail

struct NamedCheck {
    const char* name;
    bool quick;
    CheckFn fn;
};

std::string expair_checks() {
    // The chain behind the headline proportion, kept exact end to end.
    const Word w = Word::parse("B A B A^2 B A^3 B");
    const ExponentPair p = eval_word(w, trivial_pair());
    if (p != ExponentPair(Rational(52, 243), Rational(50, 81), Rational(202, 243)))
        return "word evaluation mismatch: " + p.str();
    if (theta_budget(p) != Rational(191, 341)) return "budget mismatch";
    const auto prop = proportion_sup(p);
    if (!prop || *prop != Rational(191, 532)) return "proportion mismatch";
    if (!(*prop > Rational(359, 1000))) return "proportion fails 35.9% threshold";
    // B o B adds one to nu and restores (kappa, lambda).
    const ExponentPair bb = apply_B(apply_B(p));
    if (bb.kappa != p.kappa || bb.lambda != p.lambda || bb.nu != p.nu + 1)
        return "B^2 identity failed";
    return "";
}

std::string character_checks(std::uint64_t q) {
    CharacterSet set = CharacterSet::enumerate(q);
    const double root = std::sqrt(static_cast<double>(q));
    for (std::size_t i = 0; i < set.size(); ++i) {
        const auto& chi = set[i];
        if (!chi.is_primitive()) continue;
        const Complex tau = gauss_sum(chi);
        if (std::fabs(std::abs(tau) - root) > 1e-9)
            return "Gauss sum modulus off at q=" + std::to_string(q) +
                   " index=" + std::to_string(i);
        // Conjugate character inverts the root number's phase direction:
        // tau(conj chi) = chi(-1) conj(tau(chi)).
        const auto& chj = set[set.conjugate_index(i)];
        const Complex tau2 = gauss_sum(chj);
        const double parity = chi.is_even() ? 1.0 : -1.0;
        if (std::abs(tau2 - parity * std::conj(tau)) > 1e-9)
            return "Gauss sum conjugation identity off at q=" + std::to_string(q);
    }
    // Orthogonality for a few (m, n).
    for (const auto& [m, n] : std::vector<std::pair<std::uint64_t, std::uint64_t>>{
             {1, 1}, {2, 1}, {4, 2}, {8, 1}}) {
        if (std::gcd(m, q) != 1 || std::gcd(n, q) != 1) continue;
        const auto [lhs, rhs] = orthogonality_check(set, m, n);
        if (std::abs(lhs - rhs) > 1e-8)
            return "orthogonality off at q=" + std::to_string(q) + ", m=" + std::to_string(m) +
                   ", n=" + std::to_string(n);
        const auto [tl, tr] = twisted_sum_check(set, m, n);
        if (std::abs(tl - Complex{tr, 0.0}) > 1e-8)
            return "twisted sum off at q=" + std::to_string(q) + ", m=" + std::to_string(m);
    }
    return "";
}

std::string lvalue_dual_route_checks(const std::vector<std::uint64_t>& moduli) {
    for (const auto q : moduli) {
        CharacterSet set = CharacterSet::enumerate(q);
        const HurwitzTable hur = HurwitzTable::make(q);
        AfeContext even = AfeContext::make(q, 0), odd = AfeContext::make(q, 1);
        for (std::size_t i = 0; i < set.size(); ++i) {
            const auto& chi = set[i];
            if (!chi.is_primitive()) continue;
            const auto a = l_value_afe(chi, static_cast<std::uint32_t>(i),
                                       chi.is_even() ? &even : &odd);
            const auto h = l_value_hurwitz(chi, static_cast<std::uint32_t>(i), &hur);
            if (std::abs(a.value - h.value) > 1e-6)
                return "dual-route disagreement " + std::to_string(std::abs(a.value - h.value)) +
                       " at q=" + std::to_string(q) + " index=" + std::to_string(i);
        }
    }
    return "";
}

std::string partition_checks() {
    DyadicPartition part{40};
    for (double x : {0.37, 1.0, 3.7, 101.5, 1e-6, 65536.0}) {
        const double s = part.partition_sum(x);
        if (std::fabs(s - 1.0) > 1e-12)
            return "partition sum off by " + std::to_string(s - 1.0) + " at x=" +
                   std::to_string(x);
    }
    if (gaussian_theta_residual(2.0) > 1e-12) return "theta self-duality residual too large";
    return "";
}

std::string poisson_checks(bool full) {
    if (poisson_progression_check(64.0, 5, 2, 0.01) > 1e-8) return "N=64,c=5,a=2 residual";
    if (poisson_progression_check(64.0, 1, 0, 0.01) > 1e-8) return "classical c=1 residual";
    if (!full) return "";
    std::mt19937_64 rng(20260822);
    for (int t = 0; t < 12; ++t) {
        const double N = 16 << (rng() % 5);
        const std::uint64_t c = 1 + rng() % 50;
        const std::uint64_t a = rng() % c;
        const double residual = poisson_progression_check(N, c, a, 0.01);
        if (residual > 1e-8)
            return "sweep residual " + std::to_string(residual) + " at N=" + std::to_string(N) +
                   ", c=" + std::to_string(c) + ", a=" + std::to_string(a);
    }
    return "";
}

std::string kloosterman_identity_checks(bool full) {
    // Weil + Parseval + bulk==direct on small tables.
    for (const std::uint64_t c : std::vector<std::uint64_t>{2, 5, 15, 105, 1155}) {
        const auto bulk = kloosterman_bulk(c);
        const auto direct = kloosterman_table_direct(c);
        for (std::uint64_t a = 0; a < c; ++a)
            if (std::fabs(bulk.values[a] - direct.values[a]) > 1e-9)
                return "bulk/direct mismatch at c=" + std::to_string(c) +
                       ", a=" + std::to_string(a);
        if (weil_check(bulk) > 1.0 + 1e-9) return "Weil bound violated at c=" + std::to_string(c);
        if (parseval_deviation(bulk) > 1e-6) return "Parseval off at c=" + std::to_string(c);
        if (std::fabs(bulk.values[0] - mobius(c) / std::sqrt(static_cast<double>(c))) > 1e-9)
            return "Ramanujan value off at c=" + std::to_string(c);
    }
    std::mt19937_64 rng(715);
    const int sweeps = full ? 1000 : 100;
    for (int t = 0; t < sweeps; ++t) {
        std::uint64_t c1 = 1 + rng() % 100, c2 = 1 + rng() % 100;
        if (!is_squarefree(c1) || !is_squarefree(c2) || std::gcd(c1, c2) != 1) continue;
        const std::uint64_t a = rng() % (c1 * c2);
        if (crt_check(a, c1, c2) > 1e-9)
            return "CRT residual at a=" + std::to_string(a) + ", c1=" + std::to_string(c1) +
                   ", c2=" + std::to_string(c2);
    }
    if (full) {
        // The big-table spot check: bulk at c ~ 1e5 against sampled direct sums.
        const std::uint64_t c = 100947; // 3*7*11*19*23
        const auto bulk = kloosterman_bulk(c);
        if (weil_check(bulk) > 1.0 + 1e-9) return "Weil bound violated at c=100947";
        if (parseval_deviation(bulk) > 1e-6) return "Parseval off at c=100947";
        std::mt19937_64 rng2(99);
        for (int t = 0; t < 64; ++t) {
            const std::uint64_t a = rng2() % c;
            if (std::fabs(bulk.values[a] - kloosterman(a, c)) > 1e-9)
                return "bulk/direct spot mismatch at c=100947, a=" + std::to_string(a);
        }
    }
    return "";
}

std::string moment_invariant_checks(std::uint64_t q) {
    MollifierParams p;
    const MomentReport rep = moment_report(q, p, ParityScope::even, 0, nullptr);
    rep.check_invariants(); // throws InvariantError on failure
    if (rep.census.indeterminate != 0)
        return "census indeterminate at q=" + std::to_string(q);
    return "";
}

} // namespace

std::vector<CheckResult> run_verification(const std::string& level, unsigned threads) {
    (void)threads;
    const bool full = level == "full";
    if (!full && level != "quick") throw UsageError("verify level must be quick or full");

    std::vector<NamedCheck> checks;
    checks.push_back({"exponent-pair-chain", true, expair_checks});
    checks.push_back({"characters-q15", true, [] { return character_checks(15); }});
    checks.push_back({"characters-q105", true, [] { return character_checks(105); }});
    checks.push_back({"characters-q1155", false, [] { return character_checks(1155); }});
    checks.push_back(
        {"lvalue-dual-route-small", true,
         [] { return lvalue_dual_route_checks({3, 5, 15, 35}); }});
    checks.push_back(
        {"lvalue-dual-route-medium", false,
         [] { return lvalue_dual_route_checks({105, 1155}); }});
    checks.push_back({"dyadic-partition", true, partition_checks});
    checks.push_back({"poisson-progression", true, [full] { return poisson_checks(full); }});
    checks.push_back(
        {"kloosterman-identities", true, [full] { return kloosterman_identity_checks(full); }});
    checks.push_back({"moment-invariants-q105", true, [] { return moment_invariant_checks(105); }});
    checks.push_back(
        {"moment-invariants-q1155", false, [] { return moment_invariant_checks(1155); }});
    checks.push_back(
        {"moment-invariants-q15015", false, [] { return moment_invariant_checks(15015); }});

    std::vector<CheckResult> results;
    for (const auto& c : checks) {
        if (!full && !c.quick) continue;
        CheckResult r;
        r.name = c.name;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            const std::string reason = c.fn();
            r.pass = reason.empty();
            r.detail = reason;
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail = e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        results.push_back(std::move(r));
    }
    return results;
}

} // namespace nvlab
