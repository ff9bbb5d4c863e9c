#include "nvlab/moments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "nvlab/lfunc.hpp"
#include "nvlab/parallel.hpp"

namespace nvlab {

ParityScope parse_parity(const std::string& s) {
    if (s == "even") return ParityScope::even;
    if (s == "odd") return ParityScope::odd;
    if (s == "all") return ParityScope::all;
    throw UsageError("parity must be even, odd or all");
}

namespace {

struct Row {
    std::uint32_t set_index = 0;
    bool even = false;
    Complex l_afe{0.0, 0.0};
    Complex l_hur{0.0, 0.0};
    bool have_hur = false;
    Complex m_is{0.0, 0.0};
    Complex m_mv{0.0, 0.0};
};

struct Engine {
    std::uint64_t q = 0;
    MollifierParams params;
    std::vector<Row> rows; // primitive characters in set-index order
    std::uint64_t phi_star_n = 0, phi_plus_n = 0;

    bool in_scope(const Row& r, ParityScope s) const {
        return s == ParityScope::all || (s == ParityScope::even) == r.even;
    }
    std::uint64_t scope_count(ParityScope s) const {
        if (s == ParityScope::even) return phi_plus_n;
        if (s == ParityScope::odd) return phi_star_n - phi_plus_n;
        return phi_star_n;
    }
};

Engine compute_engine(std::uint64_t q, const MollifierParams& params, bool need_hurwitz,
                      unsigned threads, const LValueCache* cache) {
    params.validate();
    if (q < 3 || q > 100000) throw UsageError("moments: q must lie in [3, 1e5]");
    Engine eng;
    eng.q = q;
    eng.params = params;

    CharacterSet set = CharacterSet::enumerate(q);
    eng.phi_star_n = phi_star(set);
    eng.phi_plus_n = phi_plus(set);

    std::vector<std::uint32_t> prim;
    for (std::size_t i = 0; i < set.size(); ++i)
        if (set[i].is_primitive()) prim.push_back(static_cast<std::uint32_t>(i));
    eng.rows.resize(prim.size());

    const MollifierCoeffs c1 = MollifierCoeffs::make(q, params.theta1, params.eps);
    const MollifierCoeffs c2 = MollifierCoeffs::make(q, params.theta2, params.eps);

    // Shared per-parity AFE tables and (optionally) the Hurwitz table.
    bool any_even = false, any_odd = false;
    for (const auto i : prim) {
        (set[i].is_even() ? any_even : any_odd) = true;
        if (any_even && any_odd) break;
    }
    AfeContext afe_even, afe_odd;
    if (any_even) afe_even = AfeContext::make(q, 0);
    if (any_odd) afe_odd = AfeContext::make(q, 1);
    HurwitzTable hur;
    if (need_hurwitz) hur = HurwitzTable::make(q);

    // Cache preload.
    std::map<std::pair<std::uint32_t, std::uint8_t>, LValue> cached;
    if (cache) cached = cache->load(q);
    std::atomic<bool> cache_dirty{false};

    parallel_for(prim.size(), threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) {
            const std::uint32_t idx = prim[k];
            DirichletCharacter chi = set[idx]; // worker-private copy
            if (!chi.has_table()) chi.build_table();
            Row row;
            row.set_index = idx;
            row.even = chi.is_even();

            const auto it_afe = cached.find({idx, static_cast<std::uint8_t>(LMethod::afe)});
            if (it_afe != cached.end()) {
                row.l_afe = it_afe->second.value;
            } else {
                const AfeContext& ctx = row.even ? afe_even : afe_odd;
                try {
                    row.l_afe = l_value_afe(chi, idx, &ctx).value;
                } catch (const NonConvergence&) {
                    // Oracle route as fallback.
                    row.l_afe = l_value_hurwitz(chi, idx, need_hurwitz ? &hur : nullptr).value;
                }
                cache_dirty = true;
            }
            if (need_hurwitz) {
                const auto it_h = cached.find({idx, static_cast<std::uint8_t>(LMethod::hurwitz)});
                if (it_h != cached.end()) {
                    row.l_hur = it_h->second.value;
                } else {
                    row.l_hur = l_value_hurwitz(chi, idx, &hur).value;
                    cache_dirty = true;
                }
                row.have_hur = true;
            }

            const Complex eps_chi = root_number(chi);
            row.m_is = m_is_with(chi, c1);
            row.m_mv = m_mv_with(chi, c2, eps_chi);
            eng.rows[k] = row;
        }
    });

    if (cache && cache_dirty) {
        std::vector<LValue> records;
        records.reserve(eng.rows.size() * 2);
        for (const auto& r : eng.rows) {
            records.push_back(
                LValue{q, r.set_index, LMethod::afe, r.l_afe, 0.0});
            if (r.have_hur)
                records.push_back(LValue{q, r.set_index, LMethod::hurwitz, r.l_hur, 0.0});
        }
        cache->store(q, records);
    }
    return eng;
}

Complex first_from(const Engine& eng, ParityScope scope) {
    std::vector<Complex> terms;
    for (const auto& r : eng.rows)
        if (eng.in_scope(r, scope))
            terms.push_back(r.l_afe * m_total_from_pieces(r.m_is, r.m_mv, eng.params));
    return pairwise_sum(std::move(terms));
}

double second_from(const Engine& eng, ParityScope scope) {
    std::vector<double> terms;
    for (const auto& r : eng.rows)
        if (eng.in_scope(r, scope))
            terms.push_back(
                std::norm(r.l_afe * m_total_from_pieces(r.m_is, r.m_mv, eng.params)));
    return pairwise_sum(std::move(terms));
}

std::pair<double, double> pieces_from(const Engine& eng, ParityScope scope) {
    std::vector<double> is_terms, mv_terms;
    for (const auto& r : eng.rows) {
        if (!eng.in_scope(r, scope)) continue;
        is_terms.push_back(std::norm(r.l_afe * r.m_is));
        mv_terms.push_back(std::norm(r.l_afe * r.m_mv));
    }
    return {pairwise_sum(std::move(is_terms)), pairwise_sum(std::move(mv_terms))};
}

double cs_from(const Engine& eng) {
    const Complex num_sum = first_from(eng, ParityScope::all);
    const double den_sum = second_from(eng, ParityScope::all);
    const double den = static_cast<double>(eng.phi_star_n) * den_sum;
    if (den < 1e-300)
        throw DegenerateDenominator("cs bound denominator underflow at q=" +
                                    std::to_string(eng.q));
    return std::norm(num_sum) / den;
}

CensusResult census_from(const Engine& eng, double tau0) {
    CensusResult c;
    c.tau0 = tau0;
    c.total = eng.rows.size();
    for (const auto& r : eng.rows) {
        if (!r.have_hur) throw InvariantError("census needs both L-value routes");
        const bool a = std::abs(r.l_afe) > tau0;
        const bool h = std::abs(r.l_hur) > tau0;
        if (a && h)
            ++c.nonvanishing;
        else if (!a && !h)
            ++c.vanishing;
        else
            ++c.indeterminate;
    }
    c.fraction = c.total ? static_cast<double>(c.nonvanishing) / static_cast<double>(c.total) : 0.0;
    return c;
}

} // namespace

Complex first_moment(std::uint64_t q, const MollifierParams& params, ParityScope scope,
                     unsigned threads) {
    return first_from(compute_engine(q, params, false, threads, nullptr), scope);
}

double second_moment(std::uint64_t q, const MollifierParams& params, ParityScope scope,
                     unsigned threads) {
    return second_from(compute_engine(q, params, false, threads, nullptr), scope);
}

std::pair<double, double> piece_moments(std::uint64_t q, const MollifierParams& params,
                                        ParityScope scope, unsigned threads) {
    return pieces_from(compute_engine(q, params, false, threads, nullptr), scope);
}

double cs_lower_bound(std::uint64_t q, const MollifierParams& params, unsigned threads) {
    return cs_from(compute_engine(q, params, false, threads, nullptr));
}

CensusResult nonvanishing_census(std::uint64_t q, double tau0, unsigned threads) {
    MollifierParams p; // census does not involve the mollifier; defaults suffice
    return census_from(compute_engine(q, p, true, threads, nullptr), tau0);
}

MomentReport moment_report(std::uint64_t q, const MollifierParams& params, ParityScope scope,
                           unsigned threads, const LValueCache* cache) {
    const auto t0 = std::chrono::steady_clock::now();
    const Engine eng = compute_engine(q, params, true, threads, cache);
    MomentReport rep;
    rep.q = q;
    rep.params = params;
    rep.scope = scope;
    rep.phi_star_count = eng.phi_star_n;
    rep.phi_plus_count = eng.phi_plus_n;
    rep.scope_count = eng.scope_count(scope);
    rep.first_moment = first_from(eng, scope);
    rep.second_moment = second_from(eng, scope);
    const double n = static_cast<double>(rep.scope_count);
    rep.predicted_first = n;
    rep.predicted_second = (1.0 + 1.0 / (params.theta1 + params.theta2)) * n;
    std::tie(rep.sigma_is, rep.sigma_mv) = pieces_from(eng, scope);
    rep.cs_bound = cs_from(eng);
    rep.census = census_from(eng, 1e-8);
    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rep.check_invariants();
    return rep;
}

namespace {
const char* scope_name(ParityScope s) {
    switch (s) {
        case ParityScope::even: return "even";
        case ParityScope::odd: return "odd";
        case ParityScope::all: return "all";
    }
    return "?";
}
} // namespace

void MomentReport::check_invariants() const {
    if (!(second_moment >= 0.0)) throw InvariantError("second moment negative");
    if (!(cs_bound >= 0.0 && cs_bound <= census.fraction + 1e-9))
        throw InvariantError("cs bound " + std::to_string(cs_bound) +
                             " exceeds census fraction " + std::to_string(census.fraction));
    if (!(census.fraction >= 0.0 && census.fraction <= 1.0))
        throw InvariantError("census fraction out of [0,1]");
    if (scope_count > 0) {
        const double cs_scope = std::norm(first_moment) / static_cast<double>(scope_count);
        if (second_moment + 1e-9 * (1.0 + cs_scope) < cs_scope)
            throw InvariantError("second moment violates Cauchy-Schwarz against first");
    }
}

std::string MomentReport::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "q,theta1,theta2,eps,parity,phi_star,phi_plus,scope_count,"
          "first_re,first_im,second,predicted_first,predicted_second,"
          "sigma_is,sigma_mv,cs_bound,census_fraction,census_nonvanishing,"
          "census_vanishing,census_indeterminate,wall_seconds\n";
    os << q << ',' << params.theta1 << ',' << params.theta2 << ',' << params.eps << ','
       << scope_name(scope) << ',' << phi_star_count << ',' << phi_plus_count << ','
       << scope_count << ',' << first_moment.real() << ',' << first_moment.imag() << ','
       << second_moment << ',' << predicted_first << ',' << predicted_second << ','
       << sigma_is << ',' << sigma_mv << ',' << cs_bound << ',' << census.fraction << ','
       << census.nonvanishing << ',' << census.vanishing << ',' << census.indeterminate << ','
       << wall_seconds << '\n';
    return os.str();
}

std::string MomentReport::to_json() const {
    nlohmann::json j;
    j["q"] = q;
    j["params"] = {{"theta1", params.theta1},
                   {"theta2", params.theta2},
                   {"eps", params.eps},
                   {"enforce_window", params.enforce_window}};
    j["parity"] = scope_name(scope);
    j["phi_star"] = phi_star_count;
    j["phi_plus"] = phi_plus_count;
    j["scope_count"] = scope_count;
    j["first_moment"] = {{"re", first_moment.real()}, {"im", first_moment.imag()}};
    j["second_moment"] = second_moment;
    j["predicted_first"] = predicted_first;
    j["predicted_second"] = predicted_second;
    j["sigma_is"] = sigma_is;
    j["sigma_mv"] = sigma_mv;
    j["cs_bound"] = cs_bound;
    j["census"] = {{"tau0", census.tau0},
                   {"total", census.total},
                   {"nonvanishing", census.nonvanishing},
                   {"vanishing", census.vanishing},
                   {"indeterminate", census.indeterminate},
                   {"fraction", census.fraction}};
    j["wall_seconds"] = wall_seconds;
    return j.dump(2);
}

} // namespace nvlab
