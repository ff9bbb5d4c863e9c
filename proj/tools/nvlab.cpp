// nvlab: a desk-scale workbench for mollified central values of Dirichlet
// L-functions — exact exponent-pair calculus, character sums, dual-route
// L-values, Kloosterman tables, and the moment/census pipeline.

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nvlab/cache.hpp"
#include "nvlab/expsums.hpp"
#include "nvlab/lfunc.hpp"
#include "nvlab/moments.hpp"
#include "nvlab/verify.hpp"

namespace {

using namespace nvlab;

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path, std::ios::trunc);
    if (!f) throw UsageError("cannot write " + out_path);
    f << text;
}

ExponentPair parse_pair(const std::string& text) {
    std::istringstream is(text);
    std::string k, l, n;
    if (!(is >> k >> l >> n)) throw UsageError("pair must be three rationals: \"k l n\"");
    std::string extra;
    if (is >> extra) throw UsageError("pair must be exactly three rationals");
    return ExponentPair(parse_rational(k), parse_rational(l), parse_rational(n));
}

std::string resolve_cache_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    const char* env = std::getenv("NVLAB_CACHE_DIR");
    return env ? std::string(env) : std::string();
}

std::string trim_ws(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Merges a plain key=value sheet under the explicit command line.  The
// --config token is consumed here, before option parsing, so it is accepted
// anywhere on the line; each sheet entry whose flag is absent from the
// command line is appended as a trailing --key=value token, which lands on
// the active subcommand.  Explicit flags therefore always win.
std::vector<std::string> merge_config_sheet(std::vector<std::string> args) {
    std::string path;
    std::vector<std::string> out;
    out.reserve(args.size());
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& tok = args[i];
        if (tok == "--config") {
            if (i + 1 >= args.size()) throw UsageError("--config needs a file path");
            if (!path.empty()) throw UsageError("--config given more than once");
            path = args[++i];
        } else if (tok.rfind("--config=", 0) == 0) {
            if (!path.empty()) throw UsageError("--config given more than once");
            path = tok.substr(9);
        } else {
            out.push_back(tok);
        }
    }
    if (path.empty()) return out;

    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file: " + path);
    const auto already_given = [&out](const std::string& key) {
        const std::string plain = "--" + key;
        const std::string with_eq = plain + "=";
        for (const std::string& tok : out)
            if (tok == plain || tok.rfind(with_eq, 0) == 0) return true;
        return false;
    };
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string text = trim_ws(line);
        if (text.empty() || text[0] == '#') continue;
        const auto eq = text.find('=');
        const std::string where = path + ":" + std::to_string(lineno);
        if (eq == std::string::npos) throw UsageError(where + ": expected key=value");
        const std::string key = trim_ws(text.substr(0, eq));
        const std::string value = trim_ws(text.substr(eq + 1));
        if (key.empty()) throw UsageError(where + ": empty key");
        if (key == "config") throw UsageError(where + ": config sheets do not nest");
        if (!already_given(key)) out.push_back("--" + key + "=" + value);
    }
    return out;
}

// ---- expair ---------------------------------------------------------------

int run_expair_eval(const std::string& word_text, const std::string& start_text) {
    const Word w = Word::parse(word_text);
    const ExponentPair start = parse_pair(start_text);
    const ExponentPair p = eval_word(w, start);
    std::ostringstream os;
    os << "word: " << w.text() << "\n";
    os << "pair: " << to_fraction_string(p.kappa) << ' ' << to_fraction_string(p.lambda) << ' '
       << to_fraction_string(p.nu) << "\n";
    os << "admissible: " << (is_admissible(p) ? "yes" : "no") << "\n";
    const Rational budget = theta_budget(p);
    os << "budget: " << to_fraction_string(budget) << " (" << to_decimal_string(budget) << ")\n";
    if (const auto prop = proportion_sup(p)) {
        os << "proportion_sup: " << to_fraction_string(*prop) << " ("
           << to_decimal_string(*prop) << ")\n";
    } else {
        os << "proportion_sup: none (no admissible window above 1/2)\n";
    }
    std::cout << os.str();
    return 0;
}

int run_expair_search(unsigned max_steps, const std::string& start_text, std::size_t limit,
                      const std::string& out_path) {
    const SearchResult res = search_words(max_steps, parse_pair(start_text));
    std::ostringstream os;
    os << "rank,word,kappa,lambda,nu,budget,budget_decimal,proportion,proportion_decimal\n";
    for (std::size_t i = 0; i < res.ranked.size() && i < limit; ++i) {
        const auto& e = res.ranked[i];
        os << i + 1 << ",\"" << e.word.text() << "\"," << to_fraction_string(e.pair.kappa) << ','
           << to_fraction_string(e.pair.lambda) << ',' << to_fraction_string(e.pair.nu) << ','
           << to_fraction_string(e.budget) << ',' << to_decimal_string(e.budget) << ','
           << to_fraction_string(e.proportion) << ',' << to_decimal_string(e.proportion) << '\n';
    }
    emit(out_path, os.str());
    std::cerr << "distinct pairs: " << res.distinct_pairs << ", ranked: " << res.ranked.size()
              << "\n";
    return 0;
}

// ---- char -----------------------------------------------------------------

int run_char_table(std::uint64_t q, const std::string& out_path) {
    CharacterSet set = CharacterSet::enumerate(q);
    std::ostringstream os;
    os.precision(17);
    os << "char_index,local_indices,primitive,parity,re_tau,im_tau\n";
    for (std::size_t i = 0; i < set.size(); ++i) {
        const auto& chi = set[i];
        std::string local;
        const auto& primes = set.modulus().odd_primes;
        for (std::size_t k = 0; k < primes.size(); ++k) {
            if (k) local += '|';
            local += std::to_string(primes[k]) + ':' + std::to_string(chi.local_indices()[k]);
        }
        const Complex tau = gauss_sum(chi);
        os << i << ',' << local << ',' << (chi.is_primitive() ? 1 : 0) << ','
           << (chi.is_even() ? "even" : "odd") << ',' << tau.real() << ',' << tau.imag() << '\n';
    }
    emit(out_path, os.str());
    return 0;
}

// ---- lvalue ---------------------------------------------------------------

int run_lvalue(std::uint64_t q, std::int64_t char_index, const std::string& method,
               const std::string& cache_dir, const std::string& out_path) {
    if (method != "both" && method != "afe" && method != "hurwitz")
        throw UsageError("method must be both, afe or hurwitz");
    CharacterSet set = CharacterSet::enumerate(q);
    std::vector<std::uint32_t> indices;
    if (char_index >= 0) {
        if (static_cast<std::size_t>(char_index) >= set.size())
            throw UsageError("char index out of range");
        indices.push_back(static_cast<std::uint32_t>(char_index));
    } else {
        for (std::size_t i = 0; i < set.size(); ++i)
            if (set[i].is_primitive()) indices.push_back(static_cast<std::uint32_t>(i));
    }
    const bool want_afe = method != "hurwitz";
    const bool want_hur = method != "afe";
    HurwitzTable hur;
    if (want_hur) hur = HurwitzTable::make(q);
    AfeContext even, odd;
    if (want_afe) {
        even = AfeContext::make(q, 0);
        odd = AfeContext::make(q, 1);
    }

    std::vector<LValue> records;
    std::ostringstream os;
    os.precision(17);
    os << "q,char_index,parity,re_L,im_L,method,est_error\n";
    for (const auto i : indices) {
        const auto& chi = set[i];
        const char* parity = chi.is_even() ? "even" : "odd";
        if (want_afe) {
            const LValue v = l_value_afe(chi, i, chi.is_even() ? &even : &odd);
            os << q << ',' << i << ',' << parity << ',' << v.value.real() << ','
               << v.value.imag() << ",afe," << v.est_error << '\n';
            records.push_back(v);
        }
        if (want_hur) {
            const LValue v = l_value_hurwitz(chi, i, &hur);
            os << q << ',' << i << ',' << parity << ',' << v.value.real() << ','
               << v.value.imag() << ",hurwitz," << v.est_error << '\n';
            records.push_back(v);
        }
    }
    if (const std::string dir = resolve_cache_dir(cache_dir); !dir.empty())
        LValueCache(dir).store(q, records);
    emit(out_path, os.str());
    return 0;
}

// ---- moments / census -------------------------------------------------------

int run_moments(std::uint64_t q, MollifierParams params, const std::string& parity,
                const std::string& window_text, const std::string& format, unsigned threads,
                const std::string& cache_dir, const std::string& out_path) {
    if (!window_text.empty()) {
        params.enforce_window = true;
        params.window_pair = parse_pair(window_text);
    }
    std::unique_ptr<LValueCache> cache;
    if (const std::string dir = resolve_cache_dir(cache_dir); !dir.empty())
        cache = std::make_unique<LValueCache>(dir);
    const MomentReport rep =
        moment_report(q, params, parse_parity(parity), threads, cache.get());
    if (format == "json")
        emit(out_path, rep.to_json() + "\n");
    else if (format == "csv")
        emit(out_path, rep.to_csv());
    else
        throw UsageError("format must be csv or json");
    return 0;
}

int run_dump_mollifier(std::uint64_t q, double theta, double eps, const std::string& out_path) {
    const MollifierCoeffs c = MollifierCoeffs::make(q, theta, eps);
    std::ostringstream os;
    os.precision(17);
    os << "m,y_m\n";
    for (std::uint64_t m = 1; m <= c.length; ++m)
        os << m << ',' << y_coeff(m, theta, q, eps) << '\n';
    emit(out_path, os.str());
    return 0;
}

int run_census(std::uint64_t q, double tau0, unsigned threads, const std::string& out_path) {
    const CensusResult c = nonvanishing_census(q, tau0, threads);
    std::ostringstream os;
    os.precision(17);
    os << "q,tau0,total,nonvanishing,vanishing,indeterminate,fraction\n";
    os << q << ',' << c.tau0 << ',' << c.total << ',' << c.nonvanishing << ',' << c.vanishing
       << ',' << c.indeterminate << ',' << c.fraction << '\n';
    emit(out_path, os.str());
    return 0;
}

// ---- kloosterman ------------------------------------------------------------

int run_kl_table(std::uint64_t c, const std::string& out_path) {
    const KloostermanTable t = kloosterman_bulk(c);
    std::ostringstream os;
    os.precision(17);
    os << "a,value\n";
    for (std::uint64_t a = 0; a < t.c; ++a) os << a << ',' << t.values[a] << '\n';
    emit(out_path, os.str());
    return 0;
}

int run_kl_scan(std::uint64_t q, std::uint64_t a, const std::string& lengths_text,
                std::uint64_t trials, std::uint64_t seed, const std::string& out_path) {
    std::vector<std::uint64_t> lengths;
    std::stringstream ss(lengths_text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) lengths.push_back(std::stoull(item));
    if (lengths.empty()) throw UsageError("--lengths needs at least one value");
    const auto rep = short_sum_scan(q, a, PeriodicWeight::ones(), lengths, trials, seed);
    emit(out_path, rep.to_csv());
    return 0;
}

int run_kl_bilinear(std::uint64_t M, std::uint64_t N, std::uint64_t q, std::uint64_t a,
                    std::uint64_t seed, const std::string& dist, const std::string& pair_text,
                    const std::string& out_path) {
    std::mt19937_64 rng(seed);
    const auto draw = [&](std::size_t count) {
        std::vector<Complex> v(count);
        for (auto& x : v) {
            if (dist == "pm1") {
                x = {rng() % 2 == 0 ? 1.0 : -1.0, 0.0};
            } else if (dist == "gaussian") {
                // Box-Muller on fixed 53-bit uniforms keeps runs reproducible.
                const double u1 = (rng() >> 11) * 0x1p-53 + 0x1p-54;
                const double u2 = (rng() >> 11) * 0x1p-53;
                x = {std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2),
                     0.0};
            } else {
                throw UsageError("dist must be pm1 or gaussian");
            }
        }
        return v;
    };
    const auto alpha = draw(M), beta = draw(N);
    const ExponentPair pair = parse_pair(pair_text);
    const BilinearResult res = bilinear_form(alpha, beta, M, N, q, a, PeriodicWeight::ones(), pair);
    std::ostringstream os;
    os.precision(17);
    os << "M,N,q,a,seed,dist,re_value,im_value,bound,bound_ratio\n";
    os << M << ',' << N << ',' << q << ',' << a << ',' << seed << ',' << dist << ','
       << res.value.real() << ',' << res.value.imag() << ',' << res.bound << ','
       << res.bound_ratio << '\n';
    emit(out_path, os.str());
    return 0;
}

// ---- verify -----------------------------------------------------------------

int run_verify(const std::string& level, unsigned threads) {
    const auto results = run_verification(level, threads);
    bool all_pass = true;
    nlohmann::json failures = nlohmann::json::array();
    for (const auto& r : results) {
        std::cout << (r.pass ? "PASS" : "FAIL") << ' ' << r.name << " (" << r.seconds << " s)";
        if (!r.detail.empty()) std::cout << " — " << r.detail;
        std::cout << "\n";
        if (!r.pass) {
            all_pass = false;
            failures.push_back({{"check", r.name}, {"detail", r.detail}});
        }
    }
    std::cout << "failures: " << failures.dump() << "\n";
    return all_pass ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"workbench for non-vanishing of mollified central L-values"};
    app.require_subcommand(0, 1);
    app.set_version_flag("--version",
                         "cache format v" + std::to_string(nvlab::kCacheFormatVersion));
    app.footer("Any command accepts --config FILE: a plain key=value sheet whose entries\n"
               "fill in flags not given explicitly (explicit flags win; '#' comments).");

    // expair
    auto* expair = app.add_subcommand("expair", "exact exponent-pair calculus");
    auto* ev = expair->add_subcommand("eval", "evaluate a word rightmost-first");
    std::string word_text, start_text = "0 1 0";
    ev->add_option("--word", word_text, "e.g. \"B A B A^2 B A^3 B\"")->required();
    ev->add_option("--start", start_text, "start triple, default \"0 1 0\"");
    auto* se = expair->add_subcommand("search", "rank words by smoothness budget");
    unsigned max_steps = 8;
    std::size_t limit = 10;
    std::string search_out;
    se->add_option("--max-steps", max_steps, "maximal run count (default 8)");
    se->add_option("--start", start_text, "start triple");
    se->add_option("--limit", limit, "ranked rows to print");
    se->add_option("--out", search_out, "output path (default stdout)");

    // char
    auto* chr = app.add_subcommand("char", "Dirichlet character tables");
    auto* chr_table = chr->add_subcommand("table", "per-character summary CSV");
    std::uint64_t q = 0;
    std::string out_path, format = "csv";
    chr_table->add_option("--q", q, "square-free modulus")->required();
    chr_table->add_option("--format", format, "csv");
    chr_table->add_option("--out", out_path, "output path");

    // lvalue
    auto* lv = app.add_subcommand("lvalue", "central values by both routes");
    std::int64_t char_index = -1;
    std::string method = "both", cache_dir;
    lv->add_option("--q", q, "square-free modulus")->required();
    lv->add_option("--char-index", char_index, "single character (default: all primitive)");
    lv->add_option("--method", method, "both | afe | hurwitz");
    lv->add_option("--format", format, "csv");
    lv->add_option("--cache-dir", cache_dir, "store records here");
    lv->add_option("--out", out_path, "output path");

    // moments
    auto* mo = app.add_subcommand("moments", "mollified moment reports");
    bool dump_mollifier = false;
    double theta = 0.275;
    mo->add_flag("--dump-mollifier", dump_mollifier, "emit (m, y_m) CSV and exit");
    mo->add_option("--q", q, "modulus for --dump-mollifier");
    mo->add_option("--theta", theta, "theta for --dump-mollifier");
    double eps = 0.02;
    mo->add_option("--eps", eps, "eps for --dump-mollifier");
    mo->add_option("--out", out_path, "output path");
    auto* mr = mo->add_subcommand("run", "full MomentReport");
    MollifierParams params;
    std::string parity = "even", window_text;
    unsigned threads = 0;
    mr->add_option("--q", q, "square-free modulus")->required();
    mr->add_option("--theta1", params.theta1, "IS piece exponent");
    mr->add_option("--theta2", params.theta2, "MV piece exponent");
    mr->add_option("--eps", params.eps, "truncation epsilon");
    mr->add_option("--parity", parity, "even | odd | all");
    mr->add_option("--enforce-window", window_text,
                   "exponent pair \"k l n\" whose budget must admit theta1+theta2");
    mr->add_option("--format", format, "csv | json");
    mr->add_option("--threads", threads, "worker threads (0 = auto)");
    mr->add_option("--cache-dir", cache_dir, "L-value cache directory");
    mr->add_option("--out", out_path, "output path");

    // census
    auto* ce = app.add_subcommand("census", "non-vanishing census");
    double tau0 = 1e-8;
    ce->add_option("--q", q, "square-free modulus")->required();
    ce->add_option("--tau0", tau0, "vanishing threshold");
    ce->add_option("--threads", threads, "worker threads");
    ce->add_option("--out", out_path, "output path");

    // kloosterman
    auto* kl = app.add_subcommand("kloosterman", "Kloosterman tables and scans");
    auto* klt = kl->add_subcommand("table", "bulk table CSV");
    std::uint64_t c = 0, a = 1, trials = 16, seed = 1, M = 64, N = 64;
    klt->add_option("--c", c, "square-free modulus")->required();
    klt->add_option("--format", format, "csv");
    klt->add_option("--out", out_path, "output path");
    auto* kls = kl->add_subcommand("scan", "short-interval cancellation scan");
    std::string lengths_text;
    kls->add_option("--q", q, "square-free modulus")->required();
    kls->add_option("--a", a, "Kloosterman shift (default 1)");
    kls->add_option("--lengths", lengths_text, "comma-separated |I| values")->required();
    kls->add_option("--trials", trials, "random starts per length");
    kls->add_option("--seed", seed, "RNG seed");
    kls->add_option("--out", out_path, "output path");
    auto* klb = kl->add_subcommand("bilinear", "bilinear-form diagnostic");
    std::string dist = "pm1", pair_text = "52/243 50/81 202/243";
    klb->add_option("--M", M, "alpha block length")->required();
    klb->add_option("--N", N, "beta block length")->required();
    klb->add_option("--q", q, "square-free modulus")->required();
    klb->add_option("--a", a, "Kloosterman shift");
    klb->add_option("--seed", seed, "RNG seed");
    klb->add_option("--dist", dist, "pm1 | gaussian");
    klb->add_option("--pair", pair_text, "exponent triple for the reference bound");
    klb->add_option("--out", out_path, "output path");

    // verify
    auto* vf = app.add_subcommand("verify", "run the hard-assert suites");
    std::string level = "quick";
    vf->add_option("--level", level, "quick | full");
    vf->add_option("--threads", threads, "worker threads");

    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        args = merge_config_sheet(std::move(args));
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    }
    std::reverse(args.begin(), args.end()); // the vector overload parses back-to-front
    try {
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        // --help/--version exit 0 through here; all parse failures map onto
        // the usage-error code
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (ev->parsed()) return run_expair_eval(word_text, start_text);
        if (se->parsed()) return run_expair_search(max_steps, start_text, limit, search_out);
        if (chr_table->parsed()) return run_char_table(q, out_path);
        if (lv->parsed()) return run_lvalue(q, char_index, method, cache_dir, out_path);
        if (mr->parsed())
            return run_moments(q, params, parity, window_text, format, threads, cache_dir,
                               out_path);
        if (mo->parsed() && dump_mollifier) {
            if (q == 0) throw UsageError("--dump-mollifier needs --q");
            return run_dump_mollifier(q, theta, eps, out_path);
        }
        if (ce->parsed()) return run_census(q, tau0, threads, out_path);
        if (klt->parsed()) return run_kl_table(c, out_path);
        if (kls->parsed()) return run_kl_scan(q, a, lengths_text, trials, seed, out_path);
        if (klb->parsed())
            return run_kl_bilinear(M, N, q, a, seed, dist, pair_text, out_path);
        if (vf->parsed()) return run_verify(level, threads);
        std::cerr << app.help();
        return 1;
    } catch (const nvlab::NonConvergence& e) {
        std::cerr << "non-convergence: " << e.what() << "\n";
        return 3;
    } catch (const nvlab::InvariantError& e) {
        std::cerr << "invariant failure: " << e.what() << "\n";
        return 2;
    } catch (const nvlab::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
