#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <json.hpp>

#include "nvlab/errors.hpp"
#include "nvlab/lfunc.hpp"
#include "nvlab/moments.hpp"

using namespace nvlab;

TEST_CASE("parity parsing") {
    CHECK(parse_parity("even") == ParityScope::even);
    CHECK(parse_parity("odd") == ParityScope::odd);
    CHECK(parse_parity("all") == ParityScope::all);
    CHECK_THROWS_AS(parse_parity("both"), UsageError);
}

TEST_CASE("empty scope gives zero moments") {
    // the one primitive character mod 3 is odd
    MollifierParams p;
    CHECK(first_moment(3, p, ParityScope::even) == Complex{0.0, 0.0});
    CHECK(second_moment(3, p, ParityScope::even) == 0.0);
    const MomentReport rep = moment_report(3, p, ParityScope::even);
    CHECK(rep.scope_count == 0);
    CHECK(rep.predicted_first == 0.0);
    CHECK_NOTHROW(rep.check_invariants());
}

TEST_CASE("moments at q = 15 match a direct recomputation") {
    MollifierParams p;
    CharacterSet set = CharacterSet::enumerate(15);
    AfeContext even = AfeContext::make(15, 0), odd = AfeContext::make(15, 1);
    Complex first_even{0.0, 0.0};
    double second_even = 0.0, second_all = 0.0;
    Complex first_all{0.0, 0.0};
    for (const std::size_t i : {std::size_t{3}, std::size_t{5}, std::size_t{7}}) {
        const auto idx = static_cast<std::uint32_t>(i);
        const auto& chi = set[i];
        const Complex L = l_value_afe(chi, idx, chi.is_even() ? &even : &odd).value;
        const Complex LM = L * m_total(chi, p);
        first_all += LM;
        second_all += std::norm(LM);
        if (chi.is_even()) {
            first_even += LM;
            second_even += std::norm(LM);
        }
    }
    CHECK(std::abs(first_moment(15, p, ParityScope::even) - first_even) < 1e-10);
    CHECK(std::abs(second_moment(15, p, ParityScope::even) - second_even) < 1e-10);
    CHECK(std::abs(first_moment(15, p, ParityScope::all) - first_all) < 1e-10);
    const double cs = cs_lower_bound(15, p);
    CHECK(std::abs(cs - std::norm(first_all) / (3.0 * second_all)) < 1e-10);
    CHECK(cs <= 1.0 + 1e-12);
}

TEST_CASE("balanced pieces coincide") {
    MollifierParams p; // theta1 == theta2
    const auto [sis, smv] = piece_moments(105, p, ParityScope::even);
    CHECK(std::abs(sis - smv) < 1e-10 * std::max(1.0, std::abs(sis)));
    MollifierParams lop = p;
    lop.theta1 = 0.3;
    lop.theta2 = 0.2;
    const auto [sis2, smv2] = piece_moments(105, lop, ParityScope::even);
    CHECK(sis2 > 0.0);
    CHECK(smv2 > 0.0);
}

TEST_CASE("report fields, predictions, and invariants") {
    MollifierParams p;
    const MomentReport rep = moment_report(105, p, ParityScope::even);
    CHECK(rep.q == 105);
    CHECK(rep.phi_star_count == 15);
    CHECK(rep.phi_plus_count == 7);
    CHECK(rep.scope_count == 7);
    CHECK(rep.predicted_first == 7.0);
    CHECK(std::abs(rep.predicted_second - (1.0 + 1.0 / 0.55) * 7.0) < 1e-12);
    CHECK(rep.second_moment > 0.0);
    CHECK(rep.census.total == 15);
    CHECK(rep.census.fraction >= rep.cs_bound - 1e-9);
    CHECK_NOTHROW(rep.check_invariants());

    const MomentReport odd = moment_report(105, p, ParityScope::odd);
    CHECK(odd.scope_count == 15 - 7);
    const MomentReport all = moment_report(105, p, ParityScope::all);
    CHECK(all.scope_count == 15);
    // scope additivity of the first moment
    CHECK(std::abs(all.first_moment - (rep.first_moment + odd.first_moment)) < 1e-9);
    CHECK(std::abs(all.second_moment - (rep.second_moment + odd.second_moment)) < 1e-9);
}

TEST_CASE("deterministic reductions: repeated runs agree bitwise") {
    MollifierParams p;
    const MomentReport a = moment_report(105, p, ParityScope::all, 1);
    const MomentReport b = moment_report(105, p, ParityScope::all, 4);
    CHECK(a.first_moment.real() == b.first_moment.real());
    CHECK(a.first_moment.imag() == b.first_moment.imag());
    CHECK(a.second_moment == b.second_moment);
    CHECK(a.sigma_is == b.sigma_is);
    CHECK(a.sigma_mv == b.sigma_mv);
    CHECK(a.cs_bound == b.cs_bound);
    CHECK(a.census.nonvanishing == b.census.nonvanishing);
}

TEST_CASE("census at small moduli") {
    const CensusResult c = nonvanishing_census(15);
    CHECK(c.total == 3);
    CHECK(c.nonvanishing == 3);
    CHECK(c.vanishing == 0);
    CHECK(c.indeterminate == 0);
    CHECK(c.fraction == 1.0);
    // an absurd threshold classifies everything as vanishing
    const CensusResult z = nonvanishing_census(15, 1e6);
    CHECK(z.nonvanishing == 0);
    CHECK(z.fraction == 0.0);
    CHECK(z.vanishing == 3);
}

TEST_CASE("serialization") {
    MollifierParams p;
    const MomentReport rep = moment_report(15, p, ParityScope::even);
    const std::string csv = rep.to_csv();
    CHECK(csv.find("q,theta1,theta2,eps,parity,") == 0);
    CHECK(csv.find("\n15,") != std::string::npos);
    // exactly header + one row
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);

    const auto j = nlohmann::json::parse(rep.to_json());
    CHECK(j["q"] == 15);
    CHECK(j["parity"] == "even");
    CHECK(j["scope_count"] == 2);
    CHECK(std::abs(j["first_moment"]["re"].get<double>() - rep.first_moment.real()) == 0.0);
    CHECK(std::abs(j["census"]["fraction"].get<double>() - rep.census.fraction) == 0.0);
}

TEST_CASE("domain guards") {
    MollifierParams p;
    CHECK_THROWS_AS(moment_report(2, p, ParityScope::even), UsageError);
    CHECK_THROWS_AS(moment_report(200001, p, ParityScope::even), UsageError);
    CHECK_THROWS_AS(moment_report(12, p, ParityScope::even), SquarefreeRequired);
    MollifierParams bad;
    bad.eps = 0.5;
    CHECK_THROWS_AS(moment_report(15, bad, ParityScope::even), ProvisoViolated);
}

TEST_CASE("cached and uncached runs coincide") {
    const std::filesystem::path dir =
        std::filesystem::temp_directory_path() / "nvlab-test-moments-cache";
    std::filesystem::remove_all(dir);
    LValueCache cache(dir);
    MollifierParams p;
    const MomentReport cold = moment_report(35, p, ParityScope::all, 0, &cache);
    CHECK(std::filesystem::exists(dir / "lvalues-35.txt"));
    const MomentReport warm = moment_report(35, p, ParityScope::all, 0, &cache);
    CHECK(cold.first_moment.real() == warm.first_moment.real());
    CHECK(cold.second_moment == warm.second_moment);
    CHECK(cold.census.nonvanishing == warm.census.nonvanishing);
    const MomentReport plain = moment_report(35, p, ParityScope::all);
    CHECK(std::abs(plain.second_moment - cold.second_moment) < 1e-12);
    std::filesystem::remove_all(dir);
}
