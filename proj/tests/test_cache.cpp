#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "nvlab/cache.hpp"

using namespace nvlab;

namespace {

std::filesystem::path fresh_dir(const char* leaf) {
    const auto dir = std::filesystem::temp_directory_path() / leaf;
    std::filesystem::remove_all(dir);
    return dir;
}

} // namespace

TEST_CASE("round trip is bit-identical for 1000 records") {
    const auto dir = fresh_dir("nvlab-test-cache-rt");
    LValueCache cache(dir);
    std::mt19937_64 rng(99);
    std::vector<LValue> records;
    for (std::uint32_t i = 0; i < 1000; ++i) {
        LValue v;
        v.q = 10007;
        v.char_index = i;
        v.method = (i % 2 == 0) ? LMethod::afe : LMethod::hurwitz;
        // stress the format: scales from 1e-300 to 1e300, both signs
        const auto bits_to_unit = [&] {
            return (static_cast<double>(rng() >> 11) * 0x1p-53) * 2.0 - 1.0;
        };
        const int ex = static_cast<int>(rng() % 600) - 300;
        v.value = {std::ldexp(bits_to_unit(), ex % 60), std::ldexp(bits_to_unit(), ex % 200)};
        v.est_error = std::ldexp(std::abs(bits_to_unit()), -(static_cast<int>(rng() % 40)));
        records.push_back(v);
    }
    cache.store(10007, records);
    const auto loaded = cache.load(10007);
    REQUIRE(loaded.size() == 1000);
    for (const auto& v : records) {
        const auto key = std::make_pair(v.char_index, static_cast<std::uint8_t>(v.method));
        REQUIRE(loaded.count(key) == 1);
        const LValue& w = loaded.at(key);
        CHECK(w.value.real() == v.value.real()); // exact, not approximate
        CHECK(w.value.imag() == v.value.imag());
        CHECK(w.est_error == v.est_error);
        CHECK(w.q == 10007);
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("per-q files are independent") {
    const auto dir = fresh_dir("nvlab-test-cache-multiq");
    LValueCache cache(dir);
    LValue a;
    a.q = 7;
    a.char_index = 1;
    a.value = {0.25, -0.5};
    LValue b = a;
    b.q = 11;
    b.value = {1.0, 2.0};
    cache.store(7, {a});
    cache.store(11, {b});
    CHECK(cache.load(7).size() == 1);
    CHECK(cache.load(11).size() == 1);
    CHECK(cache.load(13).empty());
    CHECK(cache.load(7).begin()->second.value.real() == 0.25);
    // re-store replaces rather than appends
    a.value = {0.75, 0.0};
    cache.store(7, {a});
    const auto reloaded = cache.load(7);
    CHECK(reloaded.size() == 1);
    CHECK(reloaded.begin()->second.value.real() == 0.75);
    std::filesystem::remove_all(dir);
}

TEST_CASE("missing directories load as empty and store creates them") {
    const auto dir = fresh_dir("nvlab-test-cache-missing") / "deep" / "nest";
    LValueCache cache(dir);
    CHECK(cache.load(35).empty());
    LValue v;
    v.q = 35;
    v.char_index = 5;
    v.method = LMethod::afe;
    v.value = {0.5, 0.5};
    cache.store(35, {v});
    CHECK(std::filesystem::exists(dir / "lvalues-35.txt"));
    CHECK(cache.load(35).size() == 1);
    std::filesystem::remove_all(std::filesystem::temp_directory_path() /
                                "nvlab-test-cache-missing");
}

TEST_CASE("corrupt lines are skipped, valid ones survive") {
    const auto dir = fresh_dir("nvlab-test-cache-corrupt");
    LValueCache cache(dir);
    LValue v;
    v.q = 15;
    v.char_index = 3;
    v.method = LMethod::hurwitz;
    v.value = {-1.5, 0.25};
    v.est_error = 1e-12;
    cache.store(15, {v});
    // splice garbage around the good line
    const auto file = dir / "lvalues-15.txt";
    std::string good;
    {
        std::ifstream in(file);
        std::getline(in, good);
    }
    {
        std::ofstream out(file, std::ios::trunc);
        out << "not a record at all\n";
        out << good << "\n";
        out << "v1 15 4 9999 zzz zzz zzz\n";
        out << "v1 15\n";
    }
    const auto loaded = cache.load(15);
    REQUIRE(loaded.size() == 1);
    const auto key = std::make_pair(std::uint32_t{3}, std::uint8_t{0});
    REQUIRE(loaded.count(key) == 1);
    CHECK(loaded.at(key).value.real() == -1.5);
    std::filesystem::remove_all(dir);
}

TEST_CASE("records from another format version are ignored") {
    const auto dir = fresh_dir("nvlab-test-cache-version");
    LValueCache cache(dir);
    LValue v;
    v.q = 21;
    v.char_index = 2;
    v.value = {0.125, 0.0};
    cache.store(21, {v});
    const auto file = dir / "lvalues-21.txt";
    std::string line;
    {
        std::ifstream in(file);
        std::getline(in, line);
    }
    REQUIRE(line.rfind("v1 ", 0) == 0);
    {
        std::ofstream out(file, std::ios::trunc);
        out << "v0 " << line.substr(3) << "\n"; // stale format
    }
    CHECK(cache.load(21).empty());
    std::filesystem::remove_all(dir);
}
