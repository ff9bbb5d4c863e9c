#include "nvlab/cache.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace nvlab {

LValueCache::LValueCache(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw UsageError("cache: cannot create directory " + dir_.string());
}

std::filesystem::path LValueCache::file_for(std::uint64_t q) const {
    return dir_ / ("lvalues-" + std::to_string(q) + ".txt");
}

std::map<std::pair<std::uint32_t, std::uint8_t>, LValue> LValueCache::load(std::uint64_t q) const {
    std::map<std::pair<std::uint32_t, std::uint8_t>, LValue> out;
    std::ifstream in(file_for(q));
    if (!in) return out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        int version = -1;
        unsigned long long rq = 0;
        unsigned idx = 0, method = 0;
        double precision = 0.0, re = 0.0, im = 0.0;
        // v1 15 3 1 1e-12 0x1.ec2...p-2 0x0p+0
        const int n = std::sscanf(line.c_str(), "v%d %llu %u %u %la %la %la", &version, &rq, &idx,
                                  &method, &precision, &re, &im);
        if (n != 7 || rq != q || method > 1) {
            std::cerr << "cache: skipping corrupt line " << lineno << " in " << file_for(q)
                      << "\n";
            continue;
        }
        if (version != kCacheFormatVersion) continue; // stale version: recompute
        LValue v;
        v.q = q;
        v.char_index = idx;
        v.method = static_cast<LMethod>(method);
        v.est_error = precision;
        v.value = {re, im};
        out[{idx, static_cast<std::uint8_t>(method)}] = v;
    }
    return out;
}

void LValueCache::store(std::uint64_t q, const std::vector<LValue>& records) const {
    const auto target = file_for(q);
    const auto tmp = target.string() + ".tmp";
    {
        std::ofstream outf(tmp, std::ios::trunc);
        if (!outf) throw UsageError("cache: cannot write " + tmp);
        char buf[256];
        for (const auto& r : records) {
            std::snprintf(buf, sizeof buf, "v%d %llu %u %u %a %a %a\n", kCacheFormatVersion,
                          static_cast<unsigned long long>(r.q), r.char_index,
                          static_cast<unsigned>(r.method), r.est_error, r.value.real(),
                          r.value.imag());
            outf << buf;
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec) throw UsageError("cache: rename into " + target.string() + " failed");
}

} // namespace nvlab
