#pragma once
// Thread-pool-free parallel helpers: chunked parallel_for over an index
// range, and deterministic pairwise reduction so sums do not depend on the
// thread count or interleaving.

#include <complex>
#include <cstddef>
#include <thread>
#include <vector>

namespace nvlab {

inline unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// fn(begin, end) over disjoint contiguous chunks. Exceptions from workers
// are rethrown on the caller thread (first one wins).
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
    threads = resolve_threads(threads);
    if (n == 0) return;
    if (threads <= 1 || n == 1) {
        fn(std::size_t{0}, n);
        return;
    }
    const std::size_t nt = std::min<std::size_t>(threads, n);
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(nt);
    const std::size_t chunk = (n + nt - 1) / nt;
    for (std::size_t t = 0; t < nt; ++t) {
        const std::size_t b = t * chunk, e = std::min(n, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&, t, b, e] {
            try {
                fn(b, e);
            } catch (...) {
                errs[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& ep : errs)
        if (ep) std::rethrow_exception(ep);
}

// Pairwise (tree) summation of a fixed-order sequence: the result depends
// only on element order, never on how the elements were produced.
template <typename T>
T pairwise_sum(std::vector<T> v) {
    if (v.empty()) return T{};
    std::size_t n = v.size();
    while (n > 1) {
        const std::size_t half = n / 2;
        for (std::size_t i = 0; i < half; ++i) v[i] = v[2 * i] + v[2 * i + 1];
        if (n % 2) {
            v[half] = v[n - 1];
            n = half + 1;
        } else {
            n = half;
        }
    }
    return v[0];
}

} // namespace nvlab
