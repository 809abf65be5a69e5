#pragma once

// Deterministic helper for embarrassingly parallel index ranges. The worker
// count is capped by the TCLT_THREADS environment variable; results must not
// depend on the partitioning (callers write disjoint slots).

#include <cstdlib>
#include <cstdint>
#include <thread>
#include <vector>

namespace rotwalk {

inline unsigned worker_count() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("TCLT_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1 && static_cast<unsigned>(v) < hw) return static_cast<unsigned>(v);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    return hw;
}

template <typename Fn>
void parallel_for(std::uint64_t count, Fn&& fn) {
    unsigned workers = worker_count();
    if (workers <= 1 || count < 1024) {
        for (std::uint64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::uint64_t chunk = (count + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        std::uint64_t lo = w * chunk;
        std::uint64_t hi = std::min<std::uint64_t>(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::uint64_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace rotwalk
