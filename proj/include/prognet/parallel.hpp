#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace prognet {

// PROGNET_THREADS caps worker count; unset or invalid falls back to hardware.
inline unsigned thread_count() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("PROGNET_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return std::min<unsigned>(static_cast<unsigned>(v), hw);
    }
    return hw;
}

// Runs fn(begin, end, block_index) over contiguous blocks of [0, n).
// Callers must make per-block results combine independently of schedule
// (e.g. integer accumulators indexed by block).
inline void parallel_blocks(size_t n,
                            const std::function<void(size_t, size_t, unsigned)>& fn) {
    unsigned workers = std::min<size_t>(thread_count(), n ? n : 1);
    if (workers <= 1) {
        fn(0, n, 0);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        size_t begin = std::min(n, w * chunk);
        size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([=, &fn] { fn(begin, end, w); });
    }
    for (auto& t : pool) t.join();
}

}  // namespace prognet
