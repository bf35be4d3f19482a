#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace cellwalk {

/// Worker count: CELLWALK_THREADS if set (>= 1), else hardware concurrency.
inline int worker_count(int requested = 0) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("CELLWALK_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Run fn(chunk_index, begin, end) over [0, n) split into fixed-size chunks.
/// Chunk boundaries are independent of the thread count, so per-chunk
/// results can be reduced in chunk order deterministically.
inline void parallel_chunks(long n, long chunk_size, int threads,
                            const std::function<void(long, long, long)>& fn) {
    if (n <= 0) return;
    const long n_chunks = (n + chunk_size - 1) / chunk_size;
    const int n_threads = std::min<long>(worker_count(threads), n_chunks);
    if (n_threads <= 1) {
        for (long c = 0; c < n_chunks; ++c)
            fn(c, c * chunk_size, std::min(n, (c + 1) * chunk_size));
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    std::atomic<long> next{0};
    for (int t = 0; t < n_threads; ++t) {
        pool.emplace_back([&] {
            for (long c = next.fetch_add(1); c < n_chunks; c = next.fetch_add(1))
                fn(c, c * chunk_size, std::min(n, (c + 1) * chunk_size));
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace cellwalk
