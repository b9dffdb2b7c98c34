#pragma once

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace hypercover {

// Worker count: HYPERCOVER_THREADS caps it, otherwise hardware concurrency.
inline int worker_count() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw <= 0) hw = 1;
    if (const char* env = std::getenv("HYPERCOVER_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1 && v < hw) return static_cast<int>(v);
        if (v >= hw) return hw;
    }
    return hw;
}

// Runs f(chunk_index) for chunk_index in [0, n_chunks). Chunks are claimed
// from a shared counter; each chunk writes only to its own slot, so the
// outcome is identical for any worker count. Callers must reduce the
// per-chunk results in index order if the reduction is not associative.
template <typename F>
void for_each_chunk(std::int64_t n_chunks, F&& f) {
    const int workers = std::min<std::int64_t>(worker_count(), n_chunks) > 0
                            ? static_cast<int>(std::min<std::int64_t>(worker_count(), n_chunks))
                            : 1;
    if (workers <= 1) {
        for (std::int64_t i = 0; i < n_chunks; ++i) f(i);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::int64_t i = next.fetch_add(1);
                if (i >= n_chunks) break;
                f(i);
            }
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace hypercover
