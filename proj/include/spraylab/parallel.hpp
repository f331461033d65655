// Chunked parallel_for over an index range.
#pragma once

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace spraylab {

inline int default_thread_count() {
    if (const char* env = std::getenv("SPRAYLAB_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 2;
}

// fn(begin, end, worker_index) runs on contiguous chunks.  Results must be
// written to per-index slots or per-worker accumulators so the outcome
// does not depend on the schedule.
template <typename Fn>
void parallel_chunks(size_t n, const Fn& fn, int n_threads = 0) {
    if (n_threads <= 0) n_threads = default_thread_count();
    n_threads = std::max(1, std::min<int>(n_threads, static_cast<int>(n)));
    if (n_threads == 1 || n < 64) {
        fn(size_t{0}, n, 0);
        return;
    }
    std::vector<std::thread> pool;
    const size_t chunk = (n + n_threads - 1) / n_threads;
    for (int w = 0; w < n_threads; ++w) {
        const size_t b = std::min(n, w * chunk);
        const size_t e = std::min(n, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&fn, b, e, w] { fn(b, e, w); });
    }
    for (auto& t : pool) t.join();
}

}  // namespace spraylab
