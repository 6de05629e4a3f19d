#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace conflictlab {

/// Resolve a worker-count setting: values <= 0 mean "use available parallelism".
inline int resolve_workers(int requested) {
    if (requested > 0) return requested;
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

/// Run fn(i) for i in [0, n) on up to `workers` threads with a static block
/// partition. Each index is processed exactly once; exceptions are rethrown
/// (the one thrown by the lowest-indexed block wins). Results must be written
/// to per-index slots by the caller, which keeps reductions deterministic.
inline void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
    const int w = resolve_workers(workers);
    if (n == 0) return;
    if (w <= 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const std::size_t nthreads = std::min<std::size_t>(static_cast<std::size_t>(w), n);
    std::vector<std::exception_ptr> errors(nthreads);
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (std::size_t t = 0; t < nthreads; ++t) {
        pool.emplace_back([&, t]() {
            const std::size_t lo = n * t / nthreads;
            const std::size_t hi = n * (t + 1) / nthreads;
            try {
                for (std::size_t i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace conflictlab
