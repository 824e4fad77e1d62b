// Copyright (c) 2026 totemkit contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef TOTEMKIT_PARALLEL_HPP
#define TOTEMKIT_PARALLEL_HPP

#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace totemkit {

/// Number of fixed index chunks used for deterministic reductions. Work is
/// partitioned by chunk index regardless of the worker count, so any
/// per-chunk accumulation merged in chunk order is thread-count invariant.
inline constexpr int kReduceChunks = 16;

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Run fn(chunk_index, begin, end) over `count` items split into n_chunks
/// contiguous ranges. Chunk boundaries depend only on count and n_chunks.
/// Exceptions from workers are rethrown on the calling thread.
inline void parallel_chunks(int64_t count, int n_chunks, int n_threads,
                            const std::function<void(int, int64_t, int64_t)>& fn) {
    if (count <= 0) return;
    if (n_chunks > count) n_chunks = static_cast<int>(count);
    if (n_chunks < 1) n_chunks = 1;
    n_threads = resolve_threads(n_threads);

    auto chunk_range = [&](int c) {
        const int64_t lo = count * c / n_chunks;
        const int64_t hi = count * (c + 1) / n_chunks;
        return std::pair<int64_t, int64_t>{lo, hi};
    };

    if (n_threads <= 1 || n_chunks == 1) {
        for (int c = 0; c < n_chunks; ++c) {
            auto [lo, hi] = chunk_range(c);
            fn(c, lo, hi);
        }
        return;
    }

    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> workers;
    const int workers_n = std::min(n_threads, n_chunks);
    workers.reserve(workers_n);
    for (int w = 0; w < workers_n; ++w) {
        workers.emplace_back([&, w]() {
            for (int c = w; c < n_chunks; c += workers_n) {
                auto [lo, hi] = chunk_range(c);
                try {
                    fn(c, lo, hi);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : workers) t.join();
    if (error) std::rethrow_exception(error);
}

/// Convenience: parallel loop over [0, count) where iterations are independent
/// and write to disjoint outputs.
inline void parallel_for(int64_t count, int n_threads, const std::function<void(int64_t)>& fn) {
    const int chunks = std::max(kReduceChunks, resolve_threads(n_threads));
    parallel_chunks(count, chunks, n_threads, [&](int, int64_t lo, int64_t hi) {
        for (int64_t i = lo; i < hi; ++i) fn(i);
    });
}

}  // namespace totemkit

#endif
